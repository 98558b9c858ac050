#include <cstdint>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "epfw/cli/commands.hpp"
#include "epfw/errors.hpp"

namespace {

using Command = int (*)(epfw::cli::RunConfig, const epfw::cli::CommonFlags&);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"epfw: day-ahead electricity price forecasting workbench"};
  app.require_subcommand(1);
  app.footer(
      "exit codes: 0 success, 1 usage, 2 configuration error, 3 data error, "
      "4 run failure");

  std::string config_path = "epfw.json";
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 0;
  bool stats = false;

  const struct {
    const char* name;
    const char* help;
    Command run;
  } subs[] = {
      {"synth", "Generate the synthetic aligned dataset", epfw::cli::cmd_synth},
      {"ingest", "Parse, repair and align the configured sources",
       epfw::cli::cmd_ingest},
      {"analyze", "Write feature/target correlation tables",
       epfw::cli::cmd_analyze},
      {"select-features", "Backward-eliminate features with a linear trainer",
       epfw::cli::cmd_select_features},
      {"tune", "Grid-search one model's hyperparameters", epfw::cli::cmd_tune},
      {"backtest", "Run the quarterly walk-forward evaluation and reports",
       epfw::cli::cmd_backtest},
  };

  std::map<const CLI::App*, Command> dispatch;
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
    cmd->add_option("--config", config_path, "Config file (JSON)")
        ->capture_default_str();
    cmd->add_option("--out", out, "Override the config's output directory");
    cmd->add_option("--seed", seed, "Override the config's seed");
    cmd->add_option("--jobs", jobs, "Concurrent backtest runs");
    cmd->add_flag("--stats", stats, "Print per-year summary statistics");
    dispatch[cmd] = sub.run;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  epfw::cli::CommonFlags flags;
  if (chosen->count("--out") > 0) flags.out = out;
  if (chosen->count("--seed") > 0) flags.seed = seed;
  if (chosen->count("--jobs") > 0) flags.jobs = jobs;
  flags.stats = stats;

  try {
    epfw::cli::RunConfig config = epfw::cli::load_config(config_path);
    return dispatch.at(chosen)(std::move(config), flags);
  } catch (const epfw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const epfw::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const epfw::RunError& e) {
    std::cerr << "run error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
