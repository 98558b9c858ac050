#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "epfw/cli/commands.hpp"
#include "epfw/cli/config.hpp"
#include "epfw/errors.hpp"
#include "epfw/ingest/dataset.hpp"
#include "helpers.hpp"

using namespace epfw;
using namespace epfw::cli;

namespace {

// A config that drives every command off one small generated dataset.
const char* kSmallConfig = R"({
  "version": 1,
  "seed": 21,
  "output_dir": "out",
  "synthetic": {"start": "2020-01-01", "end": "2021-03-31"},
  "features": {
    "base": ["total_demand", "eu_gas_price", "total_wind_generation"],
    "lags": [{"column": "dam_price", "hours": 24},
             {"column": "dam_price", "hours": 168}],
    "calendar": ["month"]
  },
  "models": [{"kind": "linear_regression"}, {"kind": "dense0"},
             {"kind": "gradient_boost", "trees": 10}],
  "analysis": {"features": ["eu_gas_price", "total_wind_generation"]},
  "selection": {"trainer": "linear_regression", "validation_fraction": 0.25},
  "tune": {"model": "gradient_boost",
           "grid": [{"param": "trees", "values": [5, 10]}],
           "budget": 16},
  "backtest": {
    "quarters": ["2021Q1"],
    "traces": [{"quarter": "2021Q1", "models": ["linear_regression"],
                "week": {"start": "2021-01-04", "end": "2021-01-08"}}]
  }
})";

std::filesystem::path write_config(const test::TempDir& dir,
                                   const std::string& text,
                                   const std::string& name = "epfw.json") {
  const auto path = dir.file(name);
  test::write_text(path, text);
  return path;
}

std::vector<std::string> sorted_files(const std::filesystem::path& dir) {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

}  // namespace

TEST_CASE("load_config reads every section") {
  test::TempDir dir("epfw-config");
  const auto path = write_config(dir, kSmallConfig);
  const RunConfig config = load_config(path);

  CHECK(config.seed == 21);
  CHECK(config.jobs == 1);
  CHECK(config.base_dir == std::filesystem::absolute(path).parent_path());
  CHECK(config.output_dir == config.base_dir / "out");
  CHECK(config.aligned_path == config.base_dir / "out" / "aligned.csv");
  CHECK(config.aligned_path_defaulted);

  REQUIRE(config.synthetic.has_value());
  CHECK(config.synthetic->range.start == Date::parse("2020-01-01"));
  CHECK(config.feature_spec.column_names().size() == 6);
  CHECK(config.feature_spec.max_lag_hours() == 168);

  REQUIRE(config.models.size() == 3);
  CHECK(config.models[0].name == "linear_regression");
  CHECK(config.models[2].kind() == "gradient_boost");
  CHECK(std::get<models::GradientBoostParams>(config.models[2].params).trees ==
        10);
  for (const auto& spec : config.models) {
    CHECK(spec.seed == 21);  // inherits the top-level seed
  }
  CHECK_THROWS_WITH_AS(config.model_named("mlp_4n"),
                       doctest::Contains("no configured model"), ConfigError);

  CHECK(config.analysis.features.size() == 2);
  REQUIRE(config.selection.has_value());
  CHECK(config.selection->trainer == "linear_regression");
  CHECK(config.selection->validation_fraction == 0.25);
  REQUIRE(config.tune.has_value());
  CHECK(config.tune->model == "gradient_boost");
  CHECK(config.tune->budget == 16);
  REQUIRE(config.backtest.has_value());
  CHECK(config.backtest->quarters == std::vector<std::string>{"2021Q1"});
  REQUIRE(config.backtest->traces.size() == 1);
  CHECK(config.backtest->traces[0].week.start == Date::parse("2021-01-04"));
}

TEST_CASE("load_config defaults and overrides") {
  test::TempDir dir("epfw-config");
  const auto path = write_config(dir, R"({
    "version": 1,
    "seed": 5,
    "jobs": 3,
    "data": {"aligned_path": "elsewhere/table.csv", "max_gap_hours": 2,
             "dst": {"european": [2019, 2022]}}
  })");
  const RunConfig config = load_config(path);
  CHECK(config.jobs == 3);
  CHECK(config.aligned_path == config.base_dir / "elsewhere" / "table.csv");
  CHECK_FALSE(config.aligned_path_defaulted);
  CHECK(config.max_gap_hours == 2);
  CHECK(config.dst.spring_forward.size() == 4);
  CHECK(config.dst.is_fall_back(Date::parse("2021-10-31")));
  // No models section: the full published zoo with the config seed.
  CHECK(config.models.size() == 8);
  CHECK(config.models[0].seed == 5);
  // No features section: the published 26-column set.
  CHECK(config.feature_spec.column_names().size() == 26);
}

TEST_CASE("load_config rejects malformed files precisely") {
  test::TempDir dir("epfw-config");

  CHECK_THROWS_WITH_AS(load_config(dir.file("absent.json")),
                       doctest::Contains("cannot open"), ConfigError);

  const auto throws_with = [&](const std::string& text,
                               const std::string& needle) {
    const auto path = write_config(dir, text, "case.json");
    CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains(needle.c_str()),
                         ConfigError);
  };

  throws_with("{not json", "config file");
  throws_with(R"({"seed": 1, "turbo": true})", "unknown key 'turbo'");
  throws_with(R"({"seed": 1, "version": 2})", "unsupported config version");
  throws_with(R"({"version": 1})", "missing 'seed'");
  throws_with(R"({"seed": 1, "jobs": 0})", "jobs must be at least 1");
  throws_with(R"({"seed": 1, "models": []})", "at least one model");
  throws_with(R"({"seed": 1, "models": [{"kind": "vibes"}]})",
              "unknown model kind");
  throws_with(
      R"({"seed": 1, "models": [{"kind": "knn"}, {"kind": "knn"}]})",
      "duplicate model name");
  throws_with(
      R"({"seed": 1, "models": [{"kind": "knn", "hidden": [4]}]})",
      "only applies to mlp");
  throws_with(
      R"({"seed": 1, "models": [{"kind": "knn", "k": "many"}]})",
      "must be numeric");
  throws_with(
      R"({"seed": 1, "features": {"lags": [{"column": "x", "hourz": 2}]}})",
      "unknown key 'hourz'");
  throws_with(R"({"seed": 1, "backtest": {"quarters": ["2021Q7"]}})",
              "quarter label");
  throws_with(
      R"({"seed": 1, "backtest": {"quarters": ["2021Q1"], "models": ["nope"]}})",
      "no configured model");
  throws_with(
      R"({"seed": 1, "tune": {"model": "linear_regression", "grid": []},
          "models": [{"kind": "knn"}]})",
      "no configured model");
  throws_with(R"({"seed": 1, "data": {"max_gap_hours": -1}})",
              "nonnegative");
  throws_with(R"({"seed": 1, "synthetic": {"start": "2020-01-01"}})",
              "missing required key 'end'");
}

TEST_CASE("synth command writes a deterministic aligned table") {
  test::TempDir dir("epfw-cli-synth");
  const auto path = write_config(dir, kSmallConfig);

  RunConfig config = load_config(path);
  CHECK(cmd_synth(config, {}) == 0);
  const auto aligned = dir.path() / "out" / "aligned.csv";
  REQUIRE(std::filesystem::exists(aligned));

  const auto dataset = ingest::AlignedDataset::read_csv(aligned);
  CHECK(dataset.start_date() == Date::parse("2020-01-01"));
  CHECK(dataset.end_date() == Date::parse("2021-03-31"));
  CHECK(dataset.num_rows() == dataset.num_days() * 24);
  CHECK(dataset.columns().size() == 18);

  // Same seed, same bytes.
  const std::string first = test::read_text(aligned);
  CHECK(cmd_synth(load_config(path), {}) == 0);
  CHECK(test::read_text(aligned) == first);

  // A seed override changes the data; an out override moves it.
  CommonFlags flags;
  flags.seed = 99;
  flags.out = (dir.path() / "alt").string();
  CHECK(cmd_synth(load_config(path), flags) == 0);
  const auto moved = dir.path() / "alt" / "aligned.csv";
  REQUIRE(std::filesystem::exists(moved));
  CHECK(test::read_text(moved) != first);
}

TEST_CASE("ingest command joins raw sources per the config") {
  test::TempDir dir("epfw-cli-ingest");

  // Hourly price with a 2-hour interior gap, quarter-hourly wind penetration,
  // and a weekday-only daily gas price.
  std::string price = "ts,eur\n";
  for (int d = 0; d < 10; ++d) {
    for (int h = 0; h < 24; ++h) {
      if (d == 4 && (h == 10 || h == 11)) {
        continue;  // interpolatable gap
      }
      char row[48];
      std::snprintf(row, sizeof row, "2021-03-%02d %02d:00,%.2f\n", 8 + d, h,
                    30.0 + h + (d == 4 && h == 12 ? -45.0 : 0.0));
      price += row;
    }
  }
  test::write_text(dir.file("price.csv"), price);

  std::string snsp = "ts,ratio\n";
  for (int d = 0; d < 10; ++d) {
    for (int q = 0; q < 96; ++q) {
      char row[48];
      std::snprintf(row, sizeof row, "2021-03-%02d %02d:%02d,%.3f\n", 8 + d,
                    q / 4, (q % 4) * 15, 0.3 + 0.001 * q);
      snsp += row;
    }
  }
  test::write_text(dir.file("snsp.csv"), snsp);

  std::string gas = "day,price\n";
  for (int d = 0; d < 10; ++d) {
    const Date date = Date::parse("2021-03-08").plus_days(d);
    if (date.weekday_iso() >= 6) {
      continue;  // no weekend trading
    }
    gas += date.to_string() + "," + std::to_string(40 + d) + "\n";
  }
  test::write_text(dir.file("gas.csv"), gas);

  const auto path = write_config(dir, R"({
    "version": 1,
    "seed": 2,
    "output_dir": "out",
    "data": {
      "max_gap_hours": 4,
      "range": {"start": "2021-03-09", "end": "2021-03-16"},
      "sources": [
        {"name": "dam_price", "path": "price.csv", "resolution": "hourly",
         "timestamp_column": "ts", "timestamp_format": "%Y-%m-%d %H:%M",
         "value_column": "eur", "unit": "EUR/MWh"},
        {"name": "snsp", "path": "snsp.csv", "resolution": "quarter_hourly",
         "timestamp_column": "ts", "timestamp_format": "%Y-%m-%d %H:%M",
         "value_column": "ratio"},
        {"name": "eu_gas_price", "path": "gas.csv", "resolution": "daily",
         "timestamp_column": "day", "timestamp_format": "%Y-%m-%d",
         "value_column": "price"}
      ]
    }
  })");

  CHECK(cmd_ingest(load_config(path), {}) == 0);
  const auto dataset =
      ingest::AlignedDataset::read_csv(dir.path() / "out" / "aligned.csv");
  CHECK(dataset.columns() ==
        std::vector<std::string>{"dam_price", "snsp", "eu_gas_price"});
  CHECK(dataset.start_date() == Date::parse("2021-03-09"));
  CHECK(dataset.num_rows() == 8 * 24);

  // The price gap was interpolated linearly between hours 9 and 12.
  const Date gap_day = Date::parse("2021-03-12");
  CHECK(dataset.at(gap_day, 9, "dam_price") == doctest::Approx(39.0));
  CHECK(dataset.at(gap_day, 12, "dam_price") == doctest::Approx(-3.0));
  CHECK(dataset.at(gap_day, 10, "dam_price") == doctest::Approx(25.0));
  CHECK(dataset.at(gap_day, 11, "dam_price") == doctest::Approx(11.0));

  // Quarter-hourly wind penetration arrives as hourly means.
  CHECK(dataset.at(gap_day, 0, "snsp") ==
        doctest::Approx(0.3 + 0.001 * (0 + 1 + 2 + 3) / 4.0));

  // Saturday and Sunday carry Friday's gas close.
  const double friday = dataset.at(Date::parse("2021-03-12"), 0,
                                   "eu_gas_price");
  CHECK(dataset.at(Date::parse("2021-03-13"), 12, "eu_gas_price") == friday);
  CHECK(dataset.at(Date::parse("2021-03-14"), 23, "eu_gas_price") == friday);

  // A missing source file is a configuration error naming the path.
  const auto broken = write_config(dir, R"({
    "version": 1, "seed": 2,
    "data": {"sources": [
      {"name": "dam_price", "path": "gone.csv",
       "timestamp_column": "ts", "timestamp_format": "%Y-%m-%d %H:%M",
       "value_column": "eur"}]}
  })", "broken.json");
  CHECK_THROWS_WITH_AS(cmd_ingest(load_config(broken), {}),
                       doctest::Contains("gone.csv"), ConfigError);
}

TEST_CASE("analysis, selection and tuning commands write their tables") {
  test::TempDir dir("epfw-cli-stages");
  const auto path = write_config(dir, kSmallConfig);
  REQUIRE(cmd_synth(load_config(path), {}) == 0);

  SUBCASE("analyze") {
    CHECK(cmd_analyze(load_config(path), {}) == 0);
    const std::string table =
        test::read_text(dir.path() / "out" / "correlations.csv");
    CHECK(table.rfind("feature,", 0) == 0);
    CHECK(table.find("eu_gas_price") != std::string::npos);
    CHECK(table.find("total_wind_generation") != std::string::npos);
    CHECK(table.find("2020") != std::string::npos);
  }

  SUBCASE("analyze requires the aligned dataset") {
    RunConfig config = load_config(path);
    config.aligned_path = dir.file("missing.csv");
    CHECK_THROWS_WITH_AS(cmd_analyze(config, {}),
                         doctest::Contains("run the ingest or synth"),
                         DataError);
  }

  SUBCASE("select-features") {
    CHECK(cmd_select_features(load_config(path), {}) == 0);
    const std::string selected =
        test::read_text(dir.path() / "out" / "selected_features.csv");
    CHECK(selected.rfind("feature\n", 0) == 0);
    CHECK(std::count(selected.begin(), selected.end(), '\n') >= 2);

    const std::string trail =
        test::read_text(dir.path() / "out" / "elimination_trail.csv");
    CHECK(trail.rfind("step,n_features,removed,validation_mae\n", 0) == 0);
    // Six features walked down to one: six scored steps.
    CHECK(std::count(trail.begin(), trail.end(), '\n') == 7);

    // Rerun is byte-identical.
    const std::string again_cmd = selected;
    CHECK(cmd_select_features(load_config(path), {}) == 0);
    CHECK(test::read_text(dir.path() / "out" / "selected_features.csv") ==
          again_cmd);
  }

  SUBCASE("tune") {
    CHECK(cmd_tune(load_config(path), {}) == 0);
    const std::string table =
        test::read_text(dir.path() / "out" / "tune_results.csv");
    CHECK(table.rfind("trees,validation_mae\n", 0) == 0);
    CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  }

  SUBCASE("tune requires a tune section") {
    RunConfig config = load_config(path);
    config.tune.reset();
    CHECK_THROWS_AS(cmd_tune(config, {}), ConfigError);
  }
}

TEST_CASE("backtest command runs the sweep and reports") {
  test::TempDir dir("epfw-cli-backtest");
  const auto path = write_config(dir, kSmallConfig);

  const auto run_into = [&](const std::string& out) {
    CommonFlags flags;
    flags.out = (dir.path() / out).string();
    REQUIRE(cmd_synth(load_config(path), flags) == 0);
    return cmd_backtest(load_config(path), flags);
  };

  CHECK(run_into("a") == 0);
  const auto out_a = dir.path() / "a";
  const auto files = sorted_files(out_a);
  for (const char* required :
       {"aligned.csv", "best_per_quarter.csv", "records.csv", "records.jsonl",
        "runtimes.csv", "top5_2021Q1.csv", "bottom5_2021Q1.csv",
        "metric_series_mae.csv", "metric_series_rmae.csv",
        "plot_series_mae.csv", "plot_series_rmae.csv", "trace_2021Q1.csv"}) {
    CAPTURE(required);
    CHECK(std::find(files.begin(), files.end(), required) != files.end());
  }

  // 1 quarter x 3 windows x 3 models.
  const std::string records = test::read_text(out_a / "records.csv");
  CHECK(std::count(records.begin(), records.end(), '\n') == 10);

  // The sweep is reproducible byte for byte, wall times aside.
  CHECK(run_into("b") == 0);
  for (const auto& name : sorted_files(dir.path() / "b")) {
    if (name == "runtimes.csv") {
      continue;
    }
    CAPTURE(name);
    CHECK(test::read_text(dir.path() / "b" / name) ==
          test::read_text(out_a / name));
  }

  // Threaded execution changes nothing but the wall times either.
  CommonFlags threaded;
  threaded.out = (dir.path() / "a").string();
  threaded.jobs = 3;
  REQUIRE(cmd_backtest(load_config(path), threaded) == 0);
  CHECK(test::read_text(out_a / "records.csv") == records);
}

TEST_CASE("backtest reports partial failure through the exit code") {
  test::TempDir dir("epfw-cli-fail");
  std::string text = kSmallConfig;
  const std::string hook = "{\"kind\": \"dense0\"}";
  // k exceeds every training window in the plan, so the model is valid at
  // load time and fails only against the data.
  text.replace(text.find(hook), hook.size(),
               "{\"kind\": \"dense0\"}, "
               "{\"kind\": \"knn\", \"name\": \"starved\", \"k\": 100000}");
  const auto path = write_config(dir, text);

  REQUIRE(cmd_synth(load_config(path), {}) == 0);
  CHECK(cmd_backtest(load_config(path), {}) == 4);

  const std::string records =
      test::read_text(dir.path() / "out" / "records.csv");
  CHECK(records.find("starved") != std::string::npos);
  CHECK(records.find("failed") != std::string::npos);
}

#ifdef EPFW_CLI_PATH
TEST_CASE("the binary maps outcomes to documented exit codes") {
  const std::string bin = EPFW_CLI_PATH;
  const auto run = [&](const std::string& args) {
    const std::string cmd = bin + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
  };

  CHECK(run("--help") == 0);
  CHECK(run("") == 1);            // a subcommand is required
  CHECK(run("warp") == 1);        // unknown subcommand
  CHECK(run("synth --config /nonexistent/nope.json") == 2);

  test::TempDir dir("epfw-cli-bin");
  write_config(dir, kSmallConfig);
  CHECK(run("synth --config " + dir.file("epfw.json").string()) == 0);
  CHECK(std::filesystem::exists(dir.path() / "out" / "aligned.csv"));
  // The aligned table is missing for analyze if pointed elsewhere: data error.
  CHECK(run("analyze --config " + dir.file("epfw.json").string() +
            " --out " + (dir.path() / "empty").string()) == 3);
}
#endif
