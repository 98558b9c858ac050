#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "epfw/cli/config.hpp"

namespace epfw::cli {

// Command-line overrides; unset fields defer to the config file. A seed
// override re-seeds every configured model.
struct CommonFlags {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool stats = false;
};

// Each command returns a process exit code: 0 success, 4 when a backtest
// finished with failed runs. Configuration, data and run errors escape as
// the matching exception for the entry point to map (2/3/4).
int cmd_synth(RunConfig config, const CommonFlags& flags);
int cmd_ingest(RunConfig config, const CommonFlags& flags);
int cmd_analyze(RunConfig config, const CommonFlags& flags);
int cmd_select_features(RunConfig config, const CommonFlags& flags);
int cmd_tune(RunConfig config, const CommonFlags& flags);
int cmd_backtest(RunConfig config, const CommonFlags& flags);

}  // namespace epfw::cli
