#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "epfw/backtest/report.hpp"
#include "epfw/calendar.hpp"
#include "epfw/features/spec.hpp"
#include "epfw/ingest/series.hpp"
#include "epfw/ingest/synthetic.hpp"
#include "epfw/ingest/transform.hpp"
#include "epfw/models/grid_search.hpp"
#include "epfw/models/spec.hpp"

namespace epfw::cli {

struct AnalysisConfig {
  std::vector<std::string> features;  // empty: every non-target column
  std::vector<DateRange> periods;     // empty: the calendar years covered
};

struct SelectionConfig {
  std::string trainer = "linear_regression";  // a configured model's name
  double validation_fraction = 0.2;
  std::optional<DateRange> range;  // default: full span after lag lead-in
};

struct TuneConfig {
  std::string model;  // a configured model's name
  models::ParamGrid grid;
  long budget = 1000;
  double validation_fraction = 0.2;
  std::optional<DateRange> range;
};

struct BacktestConfig {
  std::vector<std::string> quarters;
  std::optional<Date> data_start;   // default: aligned data start
  std::vector<std::string> models;  // empty: every configured model
  std::vector<backtest::TraceRequest> traces;
};

// One structured file drives every command; relative paths inside it resolve
// against the file's own directory, and all randomness stems from `seed`.
struct RunConfig {
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path output_dir;
  std::filesystem::path aligned_path;
  bool aligned_path_defaulted = true;  // tracks output_dir when overridden

  int max_gap_hours = 6;
  ingest::DstCalendar dst;
  std::vector<ingest::SourceSchema> sources;
  std::optional<DateRange> data_range;  // clip after alignment

  std::optional<ingest::SyntheticRecipe> synthetic;
  features::FeatureSpec feature_spec = features::default_feature_spec();
  std::vector<models::ModelSpec> models;

  AnalysisConfig analysis;
  std::optional<SelectionConfig> selection;
  std::optional<TuneConfig> tune;
  std::optional<BacktestConfig> backtest;

  // Configured model by report name; throws ConfigError when absent.
  const models::ModelSpec& model_named(const std::string& name) const;
};

// Parses and validates the JSON config; unknown keys and malformed values
// raise ConfigError naming the offender.
RunConfig load_config(const std::filesystem::path& path);

}  // namespace epfw::cli
