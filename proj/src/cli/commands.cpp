#include "epfw/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>

#include "epfw/backtest/plan.hpp"
#include "epfw/backtest/report.hpp"
#include "epfw/backtest/runner.hpp"
#include "epfw/csv.hpp"
#include "epfw/errors.hpp"
#include "epfw/features/build.hpp"
#include "epfw/features/correlation.hpp"
#include "epfw/features/scaler.hpp"
#include "epfw/features/selection.hpp"
#include "epfw/ingest/align.hpp"
#include "epfw/models/grid_search.hpp"
#include "epfw/models/model.hpp"

namespace epfw::cli {

namespace {

void apply_flags(RunConfig& config, const CommonFlags& flags) {
  if (flags.out) {
    config.output_dir = *flags.out;
    if (config.aligned_path_defaulted) {
      config.aligned_path = config.output_dir / "aligned.csv";
    }
  }
  if (flags.seed) {
    config.seed = *flags.seed;
    for (models::ModelSpec& spec : config.models) {
      spec.seed = *flags.seed;
    }
  }
  if (flags.jobs) {
    if (*flags.jobs < 1) {
      throw ConfigError("jobs must be at least 1");
    }
    config.jobs = *flags.jobs;
  }
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw RunError("cannot create directory '" + dir.string() +
                   "': " + ec.message());
  }
}

ingest::AlignedDataset load_aligned(const RunConfig& config) {
  if (!std::filesystem::exists(config.aligned_path)) {
    throw DataError("aligned dataset '" + config.aligned_path.string() +
                    "' not found; run the ingest or synth command first");
  }
  return ingest::AlignedDataset::read_csv(config.aligned_path);
}

void print_summary(const ingest::AlignedDataset& dataset) {
  std::cout << "aligned dataset: " << dataset.num_rows() << " rows ("
            << dataset.num_days() << " days x 24 h), "
            << dataset.columns().size() << " columns, "
            << dataset.start_date().to_string() << ".."
            << dataset.end_date().to_string() << "\n";
}

void print_stats(const ingest::AlignedDataset& dataset) {
  for (int year = dataset.start_date().year();
       year <= dataset.end_date().year(); ++year) {
    const Date jan1(year, 1, 1);
    const Date dec31(year, 12, 31);
    const DateRange period{std::max(jan1, dataset.start_date()),
                           std::min(dec31, dataset.end_date())};
    std::cout << "\nstatistics " << year << " ("
              << period.start.to_string() << ".." << period.end.to_string()
              << "):\n"
              << "  " << std::left << std::setw(28) << "column" << std::right
              << std::setw(12) << "mean" << std::setw(12) << "std"
              << std::setw(12) << "min" << std::setw(12) << "max" << "\n";
    for (const std::string& column : dataset.columns()) {
      const ingest::SummaryStats stats =
          ingest::summary_stats(dataset, column, period);
      std::cout << "  " << std::left << std::setw(28) << column << std::right
                << std::setw(12) << csv::format_fixed(stats.mean, 2)
                << std::setw(12) << csv::format_fixed(stats.std, 2)
                << std::setw(12) << csv::format_fixed(stats.min, 2)
                << std::setw(12) << csv::format_fixed(stats.max, 2) << "\n";
    }
  }
}

void write_aligned(const ingest::AlignedDataset& dataset,
                   const RunConfig& config, const CommonFlags& flags) {
  if (config.aligned_path.has_parent_path()) {
    ensure_dir(config.aligned_path.parent_path());
  }
  dataset.write_csv(config.aligned_path);
  print_summary(dataset);
  std::cout << "wrote " << config.aligned_path.string() << "\n";
  if (flags.stats) {
    print_stats(dataset);
  }
}

// Widest range whose lag columns stay inside the dataset.
DateRange usable_range(const ingest::AlignedDataset& dataset,
                       const features::FeatureSpec& spec) {
  const int lead_days = (spec.max_lag_hours() + 23) / 24;
  const Date start = dataset.start_date().plus_days(lead_days);
  if (dataset.end_date() < start) {
    throw DataError("dataset is shorter than the feature lag lead-in of " +
                    std::to_string(lead_days) + " days");
  }
  return {start, dataset.end_date()};
}

struct ScaledSplit {
  features::FeatureMatrix train;
  features::FeatureMatrix validation;
  features::ScalerState scaler;
};

ScaledSplit build_scaled_split(const ingest::AlignedDataset& dataset,
                               const RunConfig& config,
                               const std::optional<DateRange>& range,
                               double validation_fraction) {
  const DateRange span =
      range ? *range : usable_range(dataset, config.feature_spec);
  const features::FeatureMatrix matrix =
      build_features(dataset, config.feature_spec, span);
  auto [train, validation] =
      features::chronological_split(matrix, validation_fraction);
  ScaledSplit split;
  split.scaler = features::fit_scaler(train);
  split.train = features::apply_scaler(split.scaler, train);
  split.validation = features::apply_scaler(split.scaler, validation);
  return split;
}

}  // namespace

int cmd_synth(RunConfig config, const CommonFlags& flags) {
  apply_flags(config, flags);
  if (!config.synthetic) {
    throw ConfigError("config has no synthetic section");
  }
  ingest::AlignedDataset dataset =
      generate_synthetic(*config.synthetic, config.seed);
  if (config.data_range) {
    dataset = dataset.slice(*config.data_range);
  }
  write_aligned(dataset, config, flags);
  return 0;
}

int cmd_ingest(RunConfig config, const CommonFlags& flags) {
  apply_flags(config, flags);
  if (config.sources.empty()) {
    throw ConfigError("config lists no data sources to ingest");
  }
  for (const ingest::SourceSchema& schema : config.sources) {
    if (!std::filesystem::exists(schema.path)) {
      throw ConfigError("source file '" + schema.path + "' for column '" +
                        schema.name + "' does not exist");
    }
  }

  std::vector<ingest::RawSeries> hourly;
  hourly.reserve(config.sources.size());
  for (const ingest::SourceSchema& schema : config.sources) {
    ingest::RawSeries raw = ingest::parse_source(schema.path, schema);
    switch (schema.resolution) {
      case ingest::Resolution::hourly:
        break;
      case ingest::Resolution::quarter_hourly:
        raw = ingest::resample_to_hourly(raw);
        break;
      case ingest::Resolution::daily:
        raw = ingest::broadcast_daily(raw, config.data_range);
        break;
    }
    hourly.push_back(std::move(raw));
  }

  ingest::AlignedDataset dataset =
      ingest::align_join(hourly, config.max_gap_hours, config.dst);
  if (config.data_range) {
    dataset = dataset.slice(*config.data_range);
  }
  write_aligned(dataset, config, flags);
  return 0;
}

int cmd_analyze(RunConfig config, const CommonFlags& flags) {
  apply_flags(config, flags);
  const ingest::AlignedDataset dataset = load_aligned(config);
  const std::string& target = config.feature_spec.target();

  std::vector<std::string> features = config.analysis.features;
  if (features.empty()) {
    for (const std::string& column : dataset.columns()) {
      if (column != target) {
        features.push_back(column);
      }
    }
  }
  std::vector<DateRange> periods = config.analysis.periods;
  if (periods.empty()) {
    for (int year = dataset.start_date().year();
         year <= dataset.end_date().year(); ++year) {
      periods.push_back({std::max(Date(year, 1, 1), dataset.start_date()),
                         std::min(Date(year, 12, 31), dataset.end_date())});
    }
  }

  const features::CorrelationTable table =
      features::correlation_report(dataset, features, target, periods);
  ensure_dir(config.output_dir);
  const std::filesystem::path path = config.output_dir / "correlations.csv";
  features::write_correlation_csv(table, path);

  std::cout << std::left << std::setw(28) << "feature";
  for (const std::string& label : table.period_labels) {
    std::cout << std::right << std::setw(12) << label;
  }
  std::cout << "\n";
  for (std::size_t f = 0; f < table.features.size(); ++f) {
    std::cout << std::left << std::setw(28) << table.features[f];
    for (Index p = 0; p < table.cells.cols(); ++p) {
      const double cell = table.cells(static_cast<Index>(f), p);
      std::cout << std::right << std::setw(12)
                << (std::isnan(cell) ? std::string("undefined")
                                     : csv::format_fixed(cell, 2));
    }
    std::cout << "\n";
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_select_features(RunConfig config, const CommonFlags& flags) {
  apply_flags(config, flags);
  const ingest::AlignedDataset dataset = load_aligned(config);
  const SelectionConfig selection =
      config.selection.value_or(SelectionConfig{});

  const ScaledSplit split = build_scaled_split(
      dataset, config, selection.range, selection.validation_fraction);
  const models::ModelSpec spec = config.model_named(selection.trainer);
  const features::Trainer trainer =
      [&spec](const features::FeatureMatrix& matrix) {
        return models::fit(spec, matrix);
      };
  const features::EliminationResult result =
      backward_eliminate(trainer, split.train, split.validation);

  ensure_dir(config.output_dir);
  {
    csv::Writer out(config.output_dir / "selected_features.csv");
    out.row({"feature"});
    for (const std::string& name : result.selected) {
      out.row({name});
    }
  }
  {
    csv::Writer out(config.output_dir / "elimination_trail.csv");
    out.row({"step", "n_features", "removed", "validation_mae"});
    for (const features::EliminationStep& step : result.trail) {
      out.row({std::to_string(step.step),
               std::to_string(step.columns.size()), step.removed,
               csv::format_double(step.validation_mae)});
    }
  }

  std::cout << "selected " << result.selected.size() << " of "
            << split.train.columns.size() << " features (validation MAE "
            << csv::format_fixed(result.best_mae, 4) << "):\n";
  for (const std::string& name : result.selected) {
    std::cout << "  " << name << "\n";
  }
  std::cout << "wrote "
            << (config.output_dir / "selected_features.csv").string()
            << " and "
            << (config.output_dir / "elimination_trail.csv").string() << "\n";
  return 0;
}

int cmd_tune(RunConfig config, const CommonFlags& flags) {
  apply_flags(config, flags);
  if (!config.tune) {
    throw ConfigError("config has no tune section");
  }
  const ingest::AlignedDataset dataset = load_aligned(config);
  const TuneConfig& tune = *config.tune;

  const ScaledSplit split = build_scaled_split(dataset, config, tune.range,
                                               tune.validation_fraction);
  const models::GridSearchResult result =
      grid_search(config.model_named(tune.model), tune.grid, split.train,
                  split.validation, tune.budget);

  ensure_dir(config.output_dir);
  const std::filesystem::path path = config.output_dir / "tune_results.csv";
  {
    csv::Writer out(path);
    std::vector<std::string> header;
    for (const auto& [param, values] : tune.grid) {
      header.push_back(param);
    }
    header.push_back("validation_mae");
    out.row(header);
    for (const models::GridPoint& point : result.table) {
      std::vector<std::string> row;
      for (const auto& [param, value] : point.assignment) {
        row.push_back(csv::format_double(value));
      }
      row.push_back(csv::format_double(point.validation_mae));
      out.row(row);
    }
  }

  std::cout << "best '" << result.best.name << "' (validation MAE "
            << csv::format_fixed(result.best_mae, 4) << "):\n";
  for (const models::GridPoint& point : result.table) {
    if (point.validation_mae == result.best_mae) {
      for (const auto& [param, value] : point.assignment) {
        std::cout << "  " << param << " = " << csv::format_double(value)
                  << "\n";
      }
      break;
    }
  }
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_backtest(RunConfig config, const CommonFlags& flags) {
  apply_flags(config, flags);
  if (!config.backtest) {
    throw ConfigError("config has no backtest section");
  }
  const ingest::AlignedDataset dataset = load_aligned(config);
  const BacktestConfig& bt = *config.backtest;

  const Date data_start = bt.data_start.value_or(dataset.start_date());
  const backtest::BacktestPlan plan =
      backtest::make_plan(bt.quarters, data_start);

  std::vector<models::ModelSpec> specs;
  if (bt.models.empty()) {
    specs = config.models;
  } else {
    for (const std::string& name : bt.models) {
      specs.push_back(config.model_named(name));
    }
  }

  const backtest::BacktestResult result = backtest::run_backtest(
      plan, specs, dataset, config.feature_spec, config.jobs);
  const std::vector<backtest::EvaluationRecord> records = result.records();
  const backtest::ReportBundle bundle = backtest::rank_results(records);
  backtest::emit_report(bundle, config.output_dir);
  backtest::emit_plot_data(result, bt.traces, config.output_dir);

  if (!bundle.quarters.empty()) {
    std::cout << std::left << std::setw(8) << "quarter" << std::setw(20)
              << "model" << std::setw(18) << "window" << std::right
              << std::setw(10) << "mae" << std::setw(10) << "rmse"
              << std::setw(10) << "rmae" << "\n";
    for (const backtest::RankedQuarter& quarter : bundle.quarters) {
      const backtest::EvaluationRecord& best = quarter.ranked.front();
      std::cout << std::left << std::setw(8) << quarter.quarter
                << std::setw(20) << best.model << std::setw(18)
                << window_name(best.window) << std::right << std::setw(10)
                << csv::format_fixed(best.mae, 2) << std::setw(10)
                << csv::format_fixed(best.rmse, 2) << std::setw(10)
                << csv::format_fixed(best.rmae, 2) << "\n";
    }
  }
  std::cout << records.size() << " runs -> " << config.output_dir.string()
            << "\n";

  long failed = 0;
  for (const backtest::EvaluationRecord& record : records) {
    if (record.failed) {
      if (failed == 0) {
        std::cout << "failed runs:\n";
      }
      ++failed;
      std::cout << "  " << record.quarter << " "
                << window_name(record.window) << " " << record.model << ": "
                << record.error << "\n";
    }
  }
  return failed > 0 ? 4 : 0;
}

}  // namespace epfw::cli
