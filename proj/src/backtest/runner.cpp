#include "epfw/backtest/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <limits>
#include <thread>

#include "epfw/errors.hpp"
#include "epfw/features/build.hpp"
#include "epfw/metrics.hpp"
#include "epfw/models/model.hpp"

namespace epfw::backtest {

namespace {

// FNV-1a 64-bit digest of the serialized model; enough to detect any change
// in fitted parameters between runs.
std::string fingerprint(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void check_coverage(const BacktestPlan& plan,
                    const ingest::AlignedDataset& dataset, int lead_days) {
  const Date earliest = dataset.start_date().plus_days(lead_days);
  for (const PlanEntry& entry : plan.entries) {
    if (entry.train.start < dataset.start_date() ||
        dataset.end_date() < entry.test.end) {
      throw DataError(
          "plan does not fit the aligned dataset: " + entry.quarter + " / " +
          window_name(entry.window) + " needs " +
          entry.train.start.to_string() + ".." + entry.test.end.to_string() +
          " but data covers " + dataset.start_date().to_string() + ".." +
          dataset.end_date().to_string());
    }
    if (entry.train.end.plus_days(1) != entry.test.start) {
      throw DataError("plan entry for " + entry.quarter +
                      " has a gap between train and test ranges");
    }
    // A window may open on the very first day of data (the longest published
    // windows do); its first few days cannot carry full lag features and are
    // dropped from training.
    if (entry.train.start < earliest) {
      log_warning("training window " + entry.quarter + " / " +
                  window_name(entry.window) + " starts " +
                  std::to_string(earliest - entry.train.start) +
                  " day(s) before lag history exists; those days are not "
                  "trained on");
    }
  }
}

RunOutcome execute(const PlanEntry& entry, const models::ModelSpec& spec,
                   const ingest::AlignedDataset& dataset,
                   const features::FeatureSpec& feature_spec, int lead_days) {
  RunOutcome out;
  out.record.quarter = entry.quarter;
  out.record.window = entry.window;
  out.record.train_months = entry.train_months;
  out.record.model = spec.name;
  out.record.seed = spec.seed;
  try {
    DateRange train_range = entry.train;
    const Date earliest = dataset.start_date().plus_days(lead_days);
    if (train_range.start < earliest) {
      train_range.start = earliest;
    }
    const features::FeatureMatrix train =
        build_features(dataset, feature_spec, train_range);
    const features::FeatureMatrix test =
        build_features(dataset, feature_spec, entry.test);
    out.scaler = features::fit_scaler(train);
    const features::FeatureMatrix train_scaled =
        features::apply_scaler(out.scaler, train);
    const features::FeatureMatrix test_scaled =
        features::apply_scaler(out.scaler, test);

    const auto started = std::chrono::steady_clock::now();
    const models::TrainedModel model = models::fit(spec, train_scaled);
    out.predicted = model.predict(test_scaled);
    const auto finished = std::chrono::steady_clock::now();
    out.record.runtime_seconds =
        std::chrono::duration<double>(finished - started).count();

    out.actual = test.y;
    out.keys = test.keys;
    out.model_fingerprint = fingerprint(model.serialize());
    out.record.mae = mae(out.actual, out.predicted);
    out.record.rmse = rmse(out.actual, out.predicted);
    out.record.rmae = rmae(out.actual, out.predicted, 24);
  } catch (const std::exception& e) {
    out.record.failed = true;
    out.record.error = e.what();
    out.record.mae = std::numeric_limits<double>::quiet_NaN();
    out.record.rmse = out.record.mae;
    out.record.rmae = out.record.mae;
    out.keys.clear();
    out.actual.resize(0);
    out.predicted.resize(0);
    out.model_fingerprint.clear();
  }
  return out;
}

}  // namespace

std::vector<EvaluationRecord> BacktestResult::records() const {
  std::vector<EvaluationRecord> all;
  all.reserve(runs.size());
  for (const RunOutcome& run : runs) {
    all.push_back(run.record);
  }
  return all;
}

BacktestResult run_backtest(const BacktestPlan& plan,
                            const std::vector<models::ModelSpec>& specs,
                            const ingest::AlignedDataset& dataset,
                            const features::FeatureSpec& feature_spec,
                            int jobs) {
  if (plan.entries.empty()) {
    throw ConfigError("backtest plan is empty");
  }
  if (specs.empty()) {
    throw ConfigError("backtest needs at least one model");
  }
  if (jobs < 1) {
    throw ConfigError("jobs must be at least 1");
  }
  for (const models::ModelSpec& spec : specs) {
    models::validate(spec);
  }
  const int lead_days = (feature_spec.max_lag_hours() + 23) / 24;
  check_coverage(plan, dataset, lead_days);

  const std::size_t total = plan.entries.size() * specs.size();
  BacktestResult result;
  result.runs.resize(total);

  auto work = [&](std::size_t task) {
    const PlanEntry& entry = plan.entries[task / specs.size()];
    const models::ModelSpec& spec = specs[task % specs.size()];
    result.runs[task] = execute(entry, spec, dataset, feature_spec, lead_days);
  };

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), total);
  if (workers <= 1) {
    for (std::size_t task = 0; task < total; ++task) {
      work(task);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t task = next.fetch_add(1); task < total;
             task = next.fetch_add(1)) {
          work(task);
        }
      });
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  return result;
}

}  // namespace epfw::backtest
