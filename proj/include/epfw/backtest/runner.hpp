#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epfw/backtest/plan.hpp"
#include "epfw/features/matrix.hpp"
#include "epfw/features/scaler.hpp"
#include "epfw/features/spec.hpp"
#include "epfw/ingest/dataset.hpp"
#include "epfw/models/spec.hpp"
#include "epfw/types.hpp"

namespace epfw::backtest {

struct EvaluationRecord {
  std::string quarter;
  WindowKind window = WindowKind::six_months;
  int train_months = 0;
  std::string model;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;            // empty unless failed
  double mae = 0.0;             // metrics are NaN on failed records
  double rmse = 0.0;
  double rmae = 0.0;
  double runtime_seconds = 0.0; // fit + predict wall time; diagnostics only
};

// One completed (plan entry, model) run with enough state retained to audit
// it: hourly test predictions, the train-fitted scaler, and a digest of the
// serialized model for change detection.
struct RunOutcome {
  EvaluationRecord record;
  std::vector<features::HourKey> keys;  // test hours; empty on failure
  Vector actual;
  Vector predicted;
  features::ScalerState scaler;
  std::string model_fingerprint;        // hex digest; empty on failure
};

struct BacktestResult {
  std::vector<RunOutcome> runs;  // plan-entry-major, model-minor

  std::vector<EvaluationRecord> records() const;
};

// Executes every (plan entry, model) combination: features built per range,
// scaler fitted on the train window only, rMAE measured against the 24 h
// naive baseline inside the test window. Coverage of every range is verified
// before any run starts; a training window that opens before lag history
// exists loses those first days with a warning (the longest published
// windows start on the first day of data). Per-run errors become failure
// records instead of aborting the sweep. `jobs` > 1 dispatches runs across
// threads; results do not depend on the schedule.
BacktestResult run_backtest(const BacktestPlan& plan,
                            const std::vector<models::ModelSpec>& specs,
                            const ingest::AlignedDataset& dataset,
                            const features::FeatureSpec& feature_spec,
                            int jobs = 1);

}  // namespace epfw::backtest
