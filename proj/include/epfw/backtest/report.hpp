#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "epfw/backtest/runner.hpp"

namespace epfw::backtest {

struct RankedQuarter {
  std::string quarter;
  std::vector<EvaluationRecord> ranked;  // ascending (mae, rmse, model, window)
};

struct ReportBundle {
  std::vector<RankedQuarter> quarters;    // chronological
  std::vector<EvaluationRecord> records;  // everything, failures included
};

// Groups successful records by quarter and sorts each group ascending by MAE
// (ties: lower RMSE, then model name, then window). A quarter whose records
// all failed is omitted with a warning. Failure records stay in `records`.
ReportBundle rank_results(const std::vector<EvaluationRecord>& records);

// Writes the report tables into `out_dir` (created if missing):
//   best_per_quarter.csv            rank-1 row per quarter
//   top5_<quarter>.csv              five best (or fewer) per quarter
//   bottom5_<quarter>.csv           five worst per quarter
//   metric_series_mae.csv           per-model best MAE by quarter
//   metric_series_rmae.csv          per-model best rMAE by quarter
//   records.csv / records.jsonl     every record, full precision
//   runtimes.csv                    wall times; the one non-deterministic file
// Display tables round to 2 decimals; reruns from identical records produce
// byte-identical files apart from runtimes.csv.
void emit_report(const ReportBundle& bundle,
                 const std::filesystem::path& out_dir);

// Sample-week actual-vs-predicted trace: for each named model, the hours of
// `week` are taken from that model's best-MAE run in the quarter.
struct TraceRequest {
  std::string quarter;
  std::vector<std::string> models;
  DateRange week;
};

// Writes plot_series_mae.csv / plot_series_rmae.csv (per-model best metric by
// quarter) and one trace_<quarter>.csv per request with columns
// date,hour,actual,<model...>. Unknown models or quarters are errors.
void emit_plot_data(const BacktestResult& result,
                    const std::vector<TraceRequest>& traces,
                    const std::filesystem::path& out_dir);

}  // namespace epfw::backtest
