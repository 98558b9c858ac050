#include "epfw/backtest/report.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "epfw/csv.hpp"
#include "epfw/errors.hpp"

namespace epfw::backtest {

namespace {

bool record_less(const EvaluationRecord& a, const EvaluationRecord& b) {
  if (a.mae != b.mae) return a.mae < b.mae;
  if (a.rmse != b.rmse) return a.rmse < b.rmse;
  if (a.model != b.model) return a.model < b.model;
  return static_cast<int>(a.window) < static_cast<int>(b.window);
}

// CSV fields are never quoted, so free-text errors lose commas and newlines;
// the exact text lives in records.jsonl.
std::string csv_safe(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

std::vector<std::string> sorted_model_names(
    const std::vector<EvaluationRecord>& records) {
  std::set<std::string> names;
  for (const EvaluationRecord& r : records) {
    if (!r.failed) {
      names.insert(r.model);
    }
  }
  return {names.begin(), names.end()};
}

std::vector<std::string> sorted_quarters(
    const std::vector<EvaluationRecord>& records) {
  std::set<std::string> labels;
  for (const EvaluationRecord& r : records) {
    if (!r.failed) {
      labels.insert(r.quarter);
    }
  }
  return {labels.begin(), labels.end()};  // YYYYQn sorts chronologically
}

// Best (lowest) value of one metric per (quarter row, model column); empty
// cells where a model has no successful run.
void write_metric_series(const std::filesystem::path& path,
                         const std::vector<EvaluationRecord>& records,
                         double EvaluationRecord::* metric) {
  const std::vector<std::string> models = sorted_model_names(records);
  const std::vector<std::string> quarters = sorted_quarters(records);
  std::map<std::pair<std::string, std::string>, double> best;
  for (const EvaluationRecord& r : records) {
    if (r.failed) continue;
    const auto key = std::make_pair(r.quarter, r.model);
    const auto it = best.find(key);
    if (it == best.end() || r.*metric < it->second) {
      best[key] = r.*metric;
    }
  }

  csv::Writer out(path);
  std::vector<std::string> row{"quarter"};
  row.insert(row.end(), models.begin(), models.end());
  out.row(row);
  for (const std::string& quarter : quarters) {
    row.assign({quarter});
    for (const std::string& model : models) {
      const auto it = best.find({quarter, model});
      row.push_back(it == best.end() ? std::string()
                                     : csv::format_fixed(it->second, 2));
    }
    out.row(row);
  }
}

void write_ranked_slice(const std::filesystem::path& path,
                        const std::vector<EvaluationRecord>& ranked,
                        std::size_t first, std::size_t last) {
  csv::Writer out(path);
  out.row({"rank", "model", "window", "train_months", "mae", "rmse", "rmae"});
  for (std::size_t i = first; i < last; ++i) {
    const EvaluationRecord& r = ranked[i];
    out.row({std::to_string(i + 1), r.model, window_name(r.window),
             std::to_string(r.train_months), csv::format_fixed(r.mae, 2),
             csv::format_fixed(r.rmse, 2), csv::format_fixed(r.rmae, 2)});
  }
}

}  // namespace

ReportBundle rank_results(const std::vector<EvaluationRecord>& records) {
  ReportBundle bundle;
  bundle.records = records;

  std::map<std::string, std::vector<EvaluationRecord>> groups;
  std::set<std::string> failed_only;
  for (const EvaluationRecord& r : records) {
    if (r.failed) {
      failed_only.insert(r.quarter);
    } else {
      groups[r.quarter].push_back(r);
    }
  }
  for (const std::string& quarter : failed_only) {
    if (!groups.count(quarter)) {
      log_warning("quarter " + quarter +
                  " has no successful runs; omitted from ranking");
    }
  }
  for (auto& [quarter, group] : groups) {
    std::sort(group.begin(), group.end(), record_less);
    bundle.quarters.push_back({quarter, std::move(group)});
  }
  return bundle;
}

void emit_report(const ReportBundle& bundle,
                 const std::filesystem::path& out_dir) {
  if (bundle.records.empty()) {
    throw DataError("nothing to report: the record list is empty");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw RunError("cannot create output directory '" + out_dir.string() +
                   "': " + ec.message());
  }

  {
    csv::Writer out(out_dir / "best_per_quarter.csv");
    out.row({"quarter", "model", "window", "mae", "rmse", "rmae"});
    for (const RankedQuarter& q : bundle.quarters) {
      const EvaluationRecord& r = q.ranked.front();
      out.row({q.quarter, r.model, window_name(r.window),
               csv::format_fixed(r.mae, 2), csv::format_fixed(r.rmse, 2),
               csv::format_fixed(r.rmae, 2)});
    }
  }

  for (const RankedQuarter& q : bundle.quarters) {
    const std::size_t n = q.ranked.size();
    const std::size_t take = std::min<std::size_t>(5, n);
    write_ranked_slice(out_dir / ("top5_" + q.quarter + ".csv"), q.ranked, 0,
                       take);
    write_ranked_slice(out_dir / ("bottom5_" + q.quarter + ".csv"), q.ranked,
                       n - take, n);
  }

  write_metric_series(out_dir / "metric_series_mae.csv", bundle.records,
                      &EvaluationRecord::mae);
  write_metric_series(out_dir / "metric_series_rmae.csv", bundle.records,
                      &EvaluationRecord::rmae);

  {
    csv::Writer out(out_dir / "records.csv");
    out.row({"quarter", "window", "train_months", "model", "seed", "status",
             "mae", "rmse", "rmae", "error"});
    for (const EvaluationRecord& r : bundle.records) {
      out.row({r.quarter, window_name(r.window),
               std::to_string(r.train_months), r.model,
               std::to_string(r.seed), r.failed ? "failed" : "ok",
               r.failed ? std::string() : csv::format_double(r.mae),
               r.failed ? std::string() : csv::format_double(r.rmse),
               r.failed ? std::string() : csv::format_double(r.rmae),
               csv_safe(r.error)});
    }
  }

  {
    std::ofstream out(out_dir / "records.jsonl", std::ios::binary);
    for (const EvaluationRecord& r : bundle.records) {
      nlohmann::json line{{"quarter", r.quarter},
                          {"window", window_name(r.window)},
                          {"train_months", r.train_months},
                          {"model", r.model},
                          {"seed", r.seed},
                          {"status", r.failed ? "failed" : "ok"}};
      if (r.failed) {
        line["error"] = r.error;
      } else {
        line["mae"] = r.mae;
        line["rmse"] = r.rmse;
        line["rmae"] = r.rmae;
      }
      out << line.dump() << '\n';
    }
    if (!out) {
      throw RunError("failed writing '" +
                     (out_dir / "records.jsonl").string() + "'");
    }
  }

  {
    csv::Writer out(out_dir / "runtimes.csv");
    out.row({"quarter", "window", "model", "runtime_seconds"});
    for (const EvaluationRecord& r : bundle.records) {
      out.row({r.quarter, window_name(r.window), r.model,
               csv::format_double(r.runtime_seconds)});
    }
  }
}

void emit_plot_data(const BacktestResult& result,
                    const std::vector<TraceRequest>& traces,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw RunError("cannot create output directory '" + out_dir.string() +
                   "': " + ec.message());
  }

  const std::vector<EvaluationRecord> records = result.records();
  write_metric_series(out_dir / "plot_series_mae.csv", records,
                      &EvaluationRecord::mae);
  write_metric_series(out_dir / "plot_series_rmae.csv", records,
                      &EvaluationRecord::rmae);

  std::set<std::string> seen;
  for (const TraceRequest& request : traces) {
    if (!seen.insert(request.quarter).second) {
      throw ConfigError("duplicate trace request for quarter " +
                        request.quarter);
    }
    if (request.models.empty()) {
      throw ConfigError("trace request for " + request.quarter +
                        " names no models");
    }

    std::vector<const RunOutcome*> picks;
    for (const std::string& model : request.models) {
      const RunOutcome* best = nullptr;
      for (const RunOutcome& run : result.runs) {
        if (run.record.failed || run.record.quarter != request.quarter ||
            run.record.model != model) {
          continue;
        }
        if (!best || run.record.mae < best->record.mae) {
          best = &run;
        }
      }
      if (!best) {
        throw DataError("no successful run for model '" + model +
                        "' in quarter " + request.quarter);
      }
      picks.push_back(best);
    }

    const std::vector<features::HourKey>& keys = picks.front()->keys;
    const Date first_day = keys.front().date;
    const Date last_day = keys.back().date;
    if (request.week.start < first_day || last_day < request.week.end) {
      throw ConfigError("trace week " + request.week.start.to_string() +
                        ".." + request.week.end.to_string() +
                        " falls outside the " + request.quarter +
                        " test range");
    }
    const long offset = (request.week.start - first_day) * 24;

    csv::Writer out(out_dir / ("trace_" + request.quarter + ".csv"));
    std::vector<std::string> header{"date", "hour", "actual"};
    header.insert(header.end(), request.models.begin(), request.models.end());
    out.row(header);
    for (long h = 0; h < request.week.num_hours(); ++h) {
      const long row = offset + h;
      const features::HourKey& key = keys[static_cast<std::size_t>(row)];
      std::vector<std::string> line{key.date.to_string(),
                                    std::to_string(key.hour),
                                    csv::format_double(
                                        picks.front()->actual[row])};
      for (const RunOutcome* pick : picks) {
        line.push_back(csv::format_double(pick->predicted[row]));
      }
      out.row(line);
    }
  }
}

}  // namespace epfw::backtest
