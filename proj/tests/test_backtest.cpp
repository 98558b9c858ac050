#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "epfw/backtest/plan.hpp"
#include "epfw/backtest/report.hpp"
#include "epfw/backtest/runner.hpp"
#include "epfw/errors.hpp"
#include "epfw/features/spec.hpp"
#include "epfw/ingest/synthetic.hpp"
#include "epfw/models/spec.hpp"
#include "helpers.hpp"

using namespace epfw;
using namespace epfw::backtest;
using doctest::Approx;

namespace {

ingest::AlignedDataset year_2020_dataset() {
  ingest::SyntheticRecipe recipe;
  recipe.range = {Date::parse("2020-01-01"), Date::parse("2020-12-31")};
  return ingest::generate_synthetic(recipe, 404);
}

features::FeatureSpec small_feature_spec() {
  return features::FeatureSpec(
      "dam_price",
      {"total_demand", "eu_gas_price", "total_wind_generation"},
      {{"dam_price", 24}, {"dam_price", 168}},
      {features::CalendarField::month});
}

std::vector<models::ModelSpec> fast_specs() {
  return {models::make_model_spec("linear_regression", "linear_regression", 3),
          models::make_model_spec("dense0", "dense0", 3)};
}

BacktestPlan two_entry_plan() {
  BacktestPlan plan;
  plan.entries.push_back(
      {"2020Q3", WindowKind::six_months, quarter_range("2020Q3"),
       {Date::parse("2020-01-01"), Date::parse("2020-06-30")}, 6});
  plan.entries.push_back(
      {"2020Q4", WindowKind::six_months, quarter_range("2020Q4"),
       {Date::parse("2020-04-01"), Date::parse("2020-09-30")}, 6});
  return plan;
}

const PlanEntry& find_entry(const BacktestPlan& plan,
                            const std::string& quarter, WindowKind window) {
  for (const auto& entry : plan.entries) {
    if (entry.quarter == quarter && entry.window == window) {
      return entry;
    }
  }
  throw std::logic_error("entry not found");
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

TEST_CASE("make_plan reproduces the published window table") {
  const std::vector<std::string> quarters = {
      "2020Q1", "2020Q2", "2020Q3", "2020Q4", "2021Q1", "2021Q2",
      "2021Q3", "2021Q4", "2022Q1", "2022Q2", "2022Q3"};
  const BacktestPlan plan = make_plan(quarters, Date::parse("2018-10-01"));
  REQUIRE(plan.entries.size() == 33);

  // Quarter-major, window-minor layout.
  CHECK(plan.entries[0].quarter == "2020Q1");
  CHECK(plan.entries[0].window == WindowKind::six_months);
  CHECK(plan.entries[1].window == WindowKind::one_year);
  CHECK(plan.entries[2].window == WindowKind::two_years_capped);
  CHECK(plan.entries[3].quarter == "2020Q2");

  for (const auto& entry : plan.entries) {
    const DateRange quarter = quarter_range(entry.quarter);
    CHECK(entry.test.start == quarter.start);
    CHECK(entry.test.end == quarter.end);
    CHECK(entry.train.end.plus_days(1) == entry.test.start);
  }

  const auto& q1_six = find_entry(plan, "2020Q1", WindowKind::six_months);
  CHECK(q1_six.train.start == Date::parse("2019-07-01"));
  CHECK(q1_six.train.end == Date::parse("2019-12-31"));
  CHECK(q1_six.train_months == 6);

  const auto& q1_year = find_entry(plan, "2020Q1", WindowKind::one_year);
  CHECK(q1_year.train.start == Date::parse("2019-01-01"));
  CHECK(q1_year.train_months == 12);

  // The two-year window is shortened while two years do not exist: the month
  // boundary leaving a week of history after 2018-10-01 is 2018-11-01.
  const auto& q1_two =
      find_entry(plan, "2020Q1", WindowKind::two_years_capped);
  CHECK(q1_two.train.start == Date::parse("2018-11-01"));
  CHECK(q1_two.train_months == 14);
  CHECK(find_entry(plan, "2020Q2", WindowKind::two_years_capped)
            .train_months == 17);
  CHECK(find_entry(plan, "2020Q3", WindowKind::two_years_capped)
            .train_months == 20);

  // From 2020Q4 on, two full years exist (the nominal start equals the data
  // start exactly) and the window is never shortened again.
  const auto& q4_two =
      find_entry(plan, "2020Q4", WindowKind::two_years_capped);
  CHECK(q4_two.train.start == Date::parse("2018-10-01"));
  CHECK(q4_two.train_months == 24);
  for (const char* q : {"2021Q1", "2021Q2", "2021Q3", "2021Q4", "2022Q1",
                        "2022Q2", "2022Q3"}) {
    CHECK(find_entry(plan, q, WindowKind::two_years_capped).train_months ==
          24);
  }
  CHECK(find_entry(plan, "2021Q1", WindowKind::two_years_capped)
            .train.start == Date::parse("2019-01-01"));
}

TEST_CASE("make_plan cap positioning and failure modes") {
  // A mid-month data start pushes the cap to the next month boundary.
  const BacktestPlan late = make_plan({"2020Q1"}, Date::parse("2018-10-05"));
  CHECK(find_entry(late, "2020Q1", WindowKind::two_years_capped)
            .train.start == Date::parse("2018-11-01"));

  // A start whose week of history ends exactly on a month boundary uses it.
  const BacktestPlan early = make_plan({"2020Q1"}, Date::parse("2018-09-24"));
  const auto& capped =
      find_entry(early, "2020Q1", WindowKind::two_years_capped);
  CHECK(capped.train.start == Date::parse("2018-10-01"));
  CHECK(capped.train_months == 15);

  // The 6-month and 1-year windows are never shortened.
  CHECK_THROWS_WITH_AS(make_plan({"2019Q1"}, Date::parse("2018-10-01")),
                       doctest::Contains("cannot supply"), ConfigError);
  CHECK_THROWS_WITH_AS(make_plan({"2019Q1"}, Date::parse("2018-10-01")),
                       doctest::Contains("6-month"), ConfigError);

  CHECK_THROWS_WITH_AS(make_plan({"2020Q5"}, Date::parse("2018-10-01")),
                       doctest::Contains("quarter label"), ConfigError);
  CHECK_THROWS_AS(make_plan({}, Date::parse("2018-10-01")), ConfigError);

  CHECK(std::string(window_name(WindowKind::six_months)) == "six_months");
  CHECK(parse_window("two_years_capped") == WindowKind::two_years_capped);
  CHECK_THROWS_AS(parse_window("fortnight"), ConfigError);
}

TEST_CASE("run_backtest evaluates every entry-model combination") {
  const auto dataset = year_2020_dataset();
  const auto spec = small_feature_spec();
  const auto specs = fast_specs();
  const BacktestPlan plan = two_entry_plan();

  const BacktestResult result = run_backtest(plan, specs, dataset, spec);
  REQUIRE(result.runs.size() == 4);  // entry-major, model-minor

  CHECK(result.runs[0].record.quarter == "2020Q3");
  CHECK(result.runs[0].record.model == "linear_regression");
  CHECK(result.runs[1].record.quarter == "2020Q3");
  CHECK(result.runs[1].record.model == "dense0");
  CHECK(result.runs[2].record.quarter == "2020Q4");

  for (const auto& run : result.runs) {
    CAPTURE(run.record.quarter);
    CAPTURE(run.record.model);
    CHECK_FALSE(run.record.failed);
    CHECK(run.record.error.empty());
    CHECK(std::isfinite(run.record.mae));
    CHECK(run.record.mae > 0.0);
    CHECK(run.record.rmse >= run.record.mae);
    CHECK(run.record.rmae > 0.0);
    CHECK(run.record.train_months == 6);
    CHECK(run.record.seed == 3);
    CHECK(run.record.runtime_seconds > 0.0);
    CHECK_FALSE(run.model_fingerprint.empty());
    CHECK(run.scaler.columns == spec.column_names());

    const DateRange test = quarter_range(run.record.quarter);
    const Index hours = static_cast<Index>(test.num_days()) * 24;
    CHECK(static_cast<Index>(run.keys.size()) == hours);
    CHECK(run.actual.size() == hours);
    CHECK(run.predicted.size() == hours);
    CHECK(run.keys.front() == features::HourKey{test.start, 0});
    CHECK(run.keys.back() == features::HourKey{test.end, 23});

    // Actuals are the dataset's target hours, untouched.
    CHECK(run.actual[0] == dataset.at(test.start, 0, "dam_price"));
    CHECK(run.actual[hours - 1] == dataset.at(test.end, 23, "dam_price"));
  }

  // A second sweep is bit-identical apart from wall times.
  const BacktestResult again = run_backtest(plan, specs, dataset, spec);
  // Threaded execution must not change anything either.
  const BacktestResult threaded =
      run_backtest(plan, specs, dataset, spec, 3);
  for (const BacktestResult* other : {&again, &threaded}) {
    REQUIRE(other->runs.size() == result.runs.size());
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
      CHECK(other->runs[i].record.model == result.runs[i].record.model);
      CHECK(other->runs[i].record.mae == result.runs[i].record.mae);
      CHECK(other->runs[i].record.rmse == result.runs[i].record.rmse);
      CHECK(other->runs[i].record.rmae == result.runs[i].record.rmae);
      CHECK(other->runs[i].model_fingerprint ==
            result.runs[i].model_fingerprint);
      CHECK(other->runs[i].predicted == result.runs[i].predicted);
    }
  }
}

TEST_CASE("run_backtest validates its inputs up front") {
  const auto dataset = year_2020_dataset();
  const auto spec = small_feature_spec();
  const auto specs = fast_specs();

  BacktestPlan plan;
  CHECK_THROWS_AS(run_backtest(plan, specs, dataset, spec), ConfigError);

  plan = two_entry_plan();
  CHECK_THROWS_AS(run_backtest(plan, {}, dataset, spec), ConfigError);
  CHECK_THROWS_AS(run_backtest(plan, specs, dataset, spec, 0), ConfigError);

  BacktestPlan beyond = two_entry_plan();
  beyond.entries[1].test.end = Date::parse("2021-03-31");
  CHECK_THROWS_WITH_AS(run_backtest(beyond, specs, dataset, spec),
                       doctest::Contains("does not fit"), DataError);

  BacktestPlan gapped = two_entry_plan();
  gapped.entries[0].train.end = Date::parse("2020-06-29");
  CHECK_THROWS_WITH_AS(run_backtest(gapped, specs, dataset, spec),
                       doctest::Contains("gap"), DataError);
}

TEST_CASE("per-run failures become failure records") {
  const auto dataset = year_2020_dataset();
  const auto spec = small_feature_spec();

  // Valid configuration that can only fail against the data: k exceeds any
  // six-month training window.
  auto starved = models::make_model_spec("knn", "starved", 3);
  models::set_param(starved, "k", 100000);
  const std::vector<models::ModelSpec> specs = {
      models::make_model_spec("linear_regression", "linear_regression", 3),
      starved};

  BacktestPlan plan;
  plan.entries.push_back(two_entry_plan().entries[1]);

  const BacktestResult result = run_backtest(plan, specs, dataset, spec);
  REQUIRE(result.runs.size() == 2);

  const RunOutcome& good = result.runs[0];
  const RunOutcome& bad = result.runs[1];
  CHECK_FALSE(good.record.failed);
  CHECK(bad.record.failed);
  CHECK(bad.record.model == "starved");
  CHECK(bad.record.error.find("exceeds") != std::string::npos);
  CHECK(std::isnan(bad.record.mae));
  CHECK(std::isnan(bad.record.rmse));
  CHECK(std::isnan(bad.record.rmae));
  CHECK(bad.model_fingerprint.empty());
  CHECK(bad.keys.empty());
  CHECK(bad.predicted.size() == 0);

  const auto records = result.records();
  REQUIRE(records.size() == 2);
  CHECK(records[1].failed);
}

TEST_CASE("test-window targets cannot leak into fitting or scaling") {
  const auto dataset = year_2020_dataset();
  const auto spec = small_feature_spec();
  const auto specs = fast_specs();

  BacktestPlan plan;
  plan.entries.push_back(two_entry_plan().entries[1]);  // train ends Sep 30

  // Perturb the target inside the test quarter only.
  Matrix values = dataset.values();
  const Index price = dataset.column_index("dam_price");
  const Index first_test = dataset.row_index(Date::parse("2020-10-01"), 0);
  for (Index r = first_test; r < values.rows(); ++r) {
    values(r, price) += 40.0;
  }
  const ingest::AlignedDataset perturbed(dataset.start_date(),
                                         dataset.columns(),
                                         std::move(values));

  const BacktestResult base = run_backtest(plan, specs, dataset, spec);
  const BacktestResult moved = run_backtest(plan, specs, perturbed, spec);
  REQUIRE(base.runs.size() == moved.runs.size());
  for (std::size_t i = 0; i < base.runs.size(); ++i) {
    // Fitted parameters and scaler statistics are bit-identical: nothing
    // about the test window reached training.
    CHECK(base.runs[i].model_fingerprint == moved.runs[i].model_fingerprint);
    CHECK(base.runs[i].scaler.mean == moved.runs[i].scaler.mean);
    CHECK(base.runs[i].scaler.std == moved.runs[i].scaler.std);
    CHECK(base.runs[i].scaler.dropped == moved.runs[i].scaler.dropped);
    // The evaluation itself does see the new targets.
    CHECK(base.runs[i].record.mae != moved.runs[i].record.mae);
  }
}

TEST_CASE("rank_results orders quarters and models") {
  const auto record = [](const char* quarter, const char* model, double mae,
                         double rmse) {
    EvaluationRecord r;
    r.quarter = quarter;
    r.model = model;
    r.window = WindowKind::six_months;
    r.mae = mae;
    r.rmse = rmse;
    r.rmae = mae / 10.0;
    return r;
  };

  std::vector<EvaluationRecord> records = {
      record("2021Q2", "slow", 3.0, 4.0),
      record("2021Q2", "sharp", 1.0, 2.0),
      record("2021Q2", "tied", 1.0, 1.5),
      record("2020Q4", "only", 2.0, 2.5),
  };
  EvaluationRecord broken = record("2019Q1", "kaput", 0.0, 0.0);
  broken.failed = true;
  broken.error = "did not converge";
  broken.mae = std::numeric_limits<double>::quiet_NaN();
  records.push_back(broken);

  const ReportBundle bundle = rank_results(records);
  REQUIRE(bundle.quarters.size() == 2);  // the failed-only quarter is omitted
  CHECK(bundle.quarters[0].quarter == "2020Q4");
  CHECK(bundle.quarters[1].quarter == "2021Q2");

  const auto& ranked = bundle.quarters[1].ranked;
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].model == "tied");   // MAE tie broken by lower RMSE
  CHECK(ranked[1].model == "sharp");
  CHECK(ranked[2].model == "slow");

  CHECK(bundle.records.size() == 5);  // failures preserved for the record
}

TEST_CASE("emit_report writes the documented file set deterministically") {
  const auto dataset = year_2020_dataset();
  const auto spec = small_feature_spec();
  const auto specs = fast_specs();
  const BacktestPlan plan = two_entry_plan();

  const auto run_and_emit = [&](const std::filesystem::path& dir) {
    const BacktestResult result = run_backtest(plan, specs, dataset, spec);
    auto records = result.records();
    EvaluationRecord broken;
    broken.quarter = "2020Q4";
    broken.window = WindowKind::one_year;
    broken.train_months = 12;
    broken.model = "kaput";
    broken.failed = true;
    broken.error = "exploded, mid-air";
    broken.mae = std::numeric_limits<double>::quiet_NaN();
    broken.rmse = broken.mae;
    broken.rmae = broken.mae;
    records.push_back(broken);
    emit_report(rank_results(records), dir);
  };

  test::TempDir dir_a("epfw-report-a");
  test::TempDir dir_b("epfw-report-b");
  run_and_emit(dir_a.path());
  run_and_emit(dir_b.path());

  const auto files = sorted_files(dir_a.path());
  const std::vector<std::string> expected = {
      "best_per_quarter.csv", "bottom5_2020Q3.csv", "bottom5_2020Q4.csv",
      "metric_series_mae.csv", "metric_series_rmae.csv", "records.csv",
      "records.jsonl", "runtimes.csv", "top5_2020Q3.csv", "top5_2020Q4.csv"};
  CHECK(files == expected);
  CHECK(sorted_files(dir_b.path()) == expected);

  for (const auto& name : files) {
    if (name == "runtimes.csv") {
      continue;  // wall times are the one non-deterministic output
    }
    CAPTURE(name);
    CHECK(test::read_text(dir_a.file(name)) ==
          test::read_text(dir_b.file(name)));
  }

  const std::string best = test::read_text(dir_a.file("best_per_quarter.csv"));
  CHECK(best.rfind("quarter,model,window,mae,rmse,rmae\n", 0) == 0);
  CHECK(std::count(best.begin(), best.end(), '\n') == 3);  // header + 2 rows

  // The failure shows up in the full record dump with empty metric cells
  // and a sanitized message (no stray comma breaking the CSV).
  const std::string records_csv = test::read_text(dir_a.file("records.csv"));
  CHECK(records_csv.find("kaput") != std::string::npos);
  CHECK(records_csv.find("failed") != std::string::npos);
  CHECK(records_csv.find("exploded; mid-air") != std::string::npos);
  const std::string jsonl = test::read_text(dir_a.file("records.jsonl"));
  CHECK(std::count(jsonl.begin(), jsonl.end(), '\n') == 5);
  CHECK(jsonl.find("\"error\"") != std::string::npos);

  CHECK_THROWS_WITH_AS(emit_report(rank_results({}), dir_a.path()),
                       doctest::Contains("nothing to report"), DataError);
}

TEST_CASE("emit_plot_data writes series and sample-week traces") {
  const auto dataset = year_2020_dataset();
  const auto spec = small_feature_spec();
  const auto specs = fast_specs();
  BacktestPlan plan;
  plan.entries.push_back(two_entry_plan().entries[1]);  // 2020Q4 only

  const BacktestResult result = run_backtest(plan, specs, dataset, spec);

  test::TempDir dir("epfw-plot");
  const TraceRequest trace{
      "2020Q4",
      {"linear_regression", "dense0"},
      {Date::parse("2020-11-02"), Date::parse("2020-11-06")}};
  emit_plot_data(result, {trace}, dir.path());

  CHECK(std::filesystem::exists(dir.file("plot_series_mae.csv")));
  CHECK(std::filesystem::exists(dir.file("plot_series_rmae.csv")));

  const std::string text = test::read_text(dir.file("trace_2020Q4.csv"));
  REQUIRE(text.rfind("date,hour,actual,linear_regression,dense0\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 5 * 24);

  // The actual column round-trips the dataset values exactly.
  std::size_t pos = text.find('\n') + 1;
  const std::size_t second = text.find('\n', pos);
  const std::string first_row = text.substr(pos, second - pos);
  CHECK(first_row.rfind("2020-11-02,0,", 0) == 0);
  const std::size_t v0 = first_row.find(',', 13);
  const std::string actual_text =
      first_row.substr(13, v0 != std::string::npos
                               ? v0 - 13
                               : std::string::npos);
  CHECK(std::stod(actual_text) ==
        dataset.at(Date::parse("2020-11-02"), 0, "dam_price"));

  // Requests that cannot be satisfied are rejected.
  CHECK_THROWS_WITH_AS(
      emit_plot_data(result,
                     {TraceRequest{"2020Q4",
                                   {"mlp_4n"},
                                   {Date::parse("2020-11-02"),
                                    Date::parse("2020-11-06")}}},
                     dir.path()),
      doctest::Contains("no successful run for model 'mlp_4n'"), DataError);
  CHECK_THROWS_AS(
      emit_plot_data(result,
                     {TraceRequest{"2021Q1",
                                   {"dense0"},
                                   {Date::parse("2021-01-04"),
                                    Date::parse("2021-01-08")}}},
                     dir.path()),
      DataError);
  CHECK_THROWS_WITH_AS(
      emit_plot_data(result,
                     {TraceRequest{"2020Q4",
                                   {"dense0"},
                                   {Date::parse("2020-09-28"),
                                    Date::parse("2020-10-02")}}},
                     dir.path()),
      doctest::Contains("falls outside"), ConfigError);
  CHECK_THROWS_AS(
      emit_plot_data(result, {trace, trace}, dir.path()), ConfigError);
  CHECK_THROWS_AS(
      emit_plot_data(
          result,
          {TraceRequest{"2020Q4", {}, trace.week}},
          dir.path()),
      ConfigError);
}
