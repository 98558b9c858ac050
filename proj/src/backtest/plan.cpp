#include "epfw/backtest/plan.hpp"

#include <algorithm>

#include "epfw/errors.hpp"

namespace epfw::backtest {

namespace {

constexpr int kWindowMonths[] = {6, 12, 24};
constexpr WindowKind kWindows[] = {WindowKind::six_months, WindowKind::one_year,
                                   WindowKind::two_years_capped};

// First day of a month at or after `day`.
Date next_month_start(Date day) {
  return day.is_first_of_month() ? day : day.first_of_month().plus_months(1);
}

}  // namespace

const char* window_name(WindowKind kind) {
  switch (kind) {
    case WindowKind::six_months: return "six_months";
    case WindowKind::one_year: return "one_year";
    case WindowKind::two_years_capped: return "two_years_capped";
  }
  throw ConfigError("unknown window kind");
}

WindowKind parse_window(const std::string& name) {
  for (WindowKind kind : kWindows) {
    if (name == window_name(kind)) {
      return kind;
    }
  }
  throw ConfigError("unknown training window '" + name +
                    "' (expected six_months, one_year or two_years_capped)");
}

BacktestPlan make_plan(const std::vector<std::string>& quarters,
                       Date data_start) {
  if (quarters.empty()) {
    throw ConfigError("backtest plan needs at least one test quarter");
  }
  // Earliest usable training start: a full week of lag history must remain
  // between data_start and the window, rounded up to a month boundary.
  const Date earliest_start = next_month_start(data_start.plus_days(7));

  BacktestPlan plan;
  plan.entries.reserve(quarters.size() * 3);
  for (const std::string& label : quarters) {
    const DateRange test = quarter_range(label);
    for (int w = 0; w < 3; ++w) {
      PlanEntry entry;
      entry.quarter = label;
      entry.window = kWindows[w];
      entry.test = test;
      Date start = test.start.plus_months(-kWindowMonths[w]);
      if (start < data_start) {
        if (entry.window != WindowKind::two_years_capped) {
          throw ConfigError("data starting " + data_start.to_string() +
                            " cannot supply the " +
                            std::to_string(kWindowMonths[w]) +
                            "-month training window for " + label +
                            " (needs " + start.to_string() + ")");
        }
        start = earliest_start;
        if (start >= test.start) {
          throw ConfigError("data starting " + data_start.to_string() +
                            " leaves no training history before " + label);
        }
      }
      entry.train = {start, test.start.plus_days(-1)};
      entry.train_months = months_between(start, test.start);
      plan.entries.push_back(entry);
    }
  }
  return plan;
}

}  // namespace epfw::backtest
