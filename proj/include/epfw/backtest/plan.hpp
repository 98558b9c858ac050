#pragma once

#include <string>
#include <vector>

#include "epfw/calendar.hpp"

namespace epfw::backtest {

enum class WindowKind { six_months, one_year, two_years_capped };

const char* window_name(WindowKind kind);
WindowKind parse_window(const std::string& name);

struct PlanEntry {
  std::string quarter;  // label of the test quarter, e.g. "2021Q3"
  WindowKind window = WindowKind::six_months;
  DateRange test;
  DateRange train;      // ends the day before test.start
  int train_months = 0;
};

struct BacktestPlan {
  std::vector<PlanEntry> entries;  // quarter-major, window-minor
};

// Three training windows per test quarter: 6 months, 1 year, and 2 years of
// calendar history ending the day before the quarter. When two full years do
// not exist, the third window instead starts at the first month boundary that
// leaves a week of lag history after data_start. The first two windows are
// never shortened; a data_start too late for them is a configuration error.
BacktestPlan make_plan(const std::vector<std::string>& quarters,
                       Date data_start);

}  // namespace epfw::backtest
