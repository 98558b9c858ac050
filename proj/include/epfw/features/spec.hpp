#pragma once

#include <optional>
#include <string>
#include <vector>

namespace epfw::features {

enum class CalendarField { year, month, week_of_year, day_of_year };

std::string calendar_field_name(CalendarField field);
CalendarField parse_calendar_field(const std::string& name);

struct LagSpec {
  std::string column;
  int hours = 0;  // strictly positive; the feature reads `hours` back
};

// Derived column averaging several wind-speed stations.
struct WindAverageSpec {
  std::string name;
  std::vector<std::string> stations;
};

// Declares the design matrix: plain dataset columns, lagged columns,
// calendar fields derived from the row date, and an optional station
// average. Construction enforces the no-leakage rules; column existence is
// checked against the dataset when the matrix is built.
class FeatureSpec {
 public:
  FeatureSpec(std::string target, std::vector<std::string> base,
              std::vector<LagSpec> lags,
              std::vector<CalendarField> calendar,
              std::optional<WindAverageSpec> wind_average = std::nullopt);

  const std::string& target() const { return target_; }
  const std::vector<std::string>& base() const { return base_; }
  const std::vector<LagSpec>& lags() const { return lags_; }
  const std::vector<CalendarField>& calendar() const { return calendar_; }
  const std::optional<WindAverageSpec>& wind_average() const {
    return wind_average_;
  }

  int max_lag_hours() const;
  // Feature column order: base, lags ("<col>_lag<h>"), calendar, average.
  std::vector<std::string> column_names() const;

 private:
  std::string target_;
  std::vector<std::string> base_;
  std::vector<LagSpec> lags_;
  std::vector<CalendarField> calendar_;
  std::optional<WindAverageSpec> wind_average_;
};

// The published 26-column feature set: 17 operational columns (including
// the 3 station wind speeds), price lags 24/48/168, demand lags 24/168,
// and 4 calendar fields.
FeatureSpec default_feature_spec();

}  // namespace epfw::features
