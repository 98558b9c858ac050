#include "epfw/features/spec.hpp"

#include <algorithm>

#include "epfw/errors.hpp"

namespace epfw::features {

std::string calendar_field_name(CalendarField field) {
  switch (field) {
    case CalendarField::year: return "year";
    case CalendarField::month: return "month";
    case CalendarField::week_of_year: return "week_of_year";
    case CalendarField::day_of_year: return "day_of_year";
  }
  return "year";
}

CalendarField parse_calendar_field(const std::string& name) {
  if (name == "year") {
    return CalendarField::year;
  }
  if (name == "month") {
    return CalendarField::month;
  }
  if (name == "week_of_year") {
    return CalendarField::week_of_year;
  }
  if (name == "day_of_year") {
    return CalendarField::day_of_year;
  }
  throw ConfigError("unknown calendar field '" + name + "'");
}

FeatureSpec::FeatureSpec(std::string target, std::vector<std::string> base,
                         std::vector<LagSpec> lags,
                         std::vector<CalendarField> calendar,
                         std::optional<WindAverageSpec> wind_average)
    : target_(std::move(target)),
      base_(std::move(base)),
      lags_(std::move(lags)),
      calendar_(std::move(calendar)),
      wind_average_(std::move(wind_average)) {
  if (target_.empty()) {
    throw ConfigError("feature spec needs a target column");
  }
  // Leakage rules: the target may enter only through strictly positive lags.
  if (std::find(base_.begin(), base_.end(), target_) != base_.end()) {
    throw ConfigError("target '" + target_ +
                      "' cannot be a base feature (target-hour leakage)");
  }
  for (const auto& lag : lags_) {
    if (lag.hours <= 0) {
      throw ConfigError("lag on '" + lag.column + "' must be strictly " +
                        "positive, got " + std::to_string(lag.hours));
    }
  }
  if (wind_average_) {
    if (wind_average_->stations.empty()) {
      throw ConfigError("wind average '" + wind_average_->name +
                        "' has no stations");
    }
    const auto& st = wind_average_->stations;
    if (std::find(st.begin(), st.end(), target_) != st.end()) {
      throw ConfigError("target '" + target_ +
                        "' cannot feed the wind average");
    }
  }
  const auto names = column_names();
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) {
        throw ConfigError("duplicate feature column '" + names[i] + "'");
      }
    }
  }
}

int FeatureSpec::max_lag_hours() const {
  int max = 0;
  for (const auto& lag : lags_) {
    max = std::max(max, lag.hours);
  }
  return max;
}

std::vector<std::string> FeatureSpec::column_names() const {
  std::vector<std::string> names = base_;
  for (const auto& lag : lags_) {
    names.push_back(lag.column + "_lag" + std::to_string(lag.hours));
  }
  for (const auto field : calendar_) {
    names.push_back(calendar_field_name(field));
  }
  if (wind_average_) {
    names.push_back(wind_average_->name);
  }
  return names;
}

FeatureSpec default_feature_spec() {
  return FeatureSpec(
      "dam_price",
      {
          "eu_gas_price",
          "ie_demand",
          "ie_wind_availability",
          "snsp",
          "ni_demand",
          "total_demand",
          "ni_wind_availability",
          "ni_generation",
          "ie_wind_generation",
          "total_wind_generation",
          "total_generation",
          "ni_wind_generation",
          "ie_generation",
          "ni_solar_generation",
          "wind_speed_dublin_airport",
          "wind_speed_mace_head",
          "wind_speed_malin_head",
      },
      {
          {"dam_price", 24},
          {"dam_price", 48},
          {"dam_price", 168},
          {"total_demand", 24},
          {"total_demand", 168},
      },
      {
          CalendarField::week_of_year,
          CalendarField::day_of_year,
          CalendarField::month,
          CalendarField::year,
      });
}

}  // namespace epfw::features
