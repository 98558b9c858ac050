#include "epfw/features/build.hpp"

#include <algorithm>

#include "epfw/errors.hpp"

namespace epfw::features {

Index FeatureMatrix::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw DataError("feature matrix has no column '" + name + "'");
  }
  return static_cast<Index>(it - columns.begin());
}

FeatureMatrix FeatureMatrix::select_columns(
    const std::vector<std::string>& subset) const {
  FeatureMatrix out;
  out.columns = subset;
  out.y = y;
  out.keys = keys;
  out.X.resize(X.rows(), static_cast<Index>(subset.size()));
  for (std::size_t i = 0; i < subset.size(); ++i) {
    out.X.col(static_cast<Index>(i)) = X.col(column_index(subset[i]));
  }
  return out;
}

void FeatureMatrix::validate() const {
  if (X.cols() != static_cast<Index>(columns.size())) {
    throw DataError("feature matrix has " + std::to_string(X.cols()) +
                    " columns but " + std::to_string(columns.size()) +
                    " names");
  }
  if (X.rows() != y.size() ||
      X.rows() != static_cast<Index>(keys.size())) {
    throw DataError("feature matrix rows, target and keys disagree (" +
                    std::to_string(X.rows()) + ", " +
                    std::to_string(y.size()) + ", " +
                    std::to_string(keys.size()) + ")");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw DataError("feature matrix contains non-finite entries");
  }
}

FeatureMatrix build_features(const ingest::AlignedDataset& dataset,
                             const FeatureSpec& spec, DateRange range) {
  const int max_lag = spec.max_lag_hours();
  const long lead_days = (max_lag + 23) / 24;
  const Date needed_start = range.start.plus_days(-lead_days);
  if (needed_start < dataset.start_date()) {
    throw DataError("insufficient history for lag " +
                    std::to_string(max_lag) + "h: need data from " +
                    needed_start.to_string() + ", dataset starts " +
                    dataset.start_date().to_string());
  }
  if (range.end > dataset.end_date()) {
    throw DataError("feature range ends " + range.end.to_string() +
                    " after dataset end " + dataset.end_date().to_string());
  }

  const Index target_col = dataset.column_index(spec.target());
  const Index first_row = dataset.row_index(range.start, 0);
  const Index n = range.num_hours();

  FeatureMatrix out;
  out.columns = spec.column_names();
  out.X.resize(n, static_cast<Index>(out.columns.size()));
  out.y = dataset.values().col(target_col).segment(first_row, n);
  out.keys.reserve(static_cast<std::size_t>(n));
  for (Index r = 0; r < n; ++r) {
    out.keys.push_back(HourKey{dataset.row_date(first_row + r),
                               dataset.row_hour(first_row + r)});
  }

  Index c = 0;
  for (const auto& name : spec.base()) {
    out.X.col(c++) =
        dataset.values().col(dataset.column_index(name)).segment(first_row, n);
  }
  for (const auto& lag : spec.lags()) {
    out.X.col(c++) = dataset.values()
                         .col(dataset.column_index(lag.column))
                         .segment(first_row - lag.hours, n);
  }
  for (const auto field : spec.calendar()) {
    for (Index r = 0; r < n; ++r) {
      const Date d = out.keys[static_cast<std::size_t>(r)].date;
      double v = 0.0;
      switch (field) {
        case CalendarField::year: v = d.year(); break;
        case CalendarField::month: v = d.month(); break;
        case CalendarField::week_of_year: v = d.iso_week(); break;
        case CalendarField::day_of_year: v = d.day_of_year(); break;
      }
      out.X(r, c) = v;
    }
    ++c;
  }
  if (spec.wind_average()) {
    Vector avg = Vector::Zero(n);
    for (const auto& station : spec.wind_average()->stations) {
      avg += dataset.values()
                 .col(dataset.column_index(station))
                 .segment(first_row, n);
    }
    out.X.col(c++) =
        avg / static_cast<double>(spec.wind_average()->stations.size());
  }

  out.validate();
  return out;
}

}  // namespace epfw::features
