#include "epfw/features/correlation.hpp"

#include <limits>

#include "epfw/csv.hpp"

namespace epfw::features {

std::string period_label(DateRange period) {
  const Date jan1(period.start.year(), 1, 1);
  const Date dec31(period.start.year(), 12, 31);
  if (period.start == jan1 && period.end == dec31) {
    return std::to_string(period.start.year());
  }
  return period.start.to_string() + ".." + period.end.to_string();
}

CorrelationTable correlation_report(const ingest::AlignedDataset& dataset,
                                    const std::vector<std::string>& features,
                                    const std::string& target,
                                    const std::vector<DateRange>& periods) {
  if (features.empty() || periods.empty()) {
    throw ConfigError("correlation report needs features and periods");
  }
  CorrelationTable table;
  table.features = features;
  table.cells.resize(static_cast<Index>(features.size()),
                     static_cast<Index>(periods.size()));

  for (const auto& period : periods) {
    table.period_labels.push_back(period_label(period));
  }
  for (std::size_t p = 0; p < periods.size(); ++p) {
    const auto slice = dataset.slice(periods[p]);
    const Vector target_values = slice.column(target);
    for (std::size_t f = 0; f < features.size(); ++f) {
      const Vector feature_values = slice.column(features[f]);
      double cell = std::numeric_limits<double>::quiet_NaN();
      try {
        cell = pearson_corr(feature_values, target_values);
      } catch (const DataError& e) {
        log_warning("correlation of '" + features[f] + "' over " +
                    table.period_labels[p] + " undefined: " + e.what());
      }
      table.cells(static_cast<Index>(f), static_cast<Index>(p)) = cell;
    }
  }
  return table;
}

void write_correlation_csv(const CorrelationTable& table,
                           const std::filesystem::path& path) {
  csv::Writer writer(path);
  std::vector<std::string> row;
  row.push_back("feature");
  row.insert(row.end(), table.period_labels.begin(),
             table.period_labels.end());
  writer.row(row);
  for (std::size_t f = 0; f < table.features.size(); ++f) {
    row.clear();
    row.push_back(table.features[f]);
    for (Index p = 0; p < table.cells.cols(); ++p) {
      const double v = table.cells(static_cast<Index>(f), p);
      row.push_back(std::isnan(v) ? "" : csv::format_fixed(v, 2));
    }
    writer.row(row);
  }
}

}  // namespace epfw::features
