#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "epfw/calendar.hpp"
#include "epfw/types.hpp"

namespace epfw::ingest {

// Canonical hourly table: 24 rows per covered day, contiguous dates, no
// missing cells. Row r maps to (start_date + r/24, hour r%24), so timestamps
// are implicit and the storage is one dense matrix.
class AlignedDataset {
 public:
  AlignedDataset(Date start_date, std::vector<std::string> columns,
                 Matrix values);

  Date start_date() const { return start_date_; }
  Date end_date() const { return start_date_.plus_days(num_days() - 1); }
  DateRange range() const { return {start_date(), end_date()}; }
  long num_days() const { return values_.rows() / 24; }
  Index num_rows() const { return values_.rows(); }

  const std::vector<std::string>& columns() const { return columns_; }
  bool has_column(const std::string& name) const;
  Index column_index(const std::string& name) const;  // throws if absent

  const Matrix& values() const { return values_; }
  auto column(const std::string& name) const {
    return values_.col(column_index(name));
  }

  Index row_index(Date date, int hour) const;  // throws if outside range
  Date row_date(Index row) const { return start_date_.plus_days(row / 24); }
  int row_hour(Index row) const { return static_cast<int>(row % 24); }
  double at(Date date, int hour, const std::string& column) const;

  // Contiguous day slice [first, last], all columns.
  AlignedDataset slice(DateRange days) const;

  // `date,hour,<column...>` with full-precision values.
  void write_csv(const std::filesystem::path& path) const;
  static AlignedDataset read_csv(const std::filesystem::path& path);

 private:
  Date start_date_;
  std::vector<std::string> columns_;
  Matrix values_;  // (24 * days) x columns
};

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;  // N-1 denominator
  double min = 0.0;
  double max = 0.0;
};

// Sample statistics of one column over all hours of a period.
SummaryStats summary_stats(const AlignedDataset& dataset,
                           const std::string& column, DateRange period);

}  // namespace epfw::ingest
