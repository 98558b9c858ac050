#include "epfw/ingest/dataset.hpp"

#include <algorithm>

#include "epfw/csv.hpp"
#include "epfw/errors.hpp"

namespace epfw::ingest {

AlignedDataset::AlignedDataset(Date start_date,
                               std::vector<std::string> columns,
                               Matrix values)
    : start_date_(start_date),
      columns_(std::move(columns)),
      values_(std::move(values)) {
  if (columns_.empty()) {
    throw DataError("aligned dataset needs at least one column");
  }
  if (values_.rows() == 0 || values_.rows() % 24 != 0) {
    throw DataError("aligned dataset needs a positive multiple of 24 rows, "
                    "got " +
                    std::to_string(values_.rows()));
  }
  if (values_.cols() != static_cast<Index>(columns_.size())) {
    throw DataError("aligned dataset has " + std::to_string(values_.cols()) +
                    " value columns but " + std::to_string(columns_.size()) +
                    " names");
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    for (std::size_t j = i + 1; j < columns_.size(); ++j) {
      if (columns_[i] == columns_[j]) {
        throw DataError("duplicate column '" + columns_[i] + "'");
      }
    }
  }
  if (!values_.allFinite()) {
    throw DataError("aligned dataset contains non-finite cells");
  }
}

bool AlignedDataset::has_column(const std::string& name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

Index AlignedDataset::column_index(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) {
    throw DataError("dataset has no column '" + name + "'");
  }
  return static_cast<Index>(it - columns_.begin());
}

Index AlignedDataset::row_index(Date date, int hour) const {
  if (hour < 0 || hour > 23) {
    throw DataError("hour " + std::to_string(hour) + " outside 0-23");
  }
  if (date < start_date() || date > end_date()) {
    throw DataError("date " + date.to_string() + " outside dataset range " +
                    start_date().to_string() + ".." +
                    end_date().to_string());
  }
  return (date - start_date_) * 24 + hour;
}

double AlignedDataset::at(Date date, int hour,
                          const std::string& column) const {
  return values_(row_index(date, hour), column_index(column));
}

AlignedDataset AlignedDataset::slice(DateRange days) const {
  const Index first = row_index(days.start, 0);
  const Index count = days.num_hours();
  if (days.end > end_date()) {
    throw DataError("slice end " + days.end.to_string() +
                    " outside dataset range ending " +
                    end_date().to_string());
  }
  return AlignedDataset(days.start, columns_,
                        values_.middleRows(first, count));
}

void AlignedDataset::write_csv(const std::filesystem::path& path) const {
  csv::Writer writer(path);
  std::vector<std::string> row;
  row.reserve(columns_.size() + 2);
  row.push_back("date");
  row.push_back("hour");
  row.insert(row.end(), columns_.begin(), columns_.end());
  writer.row(row);
  for (Index r = 0; r < values_.rows(); ++r) {
    row.clear();
    row.push_back(row_date(r).to_string());
    row.push_back(std::to_string(row_hour(r)));
    for (Index c = 0; c < values_.cols(); ++c) {
      row.push_back(csv::format_double(values_(r, c)));
    }
    writer.row(row);
  }
}

AlignedDataset AlignedDataset::read_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  if (table.header.size() < 3 || table.header[0] != "date" ||
      table.header[1] != "hour") {
    throw DataError(path.string() +
                    ": expected header date,hour,<columns...>");
  }
  if (table.rows.empty()) {
    throw DataError(path.string() + ": no data rows");
  }
  std::vector<std::string> columns(table.header.begin() + 2,
                                   table.header.end());
  const Index cols = static_cast<Index>(columns.size());
  Matrix values(static_cast<Index>(table.rows.size()), cols);

  const Date start = Date::parse(table.rows.front()[0]);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.row_lines[r];
    const Date expected_date = start.plus_days(static_cast<long>(r) / 24);
    const int expected_hour = static_cast<int>(r % 24);
    if (Date::parse(row[0]) != expected_date ||
        csv::parse_long(row[1]) != expected_hour) {
      throw DataError(path.string() + " line " + std::to_string(line) +
                      ": expected contiguous row " +
                      expected_date.to_string() + " hour " +
                      std::to_string(expected_hour) + ", got " + row[0] +
                      " hour " + row[1]);
    }
    for (Index c = 0; c < cols; ++c) {
      try {
        values(static_cast<Index>(r), c) =
            csv::parse_double(row[static_cast<std::size_t>(c) + 2]);
      } catch (const DataError&) {
        throw DataError(path.string() + " line " + std::to_string(line) +
                        ": cannot parse value '" +
                        row[static_cast<std::size_t>(c) + 2] +
                        "' in column '" + columns[static_cast<std::size_t>(c)] +
                        "'");
      }
    }
  }
  if (table.rows.size() % 24 != 0) {
    throw DataError(path.string() + ": row count " +
                    std::to_string(table.rows.size()) +
                    " is not a whole number of days");
  }
  return AlignedDataset(start, std::move(columns), std::move(values));
}

SummaryStats summary_stats(const AlignedDataset& dataset,
                           const std::string& column, DateRange period) {
  const Index first = dataset.row_index(period.start, 0);
  if (period.end > dataset.end_date()) {
    throw DataError("summary period ends " + period.end.to_string() +
                    " after dataset end " + dataset.end_date().to_string());
  }
  const Index n = period.num_hours();
  if (n < 2) {
    throw DataError("summary period needs at least 2 hours for std");
  }
  const auto v =
      dataset.values().col(dataset.column_index(column)).segment(first, n);
  SummaryStats s;
  s.mean = v.mean();
  s.std = std::sqrt((v.array() - s.mean).square().sum() /
                    static_cast<double>(n - 1));
  s.min = v.minCoeff();
  s.max = v.maxCoeff();
  return s;
}

}  // namespace epfw::ingest
