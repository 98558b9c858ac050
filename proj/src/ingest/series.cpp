#include "epfw/ingest/series.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "epfw/csv.hpp"
#include "epfw/errors.hpp"

namespace epfw::ingest {
namespace {

// Consumes a fixed-width run of digits; returns false on any mismatch.
bool take_digits(std::string_view text, std::size_t& pos, int width,
                 int& out) {
  if (pos + static_cast<std::size_t>(width) > text.size()) {
    return false;
  }
  int value = 0;
  for (int i = 0; i < width; ++i) {
    const char c = text[pos + static_cast<std::size_t>(i)];
    if (c < '0' || c > '9') {
      return false;
    }
    value = value * 10 + (c - '0');
  }
  pos += static_cast<std::size_t>(width);
  out = value;
  return true;
}

bool parse_stamp(std::string_view text, const std::string& format,
                 LocalTimestamp& out) {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < format.size(); ++f) {
    if (format[f] == '%' && f + 1 < format.size()) {
      ++f;
      bool ok = false;
      switch (format[f]) {
        case 'Y': ok = take_digits(text, pos, 4, year); break;
        case 'm': ok = take_digits(text, pos, 2, month); break;
        case 'd': ok = take_digits(text, pos, 2, day); break;
        case 'H': ok = take_digits(text, pos, 2, hour); break;
        case 'M': ok = take_digits(text, pos, 2, minute); break;
        case 'S': ok = take_digits(text, pos, 2, second); break;
        default: return false;  // unsupported directive
      }
      if (!ok) {
        return false;
      }
      continue;
    }
    if (pos >= text.size() || text[pos] != format[f]) {
      return false;
    }
    ++pos;
  }
  if (pos != text.size()) {
    return false;
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 59) {
    return false;
  }
  try {
    out.date = Date(year, static_cast<unsigned>(month),
                    static_cast<unsigned>(day));
  } catch (const DataError&) {
    return false;
  }
  out.minute_of_day = hour * 60 + minute;
  return true;
}

int expected_spacing_minutes(Resolution r) {
  switch (r) {
    case Resolution::hourly: return 60;
    case Resolution::quarter_hourly: return 15;
    case Resolution::daily: return 1440;
  }
  return 60;
}

}  // namespace

std::string resolution_name(Resolution r) {
  switch (r) {
    case Resolution::hourly: return "hourly";
    case Resolution::quarter_hourly: return "quarter_hourly";
    case Resolution::daily: return "daily";
  }
  return "hourly";
}

Resolution parse_resolution(const std::string& name) {
  if (name == "hourly") {
    return Resolution::hourly;
  }
  if (name == "quarter_hourly") {
    return Resolution::quarter_hourly;
  }
  if (name == "daily") {
    return Resolution::daily;
  }
  throw ConfigError("unknown resolution '" + name +
                    "' (expected hourly, quarter_hourly or daily)");
}

std::string LocalTimestamp::to_string() const {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%s %02d:%02d", date.to_string().c_str(),
                hour(), minute_of_day % 60);
  return buf;
}

RawSeries parse_source(const std::filesystem::path& path,
                       const SourceSchema& schema) {
  const csv::Table table = csv::read_file(path);
  const std::size_t stamp_col = [&] {
    try {
      return table.column(schema.timestamp_column);
    } catch (const DataError&) {
      throw DataError(path.string() + ": missing timestamp column '" +
                      schema.timestamp_column + "'");
    }
  }();
  const std::size_t value_col = [&] {
    try {
      return table.column(schema.value_column);
    } catch (const DataError&) {
      throw DataError(path.string() + ": missing value column '" +
                      schema.value_column + "'");
    }
  }();

  RawSeries series;
  series.name = schema.name;
  series.resolution = schema.resolution;
  series.unit = schema.unit;
  series.stamps.reserve(table.rows.size());
  series.values.reserve(table.rows.size());

  const int spacing = expected_spacing_minutes(schema.resolution);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line_no = table.row_lines[r];
    LocalTimestamp stamp;
    if (!parse_stamp(row[stamp_col], schema.timestamp_format, stamp)) {
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": cannot parse timestamp '" + row[stamp_col] +
                      "' with format '" + schema.timestamp_format + "'");
    }
    double value = 0.0;
    try {
      value = csv::parse_double(row[value_col]);
    } catch (const DataError&) {
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": cannot parse value '" + row[value_col] + "'");
    }
    if (!std::isfinite(value)) {
      throw DataError(path.string() + " line " + std::to_string(line_no) +
                      ": non-finite value");
    }
    if (!series.stamps.empty()) {
      const LocalTimestamp& prev = series.stamps.back();
      if (stamp == prev) {
        throw DataError(path.string() + " line " + std::to_string(line_no) +
                        ": duplicate timestamp " + stamp.to_string());
      }
      if (stamp < prev) {
        throw DataError(path.string() + " line " + std::to_string(line_no) +
                        ": timestamps not increasing (" + stamp.to_string() +
                        " after " + prev.to_string() + ")");
      }
      // Sub-resolution spacing means the declared resolution is wrong;
      // larger spacing is a gap and handled downstream.
      const long delta = (stamp.date - prev.date) * 1440 +
                         (stamp.minute_of_day - prev.minute_of_day);
      if (delta < spacing) {
        throw DataError(path.string() + " line " + std::to_string(line_no) +
                        ": spacing of " + std::to_string(delta) +
                        " minutes is finer than the declared " +
                        resolution_name(schema.resolution) + " resolution");
      }
    }
    series.stamps.push_back(stamp);
    series.values.push_back(value);
  }
  if (series.stamps.empty()) {
    throw DataError(path.string() + ": no data rows");
  }
  return series;
}

}  // namespace epfw::ingest
