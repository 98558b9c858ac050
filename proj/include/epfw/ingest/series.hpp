#pragma once

#include <compare>
#include <filesystem>
#include <string>
#include <vector>

#include "epfw/calendar.hpp"
#include "epfw/types.hpp"

namespace epfw::ingest {

enum class Resolution { hourly, quarter_hourly, daily };

std::string resolution_name(Resolution r);
Resolution parse_resolution(const std::string& name);

// Maps one raw operator file onto a canonical dataset column.
struct SourceSchema {
  std::string name;              // canonical column the values feed
  std::string path;              // input file
  Resolution resolution = Resolution::hourly;
  std::string timestamp_column;
  // strptime-style with the subset %Y %m %d %H %M %S; all other characters
  // match literally. Daily files typically use "%Y-%m-%d".
  std::string timestamp_format;
  std::string value_column;
  std::string unit;              // annotation only, carried through
};

// Local wall-clock label: date plus minute of day. DST repair is positional
// on the day, so no instant/offset representation is kept.
struct LocalTimestamp {
  Date date;
  int minute_of_day = 0;

  int hour() const { return minute_of_day / 60; }
  long hour_serial() const { return date.serial() * 24 + hour(); }
  std::string to_string() const;

  auto operator<=>(const LocalTimestamp&) const = default;
};

struct RawSeries {
  std::string name;
  Resolution resolution = Resolution::hourly;
  std::string unit;
  std::vector<LocalTimestamp> stamps;  // strictly increasing
  std::vector<double> values;          // parallel to stamps

  std::size_t size() const { return stamps.size(); }
};

// Parses one delimited file per its schema. Points come back chronologically
// sorted because the file must already be strictly increasing; violations and
// malformed rows raise DataError naming the line.
RawSeries parse_source(const std::filesystem::path& path,
                       const SourceSchema& schema);

}  // namespace epfw::ingest
