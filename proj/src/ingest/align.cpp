#include "epfw/ingest/align.hpp"

#include <algorithm>

#include "epfw/errors.hpp"

namespace epfw::ingest {

AlignedDataset align_join(const std::vector<RawSeries>& sources,
                          int max_gap_hours, const DstCalendar& dst) {
  if (sources.empty()) {
    throw DataError("align_join needs at least one source");
  }

  std::vector<RawSeries> repaired;
  repaired.reserve(sources.size());
  for (const auto& s : sources) {
    repaired.push_back(
        normalize_dst(interpolate_gaps(s, max_gap_hours, dst), dst));
  }

  // After normalization every series covers whole days, so the common range
  // is a date intersection.
  Date start = repaired.front().stamps.front().date;
  Date end = repaired.front().stamps.back().date;
  for (const auto& s : repaired) {
    start = std::max(start, s.stamps.front().date);
    end = std::min(end, s.stamps.back().date);
  }
  if (end < start) {
    throw DataError("sources have an empty common date range");
  }

  const long days = end - start + 1;
  std::vector<std::string> columns;
  columns.reserve(repaired.size());
  Matrix values(days * 24, static_cast<Index>(repaired.size()));
  for (std::size_t c = 0; c < repaired.size(); ++c) {
    const auto& s = repaired[c];
    if (std::find(columns.begin(), columns.end(), s.name) != columns.end()) {
      throw DataError("duplicate source column '" + s.name + "'");
    }
    columns.push_back(s.name);
    const long offset = (start - s.stamps.front().date) * 24;
    for (long r = 0; r < days * 24; ++r) {
      values(r, static_cast<Index>(c)) =
          s.values[static_cast<std::size_t>(r + offset)];
    }
  }

  AlignedDataset dataset(start, std::move(columns), std::move(values));
  validate_physical_ranges(dataset);
  return dataset;
}

void validate_physical_ranges(const AlignedDataset& dataset) {
  for (const auto& name : dataset.columns()) {
    const bool nonneg = name == "snsp" ||
                        name.find("demand") != std::string::npos ||
                        name.find("generation") != std::string::npos;
    if (!nonneg) {
      continue;
    }
    const auto col = dataset.column(name);
    for (Index r = 0; r < col.size(); ++r) {
      if (col[r] < 0.0) {
        throw DataError("column '" + name + "' negative (" +
                        std::to_string(col[r]) + ") at " +
                        dataset.row_date(r).to_string() + " hour " +
                        std::to_string(dataset.row_hour(r)));
      }
    }
  }
}

}  // namespace epfw::ingest
