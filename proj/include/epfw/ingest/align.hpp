#pragma once

#include <vector>

#include "epfw/ingest/dataset.hpp"
#include "epfw/ingest/transform.hpp"

namespace epfw::ingest {

// Inner-joins hourly series into one aligned table over their common span of
// whole days. Interior gaps of at most max_gap_hours per source are linearly
// interpolated first; anything longer is an error naming the column and hour
// range. Column order follows the input order.
AlignedDataset align_join(const std::vector<RawSeries>& sources,
                          int max_gap_hours = 6,
                          const DstCalendar& dst = {});

// Physical-range checks by column role: names containing "demand",
// "generation" or equal to "snsp" must be nonnegative. Violations raise
// DataError naming the cell.
void validate_physical_ranges(const AlignedDataset& dataset);

}  // namespace epfw::ingest
