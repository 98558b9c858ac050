#pragma once

#include "epfw/features/matrix.hpp"
#include "epfw/features/spec.hpp"
#include "epfw/ingest/dataset.hpp"

namespace epfw::features {

// One row per hour of `range`. Lag columns read dataset history, so the
// dataset must start at least ceil(max_lag/24) days before range.start; the
// error names the required start date.
FeatureMatrix build_features(const ingest::AlignedDataset& dataset,
                             const FeatureSpec& spec, DateRange range);

}  // namespace epfw::features
