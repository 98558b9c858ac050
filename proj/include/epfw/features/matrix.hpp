#pragma once

#include <string>
#include <vector>

#include "epfw/calendar.hpp"
#include "epfw/types.hpp"

namespace epfw::features {

struct HourKey {
  Date date;
  int hour = 0;

  auto operator<=>(const HourKey&) const = default;
};

// Design matrix with named columns, target vector and row timestamps, rows
// in chronological order.
struct FeatureMatrix {
  std::vector<std::string> columns;
  Matrix X;
  Vector y;
  std::vector<HourKey> keys;

  Index rows() const { return X.rows(); }
  Index cols() const { return X.cols(); }

  Index column_index(const std::string& name) const;  // throws if absent

  // Same rows, the named columns only, in the given order.
  FeatureMatrix select_columns(const std::vector<std::string>& subset) const;

  // Shape/finiteness invariants; throws DataError on violation.
  void validate() const;
};

}  // namespace epfw::features
