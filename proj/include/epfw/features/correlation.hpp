#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "epfw/calendar.hpp"
#include "epfw/errors.hpp"
#include "epfw/ingest/dataset.hpp"
#include "epfw/types.hpp"

namespace epfw::features {

// Sample Pearson correlation. Inputs must have equal length >= 2 and neither
// may be constant (the coefficient is undefined there).
template <typename DerivedA, typename DerivedB>
double pearson_corr(const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& y) {
  const auto n = x.size();
  if (n < 2) {
    throw DataError("pearson correlation needs at least 2 points");
  }
  if (n != y.size()) {
    throw DataError("pearson correlation inputs differ in length (" +
                    std::to_string(n) + " vs " + std::to_string(y.size()) +
                    ")");
  }
  const double mx = x.mean();
  const double my = y.mean();
  const auto dx = x.array() - mx;
  const auto dy = y.array() - my;
  const double sxx = (dx * dx).sum();
  const double syy = (dy * dy).sum();
  if (sxx == 0.0 || syy == 0.0) {
    throw DataError("pearson correlation undefined for constant input");
  }
  return (dx * dy).sum() / std::sqrt(sxx * syy);
}

// Table of PCC cells per (feature, period). Undefined cells (constant input
// over a period) are stored as NaN and flagged with a warning.
struct CorrelationTable {
  std::vector<std::string> features;        // row labels
  std::vector<std::string> period_labels;   // column labels
  Matrix cells;                             // features x periods, NaN undefined
};

std::string period_label(DateRange period);

CorrelationTable correlation_report(const ingest::AlignedDataset& dataset,
                                    const std::vector<std::string>& features,
                                    const std::string& target,
                                    const std::vector<DateRange>& periods);

// Feature rows by period columns; undefined cells emitted empty.
void write_correlation_csv(const CorrelationTable& table,
                           const std::filesystem::path& path);

}  // namespace epfw::features
