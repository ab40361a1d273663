#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmph/simulate.hpp"

namespace mmph {

// Observations on the standardized scale: y = y_raw - shift with
// shift = min(y_raw) - 1, so the smallest standardized value is one.
struct Dataset {
  std::vector<JointSample> records;
  double shift = 0.0;
  std::string label;

  double raw(double y) const { return y + shift; }
};

Dataset make_dataset(std::span<const double> y_raw, std::span<const int> counts,
                     std::string label = {});

// Reads a delimited text file with a header row; columns are selected by
// name. Rows with a missing field, a non-numeric value, or a count below one
// are rejected with their line number.
Dataset ingest(const std::string& path, const std::string& y_column,
               const std::string& n_column, char delimiter = ',');

// n -> 3 - n; defined only for datasets whose counts are all one or two.
Dataset flip_counts(const Dataset& data);

struct GroupSummary {
  int n = 0;
  std::size_t observations = 0;
  double mean = 0.0;    // raw scale
  double median = 0.0;
  double sd = 0.0;
};

std::vector<GroupSummary> summarize_by_count(const Dataset& data);

}  // namespace mmph
