#include "mmph/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace mmph {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delimiter)) fields.push_back(trim(field));
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, int line, const std::string& column) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw ValidationError("line " + std::to_string(line) + ": column '" + column +
                          "' has non-numeric value '" + t + "'");
  }
  return value;
}

}  // namespace

Dataset make_dataset(std::span<const double> y_raw, std::span<const int> counts,
                     std::string label) {
  if (y_raw.size() != counts.size()) {
    throw ValidationError("make_dataset: value and count columns differ in length");
  }
  if (y_raw.empty()) throw ValidationError("make_dataset: empty dataset");
  const double min_y = *std::min_element(y_raw.begin(), y_raw.end());
  Dataset data;
  data.shift = min_y - 1.0;
  data.label = std::move(label);
  data.records.reserve(y_raw.size());
  for (std::size_t i = 0; i < y_raw.size(); ++i) {
    if (counts[i] < 1) {
      throw ValidationError("make_dataset: record " + std::to_string(i + 1) +
                            " has count below one");
    }
    data.records.push_back({y_raw[i] - data.shift, counts[i]});
  }
  return data;
}

Dataset ingest(const std::string& path, const std::string& y_column,
               const std::string& n_column, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": missing header row");
  const auto header = split(line, delimiter);
  auto column_index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ValidationError(path + ": no column named '" + name + "' in the header");
  };
  const std::size_t yi = column_index(y_column);
  const std::size_t ni = column_index(n_column);

  std::vector<double> ys;
  std::vector<int> ns;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, delimiter);
    if (fields.size() <= std::max(yi, ni) || fields[yi].empty() || fields[ni].empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": missing field");
    }
    const double y = parse_double(fields[yi], line_no, y_column);
    const double n_value = parse_double(fields[ni], line_no, n_column);
    const int n = static_cast<int>(std::llround(n_value));
    if (std::abs(n_value - n) > 1e-9) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": count is not an integer");
    }
    if (n < 1) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": count must be at least one");
    }
    ys.push_back(y);
    ns.push_back(n);
  }
  if (ys.empty()) throw ValidationError(path + ": no data rows");
  return make_dataset(ys, ns, path);
}

Dataset flip_counts(const Dataset& data) {
  Dataset out = data;
  for (auto& record : out.records) {
    if (record.n != 1 && record.n != 2) {
      throw ValidationError("flip_counts: count " + std::to_string(record.n) +
                            " outside {1, 2}");
    }
    record.n = 3 - record.n;
  }
  return out;
}

std::vector<GroupSummary> summarize_by_count(const Dataset& data) {
  std::map<int, std::vector<double>> groups;
  for (const auto& record : data.records) {
    groups[record.n].push_back(data.raw(record.y));
  }
  std::vector<GroupSummary> out;
  for (auto& [n, values] : groups) {
    GroupSummary g;
    g.n = n;
    g.observations = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    g.mean = sum / values.size();
    double ss = 0.0;
    for (double v : values) ss += (v - g.mean) * (v - g.mean);
    g.sd = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    g.median = values.size() % 2 == 1 ? values[mid]
                                      : 0.5 * (values[mid - 1] + values[mid]);
    out.push_back(g);
  }
  return out;
}

}  // namespace mmph
