#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "eapr/error.hpp"

namespace eapr {

using FeatureName = std::string;

/// Outcome of one algorithm on one instance. MISSING means the algorithm
/// was never run there; such cells are ignored by that algorithm's
/// footprint and classifier but the row is kept for everyone else.
enum class Outcome { kGood, kBad, kMissing };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kGood: return "GOOD";
    case Outcome::kBad: return "BAD";
    case Outcome::kMissing: return "MISSING";
  }
  return "MISSING";
}

inline Outcome outcome_from_string(std::string_view s) {
  if (s == "GOOD") return Outcome::kGood;
  if (s == "BAD") return Outcome::kBad;
  if (s == "MISSING") return Outcome::kMissing;
  throw Error(ErrorCode::kInvalidArgument, "unknown outcome label '" + std::string(s) + "'");
}

struct InstanceRecord {
  std::string instance_id;
  std::string dataset_tag;
  std::vector<double> features;   // aligned with InstanceTable::feature_names
  std::vector<Outcome> outcomes;  // aligned with InstanceTable::algorithm_names
  std::string group;              // aggregation key, empty when the input has none

  bool operator==(const InstanceRecord&) const = default;
};

struct InstanceTable {
  std::vector<FeatureName> feature_names;
  std::vector<std::string> algorithm_names;
  std::vector<InstanceRecord> rows;

  std::size_t size() const { return rows.size(); }

  std::optional<std::size_t> feature_index(std::string_view name) const {
    auto it = std::find(feature_names.begin(), feature_names.end(), name);
    if (it == feature_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - feature_names.begin());
  }

  std::optional<std::size_t> algorithm_index(std::string_view name) const {
    auto it = std::find(algorithm_names.begin(), algorithm_names.end(), name);
    if (it == algorithm_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - algorithm_names.begin());
  }

  /// Outcome column of one algorithm, row-aligned.
  std::vector<Outcome> outcomes_of(std::size_t algorithm) const {
    std::vector<Outcome> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.outcomes.at(algorithm));
    return out;
  }

  bool operator==(const InstanceTable&) const = default;
};

/// A selected set of feature names. Kept sorted so equal sets compare equal
/// and the lexicographic tie-break is a plain vector comparison.
class FeatureSubset {
 public:
  FeatureSubset() = default;
  explicit FeatureSubset(std::vector<FeatureName> names) : names_(std::move(names)) {
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  }
  FeatureSubset(std::initializer_list<FeatureName> names)
      : FeatureSubset(std::vector<FeatureName>(names)) {}

  const std::vector<FeatureName>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  bool contains(std::string_view name) const {
    return std::binary_search(names_.begin(), names_.end(), name);
  }

  auto operator<=>(const FeatureSubset&) const = default;

 private:
  std::vector<FeatureName> names_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  auto operator<=>(const Point&) const = default;
};

/// One (z1, z2) pair per retained instance, row-aligned with the table.
using Coordinates2D = std::vector<Point>;

struct Violation {
  std::optional<std::size_t> row;  // absent for table-level rules
  std::string column;
  std::string rule;

  bool operator==(const Violation&) const = default;
};

/// Checks every structural invariant of an instance table. Violations are
/// returned as data; nothing throws.
inline std::vector<Violation> validate_table(const InstanceTable& table) {
  std::vector<Violation> out;

  std::set<std::string> seen_features;
  for (const auto& name : table.feature_names) {
    if (name.empty()) out.push_back({std::nullopt, name, "empty feature name"});
    else if (!seen_features.insert(name).second)
      out.push_back({std::nullopt, name, "duplicate feature name"});
  }
  std::set<std::string> seen_algorithms;
  for (const auto& name : table.algorithm_names) {
    if (name.empty()) out.push_back({std::nullopt, name, "empty algorithm name"});
    else if (!seen_algorithms.insert(name).second)
      out.push_back({std::nullopt, name, "duplicate algorithm name"});
  }
  if (table.rows.size() < 3) out.push_back({std::nullopt, "", "fewer than 3 rows"});

  std::set<std::string> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.instance_id.empty()) out.push_back({r, "instance_id", "empty id"});
    else if (!ids.insert(row.instance_id).second) out.push_back({r, "instance_id", "duplicate id"});

    if (row.features.size() != table.feature_names.size()) {
      out.push_back({r, "", "feature count mismatch"});
    } else {
      for (std::size_t c = 0; c < row.features.size(); ++c)
        if (!std::isfinite(row.features[c]))
          out.push_back({r, table.feature_names[c], "non-finite feature"});
    }
    if (row.outcomes.size() != table.algorithm_names.size())
      out.push_back({r, "", "outcome count mismatch"});
  }
  return out;
}

}  // namespace eapr
