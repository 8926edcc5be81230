#pragma once

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eapr/core.hpp"
#include "eapr/csv.hpp"
#include "eapr/linalg.hpp"

namespace eapr {

/// Which CSV columns carry the id, the benchmark tag, the aggregation key
/// and the per-algorithm outcomes. Every other column is a feature.
struct ColumnSchema {
  std::string id_column = "instance_id";
  std::optional<std::string> dataset_column = "dataset";
  std::optional<std::string> group_column;
  std::string outcome_prefix = "aprt:";
  // When non-empty, these exact columns are outcomes and the prefix is unused.
  std::vector<std::string> outcome_columns;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string cell_ref(std::size_t line, const std::string& column) {
  return "row " + std::to_string(line) + ", column '" + column + "'";
}

}  // namespace detail

/// Reads an instance table from CSV text. Data rows are numbered from 1 in
/// error messages (the header is row 0).
inline InstanceTable parse_instance_table(std::string_view source, const ColumnSchema& schema = {}) {
  const auto rows = csv::parse(source);
  if (rows.empty()) throw Error(ErrorCode::kEmptyTable, "input has no header row");
  const auto& header = rows.front();

  std::optional<std::size_t> id_col, dataset_col, group_col;
  std::vector<std::size_t> feature_cols, outcome_cols;
  InstanceTable table;

  auto is_outcome = [&](const std::string& name) {
    if (!schema.outcome_columns.empty())
      return std::find(schema.outcome_columns.begin(), schema.outcome_columns.end(), name) !=
             schema.outcome_columns.end();
    return !schema.outcome_prefix.empty() && name.starts_with(schema.outcome_prefix);
  };

  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name(detail::trim(header[c]));
    if (name == schema.id_column) {
      id_col = c;
    } else if (schema.dataset_column && name == *schema.dataset_column) {
      dataset_col = c;
    } else if (schema.group_column && name == *schema.group_column) {
      group_col = c;
    } else if (is_outcome(name)) {
      outcome_cols.push_back(c);
      table.algorithm_names.push_back(schema.outcome_columns.empty()
                                          ? name.substr(schema.outcome_prefix.size())
                                          : name);
    } else {
      feature_cols.push_back(c);
      table.feature_names.push_back(name);
    }
  }
  if (!id_col) throw Error(ErrorCode::kMalformedCsv, "missing id column '" + schema.id_column + "'");
  if (schema.group_column && !group_col)
    throw Error(ErrorCode::kMissingGroupKey, "missing group column '" + *schema.group_column + "'");
  if (rows.size() == 1) throw Error(ErrorCode::kEmptyTable, "input has a header but no data rows");

  for (std::size_t line = 1; line < rows.size(); ++line) {
    const auto& cells = rows[line];
    if (cells.size() != header.size())
      throw Error(ErrorCode::kMalformedCsv, "row " + std::to_string(line) + " has " +
                                                std::to_string(cells.size()) + " cells, header has " +
                                                std::to_string(header.size()));
    InstanceRecord rec;
    rec.instance_id = std::string(detail::trim(cells[*id_col]));
    if (dataset_col) rec.dataset_tag = std::string(detail::trim(cells[*dataset_col]));
    if (group_col) rec.group = std::string(detail::trim(cells[*group_col]));
    rec.features.reserve(feature_cols.size());
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
      auto v = detail::parse_real(cells[feature_cols[k]]);
      if (!v)
        throw Error(ErrorCode::kUnparseableCell,
                    detail::cell_ref(line, table.feature_names[k]) + ": '" + cells[feature_cols[k]] + "'");
      rec.features.push_back(*v);
    }
    rec.outcomes.reserve(outcome_cols.size());
    for (std::size_t k = 0; k < outcome_cols.size(); ++k) {
      const auto cell = detail::trim(cells[outcome_cols[k]]);
      if (cell == "1") rec.outcomes.push_back(Outcome::kGood);
      else if (cell == "0") rec.outcomes.push_back(Outcome::kBad);
      else if (cell.empty()) rec.outcomes.push_back(Outcome::kMissing);
      else
        throw Error(ErrorCode::kUnparseableCell,
                    detail::cell_ref(line, header[outcome_cols[k]]) + ": '" + std::string(cell) + "'");
    }
    table.rows.push_back(std::move(rec));
  }
  return table;
}

/// Collapses sub-program rows (e.g. one per class) into one row per group by
/// averaging every feature. Groups keep their first-appearance order and take
/// the group key as their instance id.
inline InstanceTable aggregate_rows(const InstanceTable& table) {
  struct Acc {
    std::size_t first_row;
    std::size_t count = 0;
    std::vector<double> sums;
  };
  std::map<std::string, std::size_t> index;
  std::vector<Acc> groups;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    if (row.group.empty())
      throw Error(ErrorCode::kMissingGroupKey, "row " + std::to_string(r + 1) + " has no group key");
    auto [it, inserted] = index.try_emplace(row.group, groups.size());
    if (inserted) groups.push_back({r, 0, std::vector<double>(table.feature_names.size(), 0.0)});
    auto& g = groups[it->second];
    const auto& first = table.rows[g.first_row];
    if (row.outcomes != first.outcomes)
      throw Error(ErrorCode::kInconsistentOutcomes, "group '" + row.group + "' has conflicting outcome labels");
    if (row.dataset_tag != first.dataset_tag)
      throw Error(ErrorCode::kInconsistentOutcomes, "group '" + row.group + "' spans datasets");
    for (std::size_t c = 0; c < g.sums.size(); ++c) g.sums[c] += row.features.at(c);
    ++g.count;
  }

  InstanceTable out;
  out.feature_names = table.feature_names;
  out.algorithm_names = table.algorithm_names;
  out.rows.reserve(groups.size());
  for (const auto& g : groups) {
    const auto& first = table.rows[g.first_row];
    InstanceRecord rec;
    rec.instance_id = first.group;
    rec.dataset_tag = first.dataset_tag;
    rec.group = first.group;
    rec.outcomes = first.outcomes;
    rec.features.reserve(g.sums.size());
    for (double s : g.sums) rec.features.push_back(s / static_cast<double>(g.count));
    out.rows.push_back(std::move(rec));
  }
  return out;
}

/// Column-wise z-score parameters. Standard deviations use divisor N.
struct ScalingParams {
  std::vector<FeatureName> features;  // retained, in table order
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<FeatureName> dropped_features;  // zero-variance columns

  bool operator==(const ScalingParams&) const = default;
};

struct Standardized {
  Matrix values;  // rows x retained features
  ScalingParams scaling;
};

namespace detail {

inline bool is_zero_variance(double std, double mean) {
  return !(std > 1e-12 * std::max(1.0, std::abs(mean)));
}

}  // namespace detail

/// Z-scores the subset's columns of `table`. Columns with zero variance are
/// dropped and listed in the scaling parameters.
inline Standardized standardize(const InstanceTable& table, const FeatureSubset& subset) {
  const std::size_t n = table.rows.size();
  if (n < 2) throw Error(ErrorCode::kTooFewInstances, "standardize needs at least 2 rows");

  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < table.feature_names.size(); ++c)
    if (subset.contains(table.feature_names[c])) cols.push_back(c);
  if (cols.size() != subset.size())
    throw Error(ErrorCode::kFeatureMismatch, "subset names a feature absent from the table");

  Standardized out;
  std::vector<std::size_t> kept;
  for (std::size_t c : cols) {
    double mean = 0.0;
    for (const auto& row : table.rows) mean += row.features[c];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : table.rows) ss += (row.features[c] - mean) * (row.features[c] - mean);
    const double std = std::sqrt(ss / static_cast<double>(n));
    if (detail::is_zero_variance(std, mean)) {
      out.scaling.dropped_features.push_back(table.feature_names[c]);
      continue;
    }
    kept.push_back(c);
    out.scaling.features.push_back(table.feature_names[c]);
    out.scaling.means.push_back(mean);
    out.scaling.stds.push_back(std);
  }
  if (kept.empty()) throw Error(ErrorCode::kAllFeaturesDropped, "every selected feature has zero variance");

  out.values = Matrix(n, kept.size());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < kept.size(); ++k)
      out.values(r, k) = (table.rows[r].features[kept[k]] - out.scaling.means[k]) / out.scaling.stds[k];
  return out;
}

/// Affine rescale to [0, 1]; a constant vector maps to 0.5 everywhere.
inline std::vector<double> minmax_normalize(std::span<const double> values) {
  if (values.empty()) return {};
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, max = *hi;
  std::vector<double> out(values.size(), 0.5);
  if (max > min)
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / (max - min);
  return out;
}

}  // namespace eapr
