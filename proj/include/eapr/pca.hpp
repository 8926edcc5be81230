#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "eapr/core.hpp"
#include "eapr/ingest.hpp"
#include "eapr/linalg.hpp"

namespace eapr {

/// Two-component PCA over standardized features. `loadings[k]` holds the
/// (z1, z2) coefficients of `scaling.features[k]`.
struct PcaModel {
  ScalingParams scaling;
  std::vector<std::array<double, 2>> loadings;
  std::vector<double> eigenvalues;  // all m, descending
  double explained_variance_2d = 0.0;

  std::size_t dimension() const { return loadings.size(); }

  bool operator==(const PcaModel&) const = default;
};

namespace detail {

inline void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (v[best] < 0)
    for (auto& e : v) e = -e;
}

}  // namespace detail

/// Fits PCA to an already standardized n x m matrix. Covariance uses divisor
/// n - 1. Each retained eigenvector is oriented so its largest-magnitude
/// entry is positive; equal eigenvalues are ordered by the oriented vectors,
/// lexicographically greater first.
inline PcaModel fit_pca(const Matrix& standardized, ScalingParams scaling = {}) {
  const std::size_t n = standardized.rows(), m = standardized.cols();
  if (n < 3) throw Error(ErrorCode::kTooFewInstances, "PCA needs at least 3 instances");
  if (m < 2) throw Error(ErrorCode::kInvalidArgument, "PCA to 2D needs at least 2 features");
  for (double v : standardized.data())
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteInput, "non-finite value in PCA input");

  const Matrix cov = covariance(standardized);
  const SymmetricEigen eig = jacobi_eigen(cov, 1e-12, 100);

  struct Pair {
    double value;
    std::vector<double> vec;
  };
  std::vector<Pair> pairs(m);
  for (std::size_t k = 0; k < m; ++k) {
    pairs[k].value = std::max(0.0, eig.values[k]);
    pairs[k].vec = eig.vectors.column(k);
    detail::fix_sign(pairs[k].vec);
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < m; ++i) trace += cov(i, i);
  const double tie = 1e-12 * std::max(1.0, trace);
  std::sort(pairs.begin(), pairs.end(), [tie](const Pair& a, const Pair& b) {
    if (std::abs(a.value - b.value) > tie) return a.value > b.value;
    return a.vec > b.vec;
  });

  PcaModel model;
  if (scaling.features.empty()) {
    for (std::size_t k = 0; k < m; ++k) scaling.features.push_back("f" + std::to_string(k));
    scaling.means.assign(m, 0.0);
    scaling.stds.assign(m, 1.0);
  }
  if (scaling.features.size() != m)
    throw Error(ErrorCode::kFeatureMismatch, "scaling parameters do not match matrix width");
  model.scaling = std::move(scaling);
  model.loadings.resize(m);
  for (std::size_t k = 0; k < m; ++k) model.loadings[k] = {pairs[0].vec[k], pairs[1].vec[k]};
  for (const auto& p : pairs) model.eigenvalues.push_back(p.value);

  const double total = std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
  model.explained_variance_2d = total > 0 ? (model.eigenvalues[0] + model.eigenvalues[1]) / total : 0.0;
  return model;
}

/// Standardizes the subset's features of `table` and fits PCA in one step.
inline PcaModel fit_pca(const InstanceTable& table, const FeatureSubset& subset) {
  auto std_result = standardize(table, subset);
  if (std_result.scaling.features.size() < 2)
    throw Error(ErrorCode::kAllFeaturesDropped, "fewer than 2 features with non-zero variance");
  return fit_pca(std_result.values, std::move(std_result.scaling));
}

/// Projects one raw feature vector given in `model.scaling.features` order.
inline Point project_point(const PcaModel& model, std::span<const double> raw) {
  if (raw.size() != model.dimension())
    throw Error(ErrorCode::kFeatureMismatch, "feature vector length does not match the model");
  Point z;
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const double s = (raw[k] - model.scaling.means[k]) / model.scaling.stds[k];
    z.x += s * model.loadings[k][0];
    z.y += s * model.loadings[k][1];
  }
  return z;
}

/// Projects every row of `table` onto the model's two axes. `subset` must
/// equal the model's retained plus dropped features.
inline Coordinates2D transform(const PcaModel& model, const InstanceTable& table, const FeatureSubset& subset) {
  std::vector<FeatureName> expected = model.scaling.features;
  expected.insert(expected.end(), model.scaling.dropped_features.begin(), model.scaling.dropped_features.end());
  if (FeatureSubset(expected) != subset)
    throw Error(ErrorCode::kFeatureMismatch, "subset does not match the model's features");

  std::vector<std::size_t> cols;
  for (const auto& name : model.scaling.features) {
    auto c = table.feature_index(name);
    if (!c) throw Error(ErrorCode::kFeatureMismatch, "table lacks feature '" + name + "'");
    cols.push_back(*c);
  }
  Coordinates2D out;
  out.reserve(table.rows.size());
  std::vector<double> raw(cols.size());
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < cols.size(); ++k) raw[k] = row.features[cols[k]];
    out.push_back(project_point(model, raw));
  }
  return out;
}

/// Per-component share of total variance, descending.
inline std::vector<double> explained_variance(const PcaModel& model) {
  const double total = std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
  std::vector<double> out;
  out.reserve(model.eigenvalues.size());
  for (double v : model.eigenvalues) out.push_back(total > 0 ? v / total : 0.0);
  return out;
}

}  // namespace eapr
