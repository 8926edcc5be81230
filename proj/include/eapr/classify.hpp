#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eapr/core.hpp"
#include "eapr/rng.hpp"
#include "eapr/svm.hpp"

namespace eapr {

/// Binary metrics with GOOD (+1) as the positive class. Precision and recall
/// are absent when their denominator is zero.
struct BinaryMetrics {
  std::size_t true_pos = 0, false_pos = 0, true_neg = 0, false_neg = 0;
  double accuracy = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;

  bool operator==(const BinaryMetrics&) const = default;
};

inline BinaryMetrics confusion_metrics(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size())
    throw Error(ErrorCode::kInvalidArgument, "prediction and label vectors differ in length");
  BinaryMetrics m;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (predicted[i] > 0) (actual[i] > 0 ? m.true_pos : m.false_pos)++;
    else (actual[i] > 0 ? m.false_neg : m.true_neg)++;
  }
  const std::size_t n = actual.size();
  if (n > 0) m.accuracy = static_cast<double>(m.true_pos + m.true_neg) / static_cast<double>(n);
  if (m.true_pos + m.false_pos > 0)
    m.precision = static_cast<double>(m.true_pos) / static_cast<double>(m.true_pos + m.false_pos);
  if (m.true_pos + m.false_neg > 0)
    m.recall = static_cast<double>(m.true_pos) / static_cast<double>(m.true_pos + m.false_neg);
  return m;
}

/// Assigns each example to one of `folds` folds, stratified by label. Within
/// each class the examples are taken in `order` (callers pass a canonical
/// order, e.g. sorted ids), shuffled with `seed`, and dealt round-robin.
/// Dealing continues across classes so fold sizes stay balanced.
inline std::vector<std::size_t> stratified_folds(std::span<const int> labels, std::span<const std::size_t> order,
                                                 std::size_t folds, std::uint64_t seed) {
  std::vector<std::size_t> assignment(labels.size(), 0);
  Rng rng(seed);
  std::size_t next = 0;
  for (int cls : {1, -1}) {
    std::vector<std::size_t> members;
    for (std::size_t idx : order)
      if (labels[idx] == cls) members.push_back(idx);
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t idx : members) {
      assignment[idx] = next % folds;
      ++next;
    }
  }
  return assignment;
}

inline std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

/// Trains an SVM, or a constant predictor when only one class is present.
inline SvmModel train_or_constant(std::span<const Point> coords, std::span<const int> labels,
                                  const SvmConfig& config) {
  const bool pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
  if (pos && neg) return train_svm(coords, labels, config);
  return SvmModel::constant(pos ? 1 : -1);
}

/// Stratified k-fold cross-validation of one binary SVM. Held-out
/// predictions of all folds are pooled before computing metrics.
inline BinaryMetrics cross_validate(std::span<const Point> coords, std::span<const int> labels, std::size_t folds,
                                    const SvmConfig& config, std::span<const std::size_t> order = {}) {
  if (coords.size() != labels.size())
    throw Error(ErrorCode::kInvalidArgument, "coordinates and labels differ in length");
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "cross-validation needs at least 2 folds");
  if (coords.size() < folds)
    throw Error(ErrorCode::kTooFewInstances, "fewer instances than cross-validation folds");

  std::vector<std::size_t> default_order;
  if (order.empty()) {
    default_order = identity_order(coords.size());
    order = default_order;
  }
  const auto fold_of = stratified_folds(labels, order, folds, derive_seed(config.seed, "folds"));

  std::vector<int> predicted(labels.size(), 0);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<Point> train_x;
    std::vector<int> train_y;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (fold_of[i] != f) {
        train_x.push_back(coords[i]);
        train_y.push_back(labels[i]);
      }
    SvmConfig fold_config = config;
    fold_config.seed = derive_seed(config.seed, f);
    const SvmModel model = train_or_constant(train_x, train_y, fold_config);
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (fold_of[i] == f) predicted[i] = predict(model, coords[i]).label;
  }
  return confusion_metrics(predicted, labels);
}

struct AlgorithmMetrics {
  std::string algorithm;
  BinaryMetrics metrics;

  bool operator==(const AlgorithmMetrics&) const = default;
};

/// Per-algorithm metrics plus their unweighted means. Mean precision is taken
/// over the algorithms where precision is defined.
struct SelectorMetrics {
  std::vector<AlgorithmMetrics> per_algorithm;
  double accuracy = 0.0;
  std::optional<double> precision;

  bool operator==(const SelectorMetrics&) const = default;
};

inline SelectorMetrics aggregate_metrics(std::vector<AlgorithmMetrics> per_algorithm) {
  SelectorMetrics out;
  out.per_algorithm = std::move(per_algorithm);
  double acc = 0.0, prec = 0.0;
  std::size_t prec_count = 0;
  for (const auto& a : out.per_algorithm) {
    acc += a.metrics.accuracy;
    if (a.metrics.precision) {
      prec += *a.metrics.precision;
      ++prec_count;
    }
  }
  if (!out.per_algorithm.empty()) out.accuracy = acc / static_cast<double>(out.per_algorithm.size());
  if (prec_count > 0) out.precision = prec / static_cast<double>(prec_count);
  return out;
}

struct RankedAlgorithm {
  std::string algorithm;
  double decision = 0.0;

  bool operator==(const RankedAlgorithm&) const = default;
};

/// Ranks algorithms for one point by decision value, highest first; equal
/// values are ordered by name.
inline std::vector<RankedAlgorithm> select_aprt(const std::map<std::string, SvmModel>& models, const Point& p) {
  std::vector<RankedAlgorithm> out;
  out.reserve(models.size());
  for (const auto& [name, model] : models) out.push_back({name, decision_value(model, p)});
  std::stable_sort(out.begin(), out.end(), [](const RankedAlgorithm& a, const RankedAlgorithm& b) {
    if (a.decision != b.decision) return a.decision > b.decision;
    return a.algorithm < b.algorithm;
  });
  return out;
}

/// +1 for GOOD, -1 for BAD; MISSING instances are left out. Returns the
/// indices of the kept rows alongside the labels.
struct BinaryLabels {
  std::vector<std::size_t> rows;
  std::vector<int> labels;
};

inline BinaryLabels to_binary_labels(std::span<const Outcome> outcomes) {
  BinaryLabels out;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i] == Outcome::kMissing) continue;
    out.rows.push_back(i);
    out.labels.push_back(outcomes[i] == Outcome::kGood ? 1 : -1);
  }
  return out;
}

}  // namespace eapr
