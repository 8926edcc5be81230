#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "eapr/classify.hpp"
#include "eapr/core.hpp"
#include "eapr/pca.hpp"
#include "eapr/rng.hpp"

namespace eapr {

struct GaConfig {
  std::size_t population_size = 50;
  std::size_t generations = 100;
  double crossover_rate = 0.9;
  std::optional<double> mutation_rate;  // per bit; absent means 1/n
  std::size_t tournament_size = 2;
  std::size_t min_k = 4;
  std::size_t max_k = 12;
  std::size_t cv_folds = 5;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency

  bool operator==(const GaConfig&) const = default;
};

/// Throws kInvalidArgument when the configuration cannot be used on a table
/// with `feature_count` candidate features.
inline void check_ga_config(const GaConfig& c, std::size_t feature_count) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kInvalidArgument, "GA config: " + why); };
  if (c.population_size == 0) fail("population must be positive");
  if (c.tournament_size == 0 || c.tournament_size > c.population_size) fail("tournament size out of range");
  if (c.min_k < 2) fail("min_k must be at least 2");
  if (c.max_k < c.min_k) fail("max_k must be at least min_k");
  if (c.max_k > feature_count) fail("max_k exceeds the number of features");
  if (c.cv_folds < 2) fail("cv_folds must be at least 2");
  if (c.crossover_rate < 0 || c.crossover_rate > 1) fail("crossover rate must be a probability");
  if (c.mutation_rate && (*c.mutation_rate < 0 || *c.mutation_rate > 1)) fail("mutation rate must be a probability");
}

struct FitnessValue {
  double mean_cv_accuracy = 0.0;
  std::size_t subset_size = 0;

  bool operator==(const FitnessValue&) const = default;
};

struct ScoredSubset {
  FeatureSubset subset;
  FitnessValue fitness;

  bool operator==(const ScoredSubset&) const = default;
};

/// Strict preference: higher accuracy, then fewer features, then the
/// lexicographically smaller sorted name list.
inline bool preferred(const ScoredSubset& a, const ScoredSubset& b) {
  if (a.fitness.mean_cv_accuracy != b.fitness.mean_cv_accuracy)
    return a.fitness.mean_cv_accuracy > b.fitness.mean_cv_accuracy;
  if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
  return a.subset.names() < b.subset.names();
}

inline FeatureSubset tie_break(std::span<const ScoredSubset> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "tie_break needs at least one candidate");
  return std::min_element(candidates.begin(), candidates.end(), preferred)->subset;
}

/// Copy of `table` with rows sorted by instance id.
inline InstanceTable sorted_by_id(const InstanceTable& table) {
  InstanceTable out = table;
  std::sort(out.rows.begin(), out.rows.end(),
            [](const InstanceRecord& a, const InstanceRecord& b) { return a.instance_id < b.instance_id; });
  return out;
}

namespace detail {

inline SvmConfig wrapper_svm_config(std::uint64_t seed) {
  SvmConfig c;
  c.kernel = Kernel::kLinear;
  c.C = 1.0;
  c.tolerance = 1e-3;
  c.max_passes = 1000;
  c.seed = seed;
  return c;
}

// `table` must already be sorted by instance id.
inline FitnessValue evaluate_sorted(const InstanceTable& table, const FeatureSubset& subset, std::size_t folds,
                                    std::uint64_t seed) {
  FitnessValue fitness{0.0, subset.size()};

  std::vector<std::vector<int>> labels;
  std::vector<std::vector<std::size_t>> rows;
  for (std::size_t a = 0; a < table.algorithm_names.size(); ++a) {
    auto bin = to_binary_labels(table.outcomes_of(a));
    const bool pos = std::find(bin.labels.begin(), bin.labels.end(), 1) != bin.labels.end();
    const bool neg = std::find(bin.labels.begin(), bin.labels.end(), -1) != bin.labels.end();
    if (!pos || !neg || bin.labels.size() < folds) continue;
    labels.push_back(std::move(bin.labels));
    rows.push_back(std::move(bin.rows));
  }
  if (labels.empty())
    throw Error(ErrorCode::kDegenerateLabels, "no algorithm has both GOOD and BAD instances");

  // Fewer than two varying features cannot span a 2D space.
  Standardized scaled;
  try {
    scaled = standardize(table, subset);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAllFeaturesDropped) return fitness;
    throw;
  }
  if (scaled.scaling.features.size() < 2) return fitness;
  const PcaModel model = fit_pca(scaled.values, std::move(scaled.scaling));
  const Coordinates2D coords = transform(model, table, subset);

  double total = 0.0;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    std::vector<Point> x;
    x.reserve(rows[a].size());
    for (std::size_t r : rows[a]) x.push_back(coords[r]);
    total += cross_validate(x, labels[a], folds, wrapper_svm_config(seed)).accuracy;
  }
  fitness.mean_cv_accuracy = total / static_cast<double>(labels.size());
  return fitness;
}

}  // namespace detail

/// Wrapper fitness of a feature subset: the unweighted mean, over algorithms
/// with both labels present, of stratified k-fold accuracy of a linear SVM
/// trained on the subset's 2D PCA projection. Rows are processed in
/// instance-id order, so the result does not depend on row order.
inline FitnessValue evaluate_subset(const InstanceTable& table, const FeatureSubset& subset, const GaConfig& config,
                                    std::uint64_t seed) {
  if (subset.size() < config.min_k || subset.size() > config.max_k)
    throw Error(ErrorCode::kInvalidArgument, "subset cardinality outside [min_k, max_k]");
  return detail::evaluate_sorted(sorted_by_id(table), subset, config.cv_folds, seed);
}

struct SelectionResult {
  FeatureSubset best;
  FitnessValue best_fitness;
  std::vector<FitnessValue> history;  // best-so-far after each generation, initial population first
  std::vector<ScoredSubset> evaluated;  // every distinct subset scored, best first

  bool operator==(const SelectionResult&) const = default;
};

/// Genetic search over feature subsets encoded as bitmasks. Tournament
/// selection, uniform crossover, per-bit flip mutation, random repair back
/// into [min_k, max_k] and one elite carried over each generation.
inline SelectionResult run_ga(const InstanceTable& input, const GaConfig& config) {
  const std::size_t n = input.feature_names.size();
  check_ga_config(config, n);
  const InstanceTable table = sorted_by_id(input);
  const double mutation = config.mutation_rate.value_or(1.0 / static_cast<double>(n));
  const std::uint64_t fold_seed = derive_seed(config.seed, "fitness");
  Rng rng(derive_seed(config.seed, "ga"));

  using Mask = std::vector<bool>;
  auto to_subset = [&](const Mask& m) {
    std::vector<FeatureName> names;
    for (std::size_t i = 0; i < n; ++i)
      if (m[i]) names.push_back(table.feature_names[i]);
    return FeatureSubset(std::move(names));
  };
  auto count = [](const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), true)); };

  auto repair = [&](Mask& m) {
    std::size_t k = count(m);
    while (k > config.max_k) {
      std::size_t pick = static_cast<std::size_t>(rng.below(k));
      for (std::size_t i = 0; i < n; ++i)
        if (m[i] && pick-- == 0) {
          m[i] = false;
          break;
        }
      --k;
    }
    while (k < config.min_k) {
      std::size_t pick = static_cast<std::size_t>(rng.below(n - k));
      for (std::size_t i = 0; i < n; ++i)
        if (!m[i] && pick-- == 0) {
          m[i] = true;
          break;
        }
      ++k;
    }
  };

  std::map<Mask, FitnessValue> cache;
  const std::size_t threads =
      config.threads ? config.threads : std::max<std::size_t>(1, std::thread::hardware_concurrency());

  // Evaluates every uncached mask; results land in the cache keyed by mask,
  // so the schedule cannot influence what the search sees.
  auto evaluate_all = [&](const std::vector<Mask>& pop) {
    std::vector<Mask> todo;
    for (const auto& m : pop)
      if (!cache.contains(m) && std::find(todo.begin(), todo.end(), m) == todo.end()) todo.push_back(m);
    std::vector<std::optional<FitnessValue>> results(todo.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&](std::size_t start) {
      for (std::size_t i = start; i < todo.size(); i += threads) {
        try {
          results[i] = detail::evaluate_sorted(table, to_subset(todo[i]), config.cv_folds, fold_seed);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    if (threads <= 1 || todo.size() <= 1) {
      worker(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < std::min(threads, todo.size()); ++t) pool.emplace_back(worker, t);
    }
    if (failure) std::rethrow_exception(failure);
    for (std::size_t i = 0; i < todo.size(); ++i) cache.emplace(todo[i], *results[i]);
  };

  auto scored = [&](const Mask& m) { return ScoredSubset{to_subset(m), cache.at(m)}; };

  std::vector<Mask> population;
  population.reserve(config.population_size);
  for (std::size_t p = 0; p < config.population_size; ++p) {
    const std::size_t k = config.min_k + static_cast<std::size_t>(rng.below(config.max_k - config.min_k + 1));
    std::vector<std::size_t> idx = identity_order(n);
    rng.shuffle(std::span<std::size_t>(idx));
    Mask m(n, false);
    for (std::size_t i = 0; i < k; ++i) m[idx[i]] = true;
    population.push_back(std::move(m));
  }
  evaluate_all(population);

  Mask elite = population.front();
  auto update_elite = [&] {
    for (const auto& m : population)
      if (preferred(scored(m), scored(elite))) elite = m;
  };
  update_elite();

  SelectionResult result;
  result.history.push_back(cache.at(elite));

  auto tournament = [&]() -> const Mask& {
    std::size_t best = static_cast<std::size_t>(rng.below(population.size()));
    for (std::size_t t = 1; t < config.tournament_size; ++t) {
      const std::size_t c = static_cast<std::size_t>(rng.below(population.size()));
      if (preferred(scored(population[c]), scored(population[best]))) best = c;
    }
    return population[best];
  };

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    std::vector<Mask> next;
    next.reserve(config.population_size);
    next.push_back(elite);
    while (next.size() < config.population_size) {
      const Mask& p1 = tournament();
      const Mask& p2 = tournament();
      Mask c1 = p1, c2 = p2;
      if (rng.bernoulli(config.crossover_rate)) {
        for (std::size_t i = 0; i < n; ++i)
          if (rng.bernoulli(0.5)) {
            c1[i] = p2[i];
            c2[i] = p1[i];
          }
      }
      for (Mask* c : {&c1, &c2}) {
        for (std::size_t i = 0; i < n; ++i)
          if (rng.bernoulli(mutation)) (*c)[i] = !(*c)[i];
        repair(*c);
      }
      next.push_back(std::move(c1));
      if (next.size() < config.population_size) next.push_back(std::move(c2));
    }
    population = std::move(next);
    evaluate_all(population);
    update_elite();
    result.history.push_back(cache.at(elite));
  }

  result.best = to_subset(elite);
  result.best_fitness = cache.at(elite);
  for (const auto& [mask, fitness] : cache) result.evaluated.push_back({to_subset(mask), fitness});
  std::sort(result.evaluated.begin(), result.evaluated.end(), preferred);
  return result;
}

}  // namespace eapr
