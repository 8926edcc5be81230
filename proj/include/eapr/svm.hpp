#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eapr/core.hpp"
#include "eapr/rng.hpp"

namespace eapr {

enum class Kernel { kLinear, kRbf };

inline const char* to_string(Kernel k) { return k == Kernel::kLinear ? "linear" : "rbf"; }

inline Kernel kernel_from_string(std::string_view s) {
  if (s == "linear") return Kernel::kLinear;
  if (s == "rbf") return Kernel::kRbf;
  throw Error(ErrorCode::kConfig, "unknown kernel '" + std::string(s) + "'");
}

struct SvmConfig {
  Kernel kernel = Kernel::kRbf;
  double C = 1.0;
  std::optional<double> gamma;  // absent: median heuristic
  double tolerance = 1e-3;
  int max_passes = 1000;
  std::uint64_t seed = 0;

  bool operator==(const SvmConfig&) const = default;
};

/// Binary soft-margin SVM in the 2D instance space. Only support vectors
/// (alpha > 0) are kept. Labels are +1 for GOOD and -1 for BAD. A model with
/// no support vectors is a constant predictor whose decision value is `bias`.
struct SvmModel {
  Kernel kernel = Kernel::kRbf;
  double gamma = 1.0;  // resolved value; unused by the linear kernel
  double C = 1.0;
  std::vector<Point> support_vectors;
  std::vector<double> alphas;
  std::vector<int> labels;
  double bias = 0.0;
  SvmConfig config;
  bool converged = true;

  static SvmModel constant(int label) {
    SvmModel m;
    m.kernel = Kernel::kLinear;
    m.bias = label > 0 ? 1.0 : -1.0;
    m.config.kernel = Kernel::kLinear;
    return m;
  }

  bool operator==(const SvmModel&) const = default;
};

inline double kernel_value(Kernel kernel, double gamma, const Point& a, const Point& b) {
  if (kernel == Kernel::kLinear) return a.x * b.x + a.y * b.y;
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::exp(-gamma * (dx * dx + dy * dy));
}

/// gamma = 1 / (2 median^2) over pairwise distances; 1 when the median is 0.
inline double median_heuristic_gamma(std::span<const Point> points) {
  std::vector<double> sq;
  sq.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dx = points[i].x - points[j].x, dy = points[i].y - points[j].y;
      sq.push_back(dx * dx + dy * dy);
    }
  if (sq.empty()) return 1.0;
  const std::size_t mid = sq.size() / 2;
  std::nth_element(sq.begin(), sq.begin() + mid, sq.end());
  double med = sq[mid];
  if (sq.size() % 2 == 0) {
    const double lower = *std::max_element(sq.begin(), sq.begin() + mid);
    med = 0.5 * (med + lower);
  }
  return med > 0 ? 1.0 / (2.0 * med) : 1.0;
}

struct Prediction {
  int label;
  double decision;
};

inline double decision_value(const SvmModel& model, const Point& p) {
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
    f += model.alphas[i] * model.labels[i] * kernel_value(model.kernel, model.gamma, model.support_vectors[i], p);
  return f;
}

inline Prediction predict(const SvmModel& model, const Point& p) {
  const double f = decision_value(model, p);
  return {f >= 0 ? 1 : -1, f};
}

namespace detail {

// Platt's SMO over a precomputed kernel matrix. f(x) = sum a_i y_i K(x_i, x) + b.
class SmoSolver {
 public:
  SmoSolver(std::span<const Point> x, std::span<const int> y, const SvmConfig& cfg, double gamma)
      : x_(x), y_(y), n_(x.size()), C_(cfg.C), tol_(cfg.tolerance), rng_(cfg.seed),
        K_(n_ * n_), alpha_(n_, 0.0), error_(n_) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j)
        K_[i * n_ + j] = K_[j * n_ + i] = kernel_value(cfg.kernel, gamma, x[i], x[j]);
    for (std::size_t i = 0; i < n_; ++i) error_[i] = -y_[i];
  }

  bool run(int max_passes) {
    bool examine_all = true;
    int passes = 0;
    std::size_t changed = 0;
    while ((changed > 0 || examine_all) && passes < max_passes) {
      ++passes;
      changed = 0;
      for (std::size_t i = 0; i < n_; ++i)
        if (examine_all || non_bound(i)) changed += examine(i);
      if (examine_all) examine_all = false;
      else if (changed == 0) examine_all = true;
    }
    return finish(static_cast<std::size_t>(max_passes) * n_);
  }

  const std::vector<double>& alphas() const { return alpha_; }
  double bias() const { return b_; }

 private:
  double k(std::size_t i, std::size_t j) const { return K_[i * n_ + j]; }

  // Platt's loop judges each example against one running threshold and can
  // stop while an example is still outside tolerance. This phase steps on the
  // maximal violating pair until b_low <= b_up + 2 tol (Keerthi et al.), then
  // places b midway, which puts every example within tol of its condition.
  bool finish(std::size_t max_steps) {
    const double target = 2 * tol_ - 1e-9;
    for (std::size_t step = 0;; ++step) {
      std::optional<std::size_t> up, low;
      for (std::size_t i = 0; i < n_; ++i) {
        const bool in_up = (y_[i] == 1 && alpha_[i] < C_) || (y_[i] == -1 && alpha_[i] > 0);
        const bool in_low = (y_[i] == 1 && alpha_[i] > 0) || (y_[i] == -1 && alpha_[i] < C_);
        if (in_up && (!up || error_[i] < error_[*up])) up = i;
        if (in_low && (!low || error_[i] > error_[*low])) low = i;
      }
      if (!up || !low) return false;
      const double b_up = error_[*up] - b_, b_low = error_[*low] - b_;
      if (b_low <= b_up + target) {
        const double b_new = -0.5 * (b_up + b_low);
        for (double& e : error_) e += b_new - b_;
        b_ = b_new;
        return true;
      }
      if (step == max_steps || !take_step(*low, *up)) return false;
    }
  }
  bool non_bound(std::size_t i) const { return alpha_[i] > 0 && alpha_[i] < C_; }

  std::size_t examine(std::size_t i2) {
    const double r2 = error_[i2] * y_[i2];
    if (!((r2 < -tol_ && alpha_[i2] < C_) || (r2 > tol_ && alpha_[i2] > 0))) return 0;

    std::size_t non_bound_count = 0;
    std::optional<std::size_t> best;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!non_bound(i)) continue;
      ++non_bound_count;
      const double gap = std::abs(error_[i] - error_[i2]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (non_bound_count > 1 && best && take_step(*best, i2)) return 1;

    const std::size_t start_nb = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start_nb + k) % n_;
      if (non_bound(i1) && take_step(i1, i2)) return 1;
    }
    const std::size_t start = static_cast<std::size_t>(rng_.below(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (start + k) % n_;
      if (take_step(i1, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const int y1 = y_[i1], y2 = y_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(C_, C_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - C_);
      hi = std::min(C_, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
    const double eta = k11 + k22 - 2 * k12;
    double a2_new;
    if (eta > 0) {
      a2_new = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective at the segment ends.
      const double f1 = y1 * (e1 - b_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 - b_) - s * a1 * k12 - a2 * k22;
      auto objective = [&](double a2_end) {
        const double a1_end = a1 + s * (a2 - a2_end);
        return a1_end * f1 + a2_end * f2 + 0.5 * a1_end * a1_end * k11 +
               0.5 * a2_end * a2_end * k22 + s * a1_end * a2_end * k12;
      };
      const double lobj = objective(lo), hobj = objective(hi);
      if (lobj < hobj - kEps) a2_new = lo;
      else if (lobj > hobj + kEps) a2_new = hi;
      else a2_new = a2;
    }
    if (a2_new < kEps * C_) a2_new = 0.0;
    else if (a2_new > C_ * (1 - kEps)) a2_new = C_;
    if (std::abs(a2_new - a2) < kEps * (a2_new + a2 + kEps)) return false;

    double a1_new = a1 + s * (a2 - a2_new);
    if (a1_new < kEps * C_) {
      a2_new += s * a1_new;
      a1_new = 0;
    } else if (a1_new > C_ * (1 - kEps)) {
      a2_new += s * (a1_new - C_);
      a1_new = C_;
    }
    if (a2_new < kEps * C_) a2_new = 0.0;
    else if (a2_new > C_ * (1 - kEps)) a2_new = C_;

    const double d1 = y1 * (a1_new - a1), d2 = y2 * (a2_new - a2);
    const double b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = b_ - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0 && a1_new < C_) b_new = b1;
    else if (a2_new > 0 && a2_new < C_) b_new = b2;
    else b_new = 0.5 * (b1 + b2);
    const double db = b_new - b_;

    for (std::size_t i = 0; i < n_; ++i) error_[i] += d1 * k(i1, i) + d2 * k(i2, i) + db;
    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    b_ = b_new;
    return true;
  }

  static constexpr double kEps = 1e-12;

  std::span<const Point> x_;
  std::span<const int> y_;
  std::size_t n_;
  double C_, tol_;
  Rng rng_;
  std::vector<double> K_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  double b_ = 0.0;
};

}  // namespace detail

/// Trains a binary SVM with sequential minimal optimization. The second
/// multiplier is the non-bound example maximizing |E1 - E2|, falling back to
/// seeded random sweeps, then maximal-violating-pair steps until every
/// example meets its KKT condition within `tolerance`. Each phase is capped
/// at `max_passes` passes over the data; model.converged is false when a cap
/// is hit first.
inline SvmModel train_svm(std::span<const Point> coords, std::span<const int> labels, const SvmConfig& config) {
  if (coords.size() != labels.size())
    throw Error(ErrorCode::kInvalidArgument, "coordinates and labels differ in length");
  if (!(config.C > 0) || !(config.tolerance > 0) || config.max_passes <= 0)
    throw Error(ErrorCode::kInvalidArgument, "SVM needs C > 0, tolerance > 0, max_passes > 0");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) pos = true;
    else if (y == -1) neg = true;
    else throw Error(ErrorCode::kInvalidArgument, "SVM labels must be +1 or -1");
  }
  if (!pos || !neg) throw Error(ErrorCode::kSingleClassLabels, "SVM training needs both classes");

  SvmModel model;
  model.config = config;
  model.kernel = config.kernel;
  model.C = config.C;
  model.gamma = config.kernel == Kernel::kRbf ? config.gamma.value_or(median_heuristic_gamma(coords)) : 1.0;

  detail::SmoSolver solver(coords, labels, config, model.gamma);
  model.converged = solver.run(config.max_passes);
  model.bias = solver.bias();
  const auto& a = solver.alphas();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (a[i] <= 0) continue;
    model.support_vectors.push_back(coords[i]);
    model.alphas.push_back(a[i]);
    model.labels.push_back(labels[i]);
  }
  return model;
}

}  // namespace eapr
