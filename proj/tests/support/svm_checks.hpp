#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>

#include "eapr/svm.hpp"

namespace svm_checks {

using eapr::Point;
using eapr::SvmModel;

/// Decision value recomputed term by term without the library's helpers.
inline double direct_decision(const SvmModel& m, const Point& p) {
  double f = m.bias;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
    const Point& s = m.support_vectors[i];
    double k;
    if (m.kernel == eapr::Kernel::kLinear) {
      k = s.x * p.x + s.y * p.y;
    } else {
      const double d2 = (s.x - p.x) * (s.x - p.x) + (s.y - p.y) * (s.y - p.y);
      k = std::exp(-m.gamma * d2);
    }
    f += m.alphas[i] * m.labels[i] * k;
  }
  return f;
}

/// Describes the first KKT violation on the training set, or returns empty.
inline std::string kkt_violation(const SvmModel& m, std::span<const Point> x, std::span<const int> y, double tol) {
  std::map<Point, double> alpha;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) alpha[m.support_vectors[i]] = m.alphas[i];
  double sum = 0;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i) {
    if (m.alphas[i] < 0 || m.alphas[i] > m.C) return "alpha out of [0, C]";
    sum += m.alphas[i] * m.labels[i];
  }
  if (std::abs(sum) > 1e-8) return "sum alpha_i y_i = " + std::to_string(sum);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = alpha.count(x[i]) ? alpha[x[i]] : 0.0;
    const double margin = y[i] * direct_decision(m, x[i]);
    if (a == 0 && margin < 1 - tol) return "alpha=0 but y f = " + std::to_string(margin);
    if (a > 0 && a < m.C && std::abs(margin - 1) > tol) return "free SV with y f = " + std::to_string(margin);
    if (a == m.C && margin > 1 + tol) return "bound SV with y f = " + std::to_string(margin);
  }
  return {};
}

}  // namespace svm_checks
