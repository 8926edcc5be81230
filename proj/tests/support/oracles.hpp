#pragma once

// Independent reference computations used only by tests. None of these call
// into the library's geometry, eigen or SVM code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eapr/core.hpp"

namespace oracle {

using eapr::Point;

inline double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Closed triangle membership, exact for integer-valued coordinates. A
// degenerate (collinear) triangle contains nothing; segments are handled by
// on_segment.
inline bool in_closed_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  if (orient(a, b, c) == 0) return false;
  const double d1 = orient(a, b, p), d2 = orient(b, c, p), d3 = orient(c, a, p);
  const bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(has_neg && has_pos);
}

// On the closed segment ab.
inline bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

/// O(n^4) extreme-point oracle: a distinct point is a hull vertex iff it lies
/// in no closed triangle (or segment) spanned by other points. Returned
/// sorted; empty when fewer than three extreme points exist or all points
/// are collinear.
inline std::vector<Point> brute_force_extreme_points(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  bool all_collinear = true;
  for (std::size_t i = 2; i < n && all_collinear; ++i)
    if (orient(pts[0], pts[1], pts[i]) != 0) all_collinear = false;
  if (n < 3 || all_collinear) return {};

  std::vector<Point> out;
  for (std::size_t p = 0; p < n; ++p) {
    bool covered = false;
    for (std::size_t a = 0; a < n && !covered; ++a) {
      if (a == p) continue;
      for (std::size_t b = a + 1; b < n && !covered; ++b) {
        if (b == p) continue;
        if (on_segment(pts[p], pts[a], pts[b])) covered = true;
        for (std::size_t c = b + 1; c < n && !covered; ++c) {
          if (c == p) continue;
          if (in_closed_triangle(pts[p], pts[a], pts[b], pts[c])) covered = true;
        }
      }
    }
    if (!covered) out.push_back(pts[p]);
  }
  return out;
}

/// Rejection-sampling area: fraction of uniform samples in the box
/// [x0,x1]x[y0,y1] for which `inside` holds, times the box area.
template <typename Inside>
double monte_carlo_area(Inside inside, double x0, double x1, double y0, double y1, std::size_t samples,
                        std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < samples; ++i)
    if (inside(Point{ux(gen), uy(gen)})) ++hits;
  return (x1 - x0) * (y1 - y0) * static_cast<double>(hits) / static_cast<double>(samples);
}

/// Ray-casting point-in-polygon for an arbitrary simple polygon.
inline bool point_in_polygon(const std::vector<Point>& poly, const Point& p) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
  }
  return inside;
}

using Mat = std::vector<std::vector<double>>;

/// det(A - lambda I) by Gaussian elimination with partial pivoting.
inline double char_poly(const Mat& a, double lambda) {
  Mat m = a;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) m[i][i] -= lambda;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// Real roots of the characteristic polynomial of a symmetric matrix with
/// distinct eigenvalues: sign changes on a grid over the Gershgorin interval,
/// refined by bisection. The grid is refined until n roots are bracketed.
inline std::vector<double> char_poly_roots(const Mat& a) {
  const std::size_t n = a.size();
  double lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += std::abs(a[i][j]);
    lo = std::min(lo, a[i][i] - r);
    hi = std::max(hi, a[i][i] + r);
  }
  lo -= 1e-6;
  hi += 1e-6;
  for (std::size_t steps = 4096; steps <= (1u << 22); steps *= 4) {
    std::vector<double> roots;
    double prev_x = lo, prev_f = char_poly(a, lo);
    for (std::size_t s = 1; s <= steps; ++s) {
      const double x = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(steps);
      const double f = char_poly(a, x);
      if (f == 0.0) {
        roots.push_back(x);
      } else if ((prev_f < 0) != (f < 0) && prev_f != 0.0) {
        double l = prev_x, h = x, fl = prev_f;
        for (int it = 0; it < 200 && h - l > 1e-15 * std::max(1.0, std::abs(h)); ++it) {
          const double mid = 0.5 * (l + h);
          const double fm = char_poly(a, mid);
          if ((fm < 0) == (fl < 0)) {
            l = mid;
            fl = fm;
          } else {
            h = mid;
          }
        }
        roots.push_back(0.5 * (l + h));
      }
      prev_x = x;
      prev_f = f;
    }
    if (roots.size() == n) {
      std::sort(roots.rbegin(), roots.rend());
      return roots;
    }
  }
  return {};
}

/// Sample covariance (divisor n - 1), written out independently.
inline Mat covariance(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size(), m = rows[0].size();
  std::vector<double> mean(m, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < m; ++j) mean[j] += r[j] / static_cast<double>(n);
  Mat c(m, std::vector<double>(m, 0.0));
  for (const auto& r : rows)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / static_cast<double>(n - 1);
  return c;
}

/// Pairwise (cascade) summation of a sorted copy.
inline double pairwise_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  while (v.size() > 1) {
    std::vector<double> next;
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] + v[i + 1]);
    if (v.size() % 2) next.push_back(v.back());
    v = std::move(next);
  }
  return v.empty() ? 0.0 : v[0];
}

}  // namespace oracle
