#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "eapr/core.hpp"

namespace eapr {

/// Convex polygon stored as its extreme points in counter-clockwise order.
/// An empty vertex list is the degenerate polygon (fewer than three
/// non-collinear input points).
struct ConvexPolygon {
  std::vector<Point> vertices;

  bool degenerate() const { return vertices.size() < 3; }

  bool operator==(const ConvexPolygon&) const = default;
};

inline double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Andrew's monotone chain. Collinear boundary points are dropped. The
/// result starts at the lowest-x (then lowest-y) point.
inline ConvexPolygon convex_hull(std::span<const Point> input) {
  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) return {};
  return {std::move(hull)};
}

inline ConvexPolygon convex_hull(const std::vector<Point>& input) {
  return convex_hull(std::span<const Point>(input));
}

/// Signed shoelace sum; positive for counter-clockwise vertex order.
inline double signed_area(std::span<const Point> v) {
  if (v.size() < 3) return 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < v.size(); ++j) s += v[j].x * v[j + 1].y - v[j].y * v[j + 1].x;
  s += v.back().x * v.front().y - v.back().y * v.front().x;
  return 0.5 * s;
}

inline double polygon_area(const ConvexPolygon& poly) {
  if (poly.degenerate()) return 0.0;
  return std::max(0.0, signed_area(poly.vertices));
}

/// Point-in-polygon test that counts points within `tolerance` of the
/// boundary as inside.
inline bool contains(const ConvexPolygon& poly, const Point& p, double tolerance = 1e-9) {
  if (poly.degenerate()) return false;
  const auto& v = poly.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (cross(a, b, p) < -tolerance * len) return false;
  }
  return true;
}

/// Intersection of two convex polygons by Sutherland-Hodgman clipping of `a`
/// against every edge of `b`.
inline ConvexPolygon convex_intersection(const ConvexPolygon& a, const ConvexPolygon& b) {
  if (a.degenerate() || b.degenerate()) return {};
  std::vector<Point> out = a.vertices;
  const auto& clip = b.vertices;
  for (std::size_t e = 0; e < clip.size() && !out.empty(); ++e) {
    const Point& c0 = clip[e];
    const Point& c1 = clip[(e + 1) % clip.size()];
    std::vector<Point> in = std::move(out);
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
      const Point& p = in[i];
      const Point& q = in[(i + 1) % in.size()];
      const double dp = cross(c0, c1, p);
      const double dq = cross(c0, c1, q);
      if (dp >= 0) out.push_back(p);
      if ((dp >= 0) != (dq >= 0)) {
        const double t = dp / (dp - dq);
        out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
      }
    }
  }
  return convex_hull(out);
}

}  // namespace eapr
