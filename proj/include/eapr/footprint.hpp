#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "eapr/core.hpp"
#include "eapr/geometry.hpp"

namespace eapr {

/// Region of the instance space where one algorithm performs well.
struct Footprint {
  std::string algorithm;
  ConvexPolygon good_hull;
  ConvexPolygon bad_hull;
  double area_good = 0.0;
  double area_net = 0.0;  // area_good minus the part covered by bad_hull
  double purity = 0.0;    // GOOD share of labeled instances inside good_hull
  double density = 0.0;   // GOOD instances inside good_hull per unit area
  std::size_t good_inside = 0;
  std::size_t labeled_inside = 0;

  bool degenerate() const { return good_hull.degenerate(); }

  bool operator==(const Footprint&) const = default;
};

/// Builds the footprint of `algorithm` from instance coordinates and that
/// algorithm's outcome labels. MISSING instances are ignored. Fewer than
/// three usable GOOD points give a degenerate footprint with zero metrics.
inline Footprint compute_footprint(std::span<const Point> coords, std::span<const Outcome> labels,
                                   std::string algorithm, double tolerance = 1e-9) {
  if (coords.size() != labels.size())
    throw Error(ErrorCode::kInvalidArgument, "coordinates and labels differ in length");
  std::vector<Point> good, bad;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (labels[i] == Outcome::kGood) good.push_back(coords[i]);
    else if (labels[i] == Outcome::kBad) bad.push_back(coords[i]);
  }

  Footprint fp;
  fp.algorithm = std::move(algorithm);
  fp.good_hull = convex_hull(good);
  fp.bad_hull = convex_hull(bad);
  if (fp.good_hull.degenerate()) return fp;

  fp.area_good = polygon_area(fp.good_hull);
  const double contradicted = polygon_area(convex_intersection(fp.good_hull, fp.bad_hull));
  fp.area_net = std::clamp(fp.area_good - contradicted, 0.0, fp.area_good);

  for (const auto& p : good)
    if (contains(fp.good_hull, p, tolerance)) ++fp.good_inside;
  fp.labeled_inside = fp.good_inside;
  for (const auto& p : bad)
    if (contains(fp.good_hull, p, tolerance)) ++fp.labeled_inside;
  fp.purity = static_cast<double>(fp.good_inside) / static_cast<double>(fp.labeled_inside);
  fp.density = fp.area_good > 0 ? static_cast<double>(fp.good_inside) / fp.area_good : 0.0;
  return fp;
}

/// Shared GOOD area of two footprints relative to the smaller one.
inline double footprint_overlap(const Footprint& a, const Footprint& b) {
  if (a.degenerate() || b.degenerate() || a.area_good <= 0 || b.area_good <= 0)
    throw Error(ErrorCode::kDegenerateFootprint, "overlap needs two non-degenerate footprints");
  const double shared = polygon_area(convex_intersection(a.good_hull, b.good_hull));
  return std::clamp(shared / std::min(a.area_good, b.area_good), 0.0, 1.0);
}

}  // namespace eapr
