#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eapr/core.hpp"
#include "eapr/geometry.hpp"

namespace eapr {

struct PlotSpec {
  int width = 640;
  int height = 480;
  int margin = 48;
  double point_radius = 3.0;
  std::string palette = "okabe-ito";
  std::string x_label = "z1";
  std::string y_label = "z2";

  bool operator==(const PlotSpec&) const = default;
};

struct Rgb {
  int r = 0, g = 0, b = 0;

  bool operator==(const Rgb&) const = default;
};

inline std::string to_hex(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

// Colour-blind-safe categorical cycle, 11 entries.
inline const std::vector<Rgb>& categorical_palette(std::string_view name) {
  static const std::vector<Rgb> okabe_ito = {
      {0xe6, 0x9f, 0x00}, {0x56, 0xb4, 0xe9}, {0x00, 0x9e, 0x73}, {0xf0, 0xe4, 0x42},
      {0x00, 0x72, 0xb2}, {0xd5, 0x5e, 0x00}, {0xcc, 0x79, 0xa7}, {0x00, 0x00, 0x00},
      {0x99, 0x99, 0x99}, {0x88, 0x22, 0x55}, {0x44, 0xaa, 0x99}};
  static const std::vector<Rgb> tol = {
      {0x33, 0x22, 0x88}, {0x88, 0xcc, 0xee}, {0x44, 0xaa, 0x99}, {0x11, 0x77, 0x33},
      {0x99, 0x99, 0x33}, {0xdd, 0xcc, 0x77}, {0xcc, 0x66, 0x77}, {0x88, 0x22, 0x55},
      {0xaa, 0x44, 0x99}, {0xdd, 0xdd, 0xdd}, {0x00, 0x00, 0x00}};
  if (name == "okabe-ito") return okabe_ito;
  if (name == "tol") return tol;
  throw Error(ErrorCode::kConfig, "unknown palette '" + std::string(name) + "'");
}

inline constexpr Rgb kGoodColor{0x00, 0x72, 0xb2};
inline constexpr Rgb kBadColor{0xd5, 0x5e, 0x00};
inline constexpr Rgb kLowColor{0x20, 0x40, 0xe0};   // blue, value 0
inline constexpr Rgb kHighColor{0xfa, 0xdc, 0x20};  // yellow, value 1

/// Linear blue-to-yellow map for a value in [0, 1].
inline Rgb gradient_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto mix = [t](int a, int b) { return static_cast<int>(std::lround(a + t * (b - a))); };
  return {mix(kLowColor.r, kHighColor.r), mix(kLowColor.g, kHighColor.g), mix(kLowColor.b, kHighColor.b)};
}

namespace svg_detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

inline std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

/// Affine data-to-pixel mapping with 5% padding on each side of the data range.
class Axes {
 public:
  Axes(std::span<const Point> coords, const PlotSpec& spec) : spec_(spec) {
    if (spec.width <= 2 * spec.margin || spec.height <= 2 * spec.margin)
      throw Error(ErrorCode::kInvalidArgument, "plot size must exceed twice the margin");
    auto [xlo, xhi] = std::minmax_element(coords.begin(), coords.end(),
                                          [](const Point& a, const Point& b) { return a.x < b.x; });
    auto [ylo, yhi] = std::minmax_element(coords.begin(), coords.end(),
                                          [](const Point& a, const Point& b) { return a.y < b.y; });
    pad(xlo->x, xhi->x, x0_, x1_);
    pad(ylo->y, yhi->y, y0_, y1_);
  }

  double px(double x) const { return spec_.margin + (x - x0_) / (x1_ - x0_) * (spec_.width - 2 * spec_.margin); }
  double py(double y) const {
    return spec_.height - spec_.margin - (y - y0_) / (y1_ - y0_) * (spec_.height - 2 * spec_.margin);
  }
  double x_min() const { return x0_; }
  double x_max() const { return x1_; }
  double y_min() const { return y0_; }
  double y_max() const { return y1_; }

 private:
  static void pad(double lo, double hi, double& out_lo, double& out_hi) {
    const double span = hi - lo;
    const double p = span > 0 ? 0.05 * span : 0.5;
    out_lo = lo - p;
    out_hi = hi + p;
  }

  const PlotSpec& spec_;
  double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
};

inline void open_document(std::string& out, const PlotSpec& spec, const Axes& axes) {
  const auto w = std::to_string(spec.width), h = std::to_string(spec.height);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#ffffff\"/>\n";
  const double m = spec.margin;
  out += "<rect class=\"frame\" x=\"" + num(m) + "\" y=\"" + num(m) + "\" width=\"" + num(spec.width - 2 * m) +
         "\" height=\"" + num(spec.height - 2 * m) + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  const double bottom = spec.height - m;
  auto text = [&](double x, double y, const std::string& anchor, const std::string& s) {
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
  };
  text(m, bottom + 14, "start", tick(axes.x_min()));
  text(spec.width - m, bottom + 14, "end", tick(axes.x_max()));
  text(m - 4, bottom, "end", tick(axes.y_min()));
  text(m - 4, m + 8, "end", tick(axes.y_max()));
  text(spec.width / 2.0, spec.height - 8, "middle", spec.x_label);
  out += "<text x=\"14\" y=\"" + num(spec.height / 2.0) + "\" font-family=\"sans-serif\" font-size=\"11\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 14 " + num(spec.height / 2.0) + ")\">" +
         escape(spec.y_label) + "</text>\n";
}

inline void circle(std::string& out, double cx, double cy, double r, const std::string& fill) {
  out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\"/>\n";
}

inline void polygon(std::string& out, const ConvexPolygon& poly, const Axes& axes, const std::string& cls,
                    const std::string& stroke, const std::string& fill, const std::string& extra = "") {
  if (poly.degenerate()) return;
  out += "<polygon class=\"" + cls + "\" points=\"";
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    if (i) out += ' ';
    out += num(axes.px(poly.vertices[i].x)) + "," + num(axes.py(poly.vertices[i].y));
  }
  out += "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\" stroke-width=\"1.5\"" + extra + "/>\n";
}

struct LegendEntry {
  std::string label;
  std::string color;
};

inline void legend(std::string& out, const PlotSpec& spec, std::span<const LegendEntry> entries) {
  const double x = spec.width - spec.margin - 110;
  double y = spec.margin + 6;
  out += "<g class=\"legend\">\n";
  for (const auto& e : entries) {
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"10\" height=\"10\" fill=\"" + e.color + "\"/>\n";
    out += "<text x=\"" + num(x + 14) + "\" y=\"" + num(y + 9) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(e.label) + "</text>\n";
    y += 14;
  }
  out += "</g>\n";
}

}  // namespace svg_detail

/// Outlines drawn on a footprint plot.
struct FootprintHulls {
  ConvexPolygon good;
  ConvexPolygon contradiction;  // good hull intersected with bad hull
};

/// Scatter of GOOD and BAD instances for one algorithm with its footprint
/// hull and contradicted region. MISSING instances are not drawn but still
/// shape the axes so every plot of one analysis shares a coordinate frame.
inline std::string render_footprint_svg(std::span<const Point> coords, std::span<const Outcome> labels,
                                        const FootprintHulls& hulls, const PlotSpec& spec,
                                        std::string_view title = {}) {
  if (coords.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to plot");
  if (coords.size() != labels.size()) throw Error(ErrorCode::kInvalidArgument, "coordinates and labels differ");
  using namespace svg_detail;
  const Axes axes(coords, spec);
  std::string out;
  open_document(out, spec, axes);
  if (!title.empty())
    out += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">" + escape(title) + "</text>\n";
  polygon(out, hulls.good, axes, "footprint", to_hex(kGoodColor), to_hex(kGoodColor), " fill-opacity=\"0.12\"");
  polygon(out, hulls.contradiction, axes, "contradiction", to_hex(kBadColor), to_hex(kBadColor),
          " fill-opacity=\"0.18\" stroke-dasharray=\"4 3\"");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (labels[i] == Outcome::kMissing) continue;
    circle(out, axes.px(coords[i].x), axes.py(coords[i].y), spec.point_radius,
           to_hex(labels[i] == Outcome::kGood ? kGoodColor : kBadColor));
  }
  const LegendEntry entries[] = {{"GOOD", to_hex(kGoodColor)}, {"BAD", to_hex(kBadColor)}};
  legend(out, spec, entries);
  out += "</svg>\n";
  return out;
}

/// Scatter coloured by a feature already normalized to [0, 1], with a
/// colour bar labelled by the raw minimum and maximum.
inline std::string render_feature_svg(std::span<const Point> coords, std::span<const double> normalized,
                                      const PlotSpec& spec, std::string_view feature = {}, double raw_min = 0.0,
                                      double raw_max = 1.0) {
  if (coords.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to plot");
  if (coords.size() != normalized.size()) throw Error(ErrorCode::kInvalidArgument, "coordinates and values differ");
  using namespace svg_detail;
  const Axes axes(coords, spec);
  std::string out;
  open_document(out, spec, axes);
  out += "<defs><linearGradient id=\"colorbar\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
         "<stop offset=\"0\" stop-color=\"" + to_hex(kLowColor) + "\"/>"
         "<stop offset=\"1\" stop-color=\"" + to_hex(kHighColor) + "\"/></linearGradient></defs>\n";
  if (!feature.empty())
    out += "<text x=\"" + num(spec.width / 2.0) + "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"middle\">" + escape(feature) + "</text>\n";
  for (std::size_t i = 0; i < coords.size(); ++i)
    circle(out, axes.px(coords[i].x), axes.py(coords[i].y), spec.point_radius, to_hex(gradient_color(normalized[i])));

  const double bar_x = spec.width - spec.margin + 10;
  const double bar_top = spec.margin, bar_h = spec.height - 2.0 * spec.margin;
  out += "<g class=\"colorbar\">\n<rect x=\"" + num(bar_x) + "\" y=\"" + num(bar_top) +
         "\" width=\"10\" height=\"" + num(bar_h) + "\" fill=\"url(#colorbar)\" stroke=\"#333333\"/>\n";
  out += "<text class=\"tick-max\" x=\"" + num(bar_x + 5) + "\" y=\"" + num(bar_top - 4) +
         "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" + tick(raw_max) + "</text>\n";
  out += "<text class=\"tick-min\" x=\"" + num(bar_x + 5) + "\" y=\"" + num(bar_top + bar_h + 12) +
         "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" + tick(raw_min) + "</text>\n</g>\n";
  out += "</svg>\n";
  return out;
}

/// Scatter coloured by benchmark tag; one colour per tag, legend sorted.
inline std::string render_dataset_svg(std::span<const Point> coords, std::span<const std::string> tags,
                                      const PlotSpec& spec) {
  if (coords.empty() || tags.empty()) throw Error(ErrorCode::kEmptyInput, "nothing to plot");
  if (coords.size() != tags.size()) throw Error(ErrorCode::kInvalidArgument, "coordinates and tags differ");
  using namespace svg_detail;
  const std::set<std::string> distinct(tags.begin(), tags.end());
  const std::vector<std::string> sorted(distinct.begin(), distinct.end());
  const auto& palette = categorical_palette(spec.palette);
  auto color_of = [&](const std::string& tag) {
    const auto idx = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), tag) - sorted.begin());
    return to_hex(palette[idx % palette.size()]);
  };

  const Axes axes(coords, spec);
  std::string out;
  open_document(out, spec, axes);
  for (std::size_t i = 0; i < coords.size(); ++i)
    circle(out, axes.px(coords[i].x), axes.py(coords[i].y), spec.point_radius, color_of(tags[i]));
  std::vector<LegendEntry> entries;
  for (const auto& t : sorted) entries.push_back({t.empty() ? "(untagged)" : t, color_of(t)});
  legend(out, spec, entries);
  out += "</svg>\n";
  return out;
}

}  // namespace eapr
