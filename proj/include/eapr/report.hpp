#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eapr/serialize.hpp"

namespace eapr {

struct FeatureLoading {
  FeatureName name;
  double z1 = 0.0;
  double z2 = 0.0;

  bool operator==(const FeatureLoading&) const = default;
};

/// Footprint metrics as published in the report. The `_normalized` areas are
/// divided by the area of the hull around all instances.
struct FootprintSummary {
  std::string algorithm;
  double area_good = 0.0;
  double area_net = 0.0;
  double area_good_normalized = 0.0;
  double area_net_normalized = 0.0;
  double purity = 0.0;
  double density = 0.0;
  bool degenerate = false;

  bool operator==(const FootprintSummary&) const = default;
};

struct RepeatOutcome {
  FeatureSubset subset;
  double accuracy = 0.0;

  bool operator==(const RepeatOutcome&) const = default;
};

struct AnalysisReport {
  std::vector<std::string> algorithms;
  std::size_t instance_count = 0;
  std::vector<FeatureLoading> loadings;  // retained features, layout of the projection matrix
  std::vector<FeatureName> dropped_features;
  std::vector<double> eigenvalues;
  std::vector<double> explained_variance;  // per component
  double explained_variance_2d = 0.0;
  std::vector<FootprintSummary> footprints;
  // overlap[i][j] for algorithms i, j; absent when either footprint is degenerate.
  std::vector<std::vector<std::optional<double>>> overlap;
  SelectorMetrics cross_validated;
  SelectorMetrics training;
  std::vector<RepeatOutcome> selection_repeats;
  std::map<FeatureName, std::size_t> selection_frequency;
  FeatureSubset selected;
  std::map<std::string, std::string> config;
  std::string seed;
  std::string input_digest;

  bool operator==(const AnalysisReport&) const = default;
};

/// Rounds to 6 significant digits; the report's fixed float format.
inline double round_significant(double v) {
  if (v == 0.0 || !std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

/// Lists every completeness rule the report breaks.
inline std::vector<std::string> report_violations(const AnalysisReport& r) {
  std::vector<std::string> out;
  auto check_once = [&](const std::string& what, const std::vector<std::string>& names) {
    std::map<std::string, int> count;
    for (const auto& n : names) ++count[n];
    for (const auto& a : r.algorithms)
      if (count[a] != 1) out.push_back(what + " must list algorithm '" + a + "' exactly once");
    for (const auto& [n, c] : count)
      if (std::find(r.algorithms.begin(), r.algorithms.end(), n) == r.algorithms.end())
        out.push_back(what + " lists unknown algorithm '" + n + "'");
  };
  std::vector<std::string> names;
  for (const auto& f : r.footprints) names.push_back(f.algorithm);
  check_once("footprints", names);
  names.clear();
  for (const auto& m : r.cross_validated.per_algorithm) names.push_back(m.algorithm);
  check_once("cross-validated metrics", names);
  names.clear();
  for (const auto& m : r.training.per_algorithm) names.push_back(m.algorithm);
  check_once("training metrics", names);
  if (r.overlap.size() != r.algorithms.size()) out.push_back("overlap matrix has the wrong number of rows");
  for (const auto& row : r.overlap)
    if (row.size() != r.algorithms.size()) out.push_back("overlap matrix has a row of the wrong length");
  return out;
}

inline Json to_json_value(const AnalysisReport& r) {
  Json loadings = Json::array();
  for (const auto& l : r.loadings) loadings.push_back({{"feature", l.name}, {"z1", l.z1}, {"z2", l.z2}});
  Json footprints = Json::array();
  for (const auto& f : r.footprints)
    footprints.push_back({{"algorithm", f.algorithm},
                          {"area_good", f.area_good},
                          {"area_net", f.area_net},
                          {"area_good_normalized", f.area_good_normalized},
                          {"area_net_normalized", f.area_net_normalized},
                          {"purity", f.purity},
                          {"density", f.density},
                          {"degenerate", f.degenerate}});
  Json overlap = Json::array();
  for (const auto& row : r.overlap) {
    Json jr = Json::array();
    for (const auto& v : row) jr.push_back(json_detail::optional_to_json(v));
    overlap.push_back(std::move(jr));
  }
  Json repeats = Json::array();
  for (const auto& rep : r.selection_repeats) repeats.push_back({{"features", rep.subset}, {"accuracy", rep.accuracy}});

  return {{"algorithms", r.algorithms},
          {"instance_count", r.instance_count},
          {"projection",
           {{"loadings", loadings},
            {"dropped_features", r.dropped_features},
            {"eigenvalues", r.eigenvalues},
            {"explained_variance", r.explained_variance},
            {"explained_variance_2d", r.explained_variance_2d}}},
          {"footprints", footprints},
          {"overlap", {{"algorithms", r.algorithms}, {"values", overlap}}},
          {"selector", {{"cross_validated", r.cross_validated}, {"training", r.training}}},
          {"feature_selection",
           {{"selected", r.selected}, {"repeats", repeats}, {"frequency", r.selection_frequency}}},
          {"provenance", {{"config", r.config}, {"seed", r.seed}, {"input_digest", r.input_digest}}}};
}

inline AnalysisReport from_json_value(const Json& j) {
  AnalysisReport r;
  r.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  r.instance_count = j.at("instance_count").get<std::size_t>();
  const auto& proj = j.at("projection");
  for (const auto& l : proj.at("loadings"))
    r.loadings.push_back({l.at("feature").get<std::string>(), l.at("z1").get<double>(), l.at("z2").get<double>()});
  r.dropped_features = proj.at("dropped_features").get<std::vector<FeatureName>>();
  r.eigenvalues = proj.at("eigenvalues").get<std::vector<double>>();
  r.explained_variance = proj.at("explained_variance").get<std::vector<double>>();
  r.explained_variance_2d = proj.at("explained_variance_2d").get<double>();
  for (const auto& f : j.at("footprints"))
    r.footprints.push_back({f.at("algorithm").get<std::string>(), f.at("area_good").get<double>(),
                            f.at("area_net").get<double>(), f.at("area_good_normalized").get<double>(),
                            f.at("area_net_normalized").get<double>(), f.at("purity").get<double>(),
                            f.at("density").get<double>(), f.at("degenerate").get<bool>()});
  for (const auto& row : j.at("overlap").at("values")) {
    std::vector<std::optional<double>> out;
    for (const auto& v : row) out.push_back(json_detail::optional_from_json<double>(v));
    r.overlap.push_back(std::move(out));
  }
  r.cross_validated = j.at("selector").at("cross_validated").get<SelectorMetrics>();
  r.training = j.at("selector").at("training").get<SelectorMetrics>();
  const auto& fs = j.at("feature_selection");
  r.selected = fs.at("selected").get<FeatureSubset>();
  for (const auto& rep : fs.at("repeats"))
    r.selection_repeats.push_back({rep.at("features").get<FeatureSubset>(), rep.at("accuracy").get<double>()});
  r.selection_frequency = fs.at("frequency").get<std::map<FeatureName, std::size_t>>();
  const auto& prov = j.at("provenance");
  r.config = prov.at("config").get<std::map<std::string, std::string>>();
  r.seed = prov.at("seed").get<std::string>();
  r.input_digest = prov.at("input_digest").get<std::string>();
  return r;
}

namespace json_detail {

inline void round_floats(Json& j) {
  if (j.is_number_float()) {
    j = round_significant(j.get<double>());
  } else if (j.is_structured()) {
    for (auto& child : j) round_floats(child);
  }
}

}  // namespace json_detail

/// Canonical text of a report: sorted keys, two-space indent, floats at 6
/// significant digits. Refuses reports that break completeness rules.
inline std::string report_to_string(const AnalysisReport& r) {
  const auto violations = report_violations(r);
  if (!violations.empty()) throw Error(ErrorCode::kInvariantViolation, "report rejected: " + violations.front());
  Json j = to_json_value(r);
  json_detail::round_floats(j);
  return j.dump(2) + "\n";
}

inline void write_report(const AnalysisReport& r, const std::filesystem::path& path) {
  const std::string text = report_to_string(r);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "failed writing '" + path.string() + "'");
}

inline AnalysisReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path.string() + "'");
  try {
    return from_json_value(Json::parse(in));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kIoFailure, "malformed report '" + path.string() + "': " + e.what());
  }
}

}  // namespace eapr
