#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "eapr/classify.hpp"
#include "eapr/core.hpp"
#include "eapr/footprint.hpp"
#include "eapr/ingest.hpp"
#include "eapr/pca.hpp"
#include "eapr/svm.hpp"

// JSON mappings for the types that cross stage boundaries. Doubles are
// written with round-trip precision, so a value read back is bit-identical.

namespace eapr {

using Json = nlohmann::json;

namespace json_detail {

template <typename T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace json_detail

inline void to_json(Json& j, const Point& p) { j = Json::array({p.x, p.y}); }
inline void from_json(const Json& j, Point& p) {
  p.x = j.at(0).get<double>();
  p.y = j.at(1).get<double>();
}

inline void to_json(Json& j, const FeatureSubset& s) { j = s.names(); }
inline void from_json(const Json& j, FeatureSubset& s) { s = FeatureSubset(j.get<std::vector<FeatureName>>()); }

inline void to_json(Json& j, const InstanceTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json outcomes = Json::array();
    for (auto o : r.outcomes) outcomes.push_back(to_string(o));
    rows.push_back({{"id", r.instance_id}, {"dataset", r.dataset_tag}, {"features", r.features},
                    {"outcomes", outcomes}});
  }
  j = {{"feature_names", t.feature_names}, {"algorithm_names", t.algorithm_names}, {"rows", rows}};
}

inline void from_json(const Json& j, InstanceTable& t) {
  t.feature_names = j.at("feature_names").get<std::vector<FeatureName>>();
  t.algorithm_names = j.at("algorithm_names").get<std::vector<std::string>>();
  t.rows.clear();
  for (const auto& r : j.at("rows")) {
    InstanceRecord rec;
    rec.instance_id = r.at("id").get<std::string>();
    rec.dataset_tag = r.at("dataset").get<std::string>();
    rec.features = r.at("features").get<std::vector<double>>();
    for (const auto& o : r.at("outcomes")) rec.outcomes.push_back(outcome_from_string(o.get<std::string>()));
    t.rows.push_back(std::move(rec));
  }
}

inline void to_json(Json& j, const PcaModel& m) {
  Json loadings = Json::array();
  for (const auto& l : m.loadings) loadings.push_back({l[0], l[1]});
  j = {{"features", m.scaling.features},
       {"means", m.scaling.means},
       {"stds", m.scaling.stds},
       {"dropped_features", m.scaling.dropped_features},
       {"loadings", loadings},
       {"eigenvalues", m.eigenvalues},
       {"explained_variance_2d", m.explained_variance_2d}};
}

inline void from_json(const Json& j, PcaModel& m) {
  m.scaling.features = j.at("features").get<std::vector<FeatureName>>();
  m.scaling.means = j.at("means").get<std::vector<double>>();
  m.scaling.stds = j.at("stds").get<std::vector<double>>();
  m.scaling.dropped_features = j.at("dropped_features").get<std::vector<FeatureName>>();
  m.loadings.clear();
  for (const auto& l : j.at("loadings")) m.loadings.push_back({l.at(0).get<double>(), l.at(1).get<double>()});
  m.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
  m.explained_variance_2d = j.at("explained_variance_2d").get<double>();
  const std::size_t k = m.scaling.features.size();
  if (m.scaling.means.size() != k || m.scaling.stds.size() != k || m.loadings.size() != k)
    throw Error(ErrorCode::kModel, "PCA model arrays disagree in length");
}

inline void to_json(Json& j, const SvmConfig& c) {
  j = {{"kernel", to_string(c.kernel)},
       {"C", c.C},
       {"gamma", json_detail::optional_to_json(c.gamma)},
       {"tolerance", c.tolerance},
       {"max_passes", c.max_passes},
       {"seed", std::to_string(c.seed)}};
}

inline void from_json(const Json& j, SvmConfig& c) {
  c.kernel = kernel_from_string(j.at("kernel").get<std::string>());
  c.C = j.at("C").get<double>();
  c.gamma = json_detail::optional_from_json<double>(j.at("gamma"));
  c.tolerance = j.at("tolerance").get<double>();
  c.max_passes = j.at("max_passes").get<int>();
  c.seed = std::stoull(j.at("seed").get<std::string>());
}

inline void to_json(Json& j, const SvmModel& m) {
  j = {{"kernel", to_string(m.kernel)}, {"gamma", m.gamma},       {"C", m.C},
       {"support_vectors", m.support_vectors}, {"alphas", m.alphas}, {"labels", m.labels},
       {"bias", m.bias},                {"config", m.config},     {"converged", m.converged}};
}

inline void from_json(const Json& j, SvmModel& m) {
  m.kernel = kernel_from_string(j.at("kernel").get<std::string>());
  m.gamma = j.at("gamma").get<double>();
  m.C = j.at("C").get<double>();
  m.support_vectors = j.at("support_vectors").get<std::vector<Point>>();
  m.alphas = j.at("alphas").get<std::vector<double>>();
  m.labels = j.at("labels").get<std::vector<int>>();
  m.bias = j.at("bias").get<double>();
  m.config = j.at("config").get<SvmConfig>();
  m.converged = j.at("converged").get<bool>();
  if (m.alphas.size() != m.support_vectors.size() || m.labels.size() != m.support_vectors.size())
    throw Error(ErrorCode::kModel, "SVM model arrays disagree in length");
}

inline void to_json(Json& j, const BinaryMetrics& m) {
  j = {{"true_pos", m.true_pos},
       {"false_pos", m.false_pos},
       {"true_neg", m.true_neg},
       {"false_neg", m.false_neg},
       {"accuracy", m.accuracy},
       {"precision", json_detail::optional_to_json(m.precision)},
       {"recall", json_detail::optional_to_json(m.recall)}};
}

inline void from_json(const Json& j, BinaryMetrics& m) {
  m.true_pos = j.at("true_pos").get<std::size_t>();
  m.false_pos = j.at("false_pos").get<std::size_t>();
  m.true_neg = j.at("true_neg").get<std::size_t>();
  m.false_neg = j.at("false_neg").get<std::size_t>();
  m.accuracy = j.at("accuracy").get<double>();
  m.precision = json_detail::optional_from_json<double>(j.at("precision"));
  m.recall = json_detail::optional_from_json<double>(j.at("recall"));
}

inline void to_json(Json& j, const SelectorMetrics& m) {
  Json per = Json::array();
  for (const auto& a : m.per_algorithm) {
    Json e = a.metrics;
    e["algorithm"] = a.algorithm;
    per.push_back(std::move(e));
  }
  j = {{"per_algorithm", per},
       {"accuracy", m.accuracy},
       {"precision", json_detail::optional_to_json(m.precision)}};
}

inline void from_json(const Json& j, SelectorMetrics& m) {
  m.per_algorithm.clear();
  for (const auto& e : j.at("per_algorithm"))
    m.per_algorithm.push_back({e.at("algorithm").get<std::string>(), e.get<BinaryMetrics>()});
  m.accuracy = j.at("accuracy").get<double>();
  m.precision = json_detail::optional_from_json<double>(j.at("precision"));
}

inline void to_json(Json& j, const ConvexPolygon& p) { j = p.vertices; }
inline void from_json(const Json& j, ConvexPolygon& p) { p.vertices = j.get<std::vector<Point>>(); }

inline void to_json(Json& j, const Footprint& f) {
  j = {{"algorithm", f.algorithm},   {"good_hull", f.good_hull},     {"bad_hull", f.bad_hull},
       {"area_good", f.area_good},   {"area_net", f.area_net},       {"purity", f.purity},
       {"density", f.density},       {"good_inside", f.good_inside}, {"labeled_inside", f.labeled_inside}};
}

inline void from_json(const Json& j, Footprint& f) {
  f.algorithm = j.at("algorithm").get<std::string>();
  f.good_hull = j.at("good_hull").get<ConvexPolygon>();
  f.bad_hull = j.at("bad_hull").get<ConvexPolygon>();
  f.area_good = j.at("area_good").get<double>();
  f.area_net = j.at("area_net").get<double>();
  f.purity = j.at("purity").get<double>();
  f.density = j.at("density").get<double>();
  f.good_inside = j.at("good_inside").get<std::size_t>();
  f.labeled_inside = j.at("labeled_inside").get<std::size_t>();
}

}  // namespace eapr
