#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eapr/classify.hpp"
#include "eapr/config.hpp"
#include "eapr/feature_select.hpp"
#include "eapr/footprint.hpp"
#include "eapr/ingest.hpp"
#include "eapr/pca.hpp"
#include "eapr/report.hpp"
#include "eapr/serialize.hpp"
#include "eapr/svg.hpp"

// Stage orchestration. Each stage reads its predecessors' files from the
// output directory and writes its own, so a staged run and a full pipeline
// run execute the same code on the same bytes.
//
//   ingest           input CSV          -> table.json
//   select-features  table.json         -> features.json
//   project          features.json      -> pca_model.json, coordinates.json
//   footprint        coordinates.json   -> footprints.json
//   classify         coordinates.json   -> models.json, svm_<algorithm>.json, classification.json
//   plot             all of the above   -> footprint_<algorithm>.svg, feature_<name>.svg,
//                                          datasets.svg, report.json

namespace eapr {

namespace fs = std::filesystem;

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {"ingest", "select-features", "project",
                                                 "footprint", "classify", "plot"};
  return names;
}

/// Short error tag printed by the command line tool.
inline const char* error_tag(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIoFailure: return "E_IO";
    case ErrorCode::kModel: return "E_MODEL";
    case ErrorCode::kStage: return "E_STAGE";
    case ErrorCode::kAllFeaturesDropped:
    case ErrorCode::kDegenerateLabels:
    case ErrorCode::kNonFiniteInput:
    case ErrorCode::kConvergenceFailure:
    case ErrorCode::kFeatureMismatch:
    case ErrorCode::kSingleClassLabels:
    case ErrorCode::kTooFewInstances:
    case ErrorCode::kDegenerateFootprint:
    case ErrorCode::kEmptyInput:
      return "E_DEGENERATE";
    default:
      return "E_PARSE";
  }
}

/// File-name-safe form of an algorithm or feature name.
inline std::string safe_file_name(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out.empty() ? "_" : out;
}

namespace stage_detail {

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "failed writing '" + path.string() + "'");
}

inline void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

/// Loads a predecessor's output; a missing file names the stage to run first.
inline Json require(const fs::path& dir, const std::string& file, const std::string& producer) {
  const fs::path path = dir / file;
  if (!fs::exists(path)) throw Error(ErrorCode::kStage, producer + " (missing " + path.string() + ")");
  try {
    return Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kIoFailure, "malformed '" + path.string() + "': " + e.what());
  }
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void ensure_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(ErrorCode::kIoFailure, "cannot create output directory '" + dir.string() + "'");
}

/// Algorithm column indices ordered by algorithm name.
inline std::vector<std::size_t> algorithms_by_name(const InstanceTable& table) {
  std::vector<std::size_t> order(table.algorithm_names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return table.algorithm_names[a] < table.algorithm_names[b]; });
  return order;
}

inline InstanceTable load_table(const fs::path& dir) {
  return require(dir, "table.json", "ingest").at("table").get<InstanceTable>();
}

inline std::vector<Point> load_coordinates(const fs::path& dir) {
  return require(dir, "coordinates.json", "project").at("points").get<std::vector<Point>>();
}

}  // namespace stage_detail

/// Majority vote over repeat winners: features chosen in more than half of
/// the repeats, trimmed or topped up to [min_k, max_k] by selection
/// frequency (ties broken by name).
inline FeatureSubset vote_features(const std::vector<FeatureSubset>& winners, std::size_t min_k, std::size_t max_k) {
  std::map<FeatureName, std::size_t> freq;
  for (const auto& w : winners)
    for (const auto& f : w.names()) ++freq[f];
  std::vector<std::pair<FeatureName, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<FeatureName> chosen;
  for (const auto& [name, count] : ranked)
    if (2 * count > winners.size()) chosen.push_back(name);
  if (chosen.size() > max_k) chosen.resize(max_k);
  for (std::size_t i = chosen.size(); i < std::min(min_k, ranked.size()); ++i) chosen.push_back(ranked[i].first);
  return FeatureSubset(std::move(chosen));
}

inline void stage_ingest(const PipelineConfig& cfg) {
  using namespace stage_detail;
  const fs::path out(cfg.output);
  if (!fs::exists(cfg.input)) throw Error(ErrorCode::kIoFailure, "input '" + cfg.input + "' does not exist");
  const std::string text = read_file(cfg.input);
  InstanceTable table = parse_instance_table(text, cfg.schema);
  if (cfg.schema.group_column) table = aggregate_rows(table);
  const auto violations = validate_table(table);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorCode::kMalformedCsv, "invalid table: " + v.rule +
                                              (v.row ? " at row " + std::to_string(*v.row + 1) : std::string()) +
                                              (v.column.empty() ? std::string() : " column '" + v.column + "'"));
  }
  if (table.algorithm_names.empty()) throw Error(ErrorCode::kMalformedCsv, "input has no outcome columns");
  ensure_output(out);
  write_json(out / "table.json", {{"input_digest", hex64(fnv1a64(text))}, {"table", table}});
}

inline void stage_select_features(const PipelineConfig& cfg) {
  using namespace stage_detail;
  const fs::path out(cfg.output);
  const InstanceTable table = load_table(out);
  GaConfig ga = cfg.ga;
  const std::size_t n = table.feature_names.size();
  if (n < ga.min_k)
    throw Error(ErrorCode::kAllFeaturesDropped, "table has " + std::to_string(n) + " features, fewer than ga.min_k");
  ga.max_k = std::min(ga.max_k, n);
  check_ga_config(ga, n);

  const std::uint64_t stage_seed = derive_seed(cfg.seed, "select-features");
  Json repeats = Json::array();
  std::vector<FeatureSubset> winners;
  std::map<FeatureName, std::size_t> frequency;
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    ga.seed = derive_seed(stage_seed, r);
    const SelectionResult result = run_ga(table, ga);
    Json history = Json::array();
    for (const auto& h : result.history) history.push_back(h.mean_cv_accuracy);
    repeats.push_back({{"seed", std::to_string(ga.seed)},
                       {"features", result.best},
                       {"accuracy", result.best_fitness.mean_cv_accuracy},
                       {"history", history}});
    winners.push_back(result.best);
    for (const auto& f : result.best.names()) ++frequency[f];
  }
  const FeatureSubset selected = vote_features(winners, ga.min_k, ga.max_k);
  write_json(out / "features.json", {{"selected", selected}, {"repeats", repeats}, {"frequency", frequency}});
}

inline void stage_project(const PipelineConfig& cfg) {
  using namespace stage_detail;
  const fs::path out(cfg.output);
  const Json features = require(out, "features.json", "select-features");
  const InstanceTable table = load_table(out);
  const auto selected = features.at("selected").get<FeatureSubset>();
  const PcaModel model = fit_pca(table, selected);
  const Coordinates2D coords = transform(model, table, selected);
  std::vector<std::string> ids;
  for (const auto& r : table.rows) ids.push_back(r.instance_id);
  write_json(out / "pca_model.json", model);
  write_json(out / "coordinates.json", {{"ids", ids}, {"points", coords}});
}

inline void stage_footprint(const PipelineConfig& cfg) {
  using namespace stage_detail;
  const fs::path out(cfg.output);
  const auto coords = load_coordinates(out);
  const InstanceTable table = load_table(out);
  Json list = Json::array();
  for (std::size_t a : algorithms_by_name(table))
    list.push_back(compute_footprint(coords, table.outcomes_of(a), table.algorithm_names[a]));
  write_json(out / "footprints.json",
             {{"footprints", list}, {"all_instances_area", polygon_area(convex_hull(coords))}});
}

inline void stage_classify(const PipelineConfig& cfg) {
  using namespace stage_detail;
  const fs::path out(cfg.output);
  const auto coords = load_coordinates(out);
  const InstanceTable table = load_table(out);
  const std::uint64_t stage_seed = derive_seed(cfg.seed, "classify");

  std::vector<AlgorithmMetrics> cv, training;
  Json index = Json::array();
  for (std::size_t a : algorithms_by_name(table)) {
    const std::string& name = table.algorithm_names[a];
    const auto bin = to_binary_labels(table.outcomes_of(a));
    std::vector<Point> x;
    for (std::size_t r : bin.rows) x.push_back(coords[r]);
    SvmConfig svm = cfg.svm;
    svm.seed = derive_seed(stage_seed, name);

    SvmModel model = x.empty() ? SvmModel::constant(-1) : train_or_constant(x, bin.labels, svm);
    std::vector<int> fitted;
    for (const auto& p : x) fitted.push_back(predict(model, p).label);
    training.push_back({name, confusion_metrics(fitted, bin.labels)});

    const std::size_t folds = std::min(cfg.classify_folds, x.size());
    cv.push_back({name, folds >= 2 ? cross_validate(x, bin.labels, folds, svm) : BinaryMetrics{}});

    const std::string file = "svm_" + safe_file_name(name) + ".json";
    write_json(out / file, model);
    index.push_back({{"algorithm", name}, {"file", file}});
  }
  write_json(out / "models.json",
             {{"models", index}, {"pca_model", "pca_model.json"}, {"input_features", table.feature_names}});
  write_json(out / "classification.json",
             {{"cross_validated", aggregate_metrics(std::move(cv))}, {"training", aggregate_metrics(std::move(training))}});
}

inline void stage_plot(const PipelineConfig& cfg) {
  using namespace stage_detail;
  const fs::path out(cfg.output);
  const Json fp_json = require(out, "footprints.json", "footprint");
  const Json cls_json = require(out, "classification.json", "classify");
  const Json table_json = require(out, "table.json", "ingest");
  const Json features_json = require(out, "features.json", "select-features");
  const PcaModel model = require(out, "pca_model.json", "project").get<PcaModel>();
  const auto coords = load_coordinates(out);
  const auto table = table_json.at("table").get<InstanceTable>();
  const auto footprints = fp_json.at("footprints").get<std::vector<Footprint>>();
  const double all_area = fp_json.at("all_instances_area").get<double>();

  for (const auto& f : footprints) {
    const auto labels = table.outcomes_of(*table.algorithm_index(f.algorithm));
    const FootprintHulls hulls{f.good_hull, convex_intersection(f.good_hull, f.bad_hull)};
    write_file(out / ("footprint_" + safe_file_name(f.algorithm) + ".svg"),
               render_footprint_svg(coords, labels, hulls, cfg.plot, f.algorithm));
  }
  for (const auto& name : model.scaling.features) {
    const std::size_t c = *table.feature_index(name);
    std::vector<double> raw;
    for (const auto& r : table.rows) raw.push_back(r.features[c]);
    const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
    write_file(out / ("feature_" + safe_file_name(name) + ".svg"),
               render_feature_svg(coords, minmax_normalize(raw), cfg.plot, name, *lo, *hi));
  }
  std::vector<std::string> tags;
  for (const auto& r : table.rows) tags.push_back(r.dataset_tag);
  write_file(out / "datasets.svg", render_dataset_svg(coords, tags, cfg.plot));

  AnalysisReport report;
  for (std::size_t a : algorithms_by_name(table)) report.algorithms.push_back(table.algorithm_names[a]);
  report.instance_count = table.rows.size();
  for (std::size_t k = 0; k < model.dimension(); ++k)
    report.loadings.push_back({model.scaling.features[k], model.loadings[k][0], model.loadings[k][1]});
  report.dropped_features = model.scaling.dropped_features;
  report.eigenvalues = model.eigenvalues;
  report.explained_variance = explained_variance(model);
  report.explained_variance_2d = model.explained_variance_2d;
  for (const auto& f : footprints)
    report.footprints.push_back({f.algorithm, f.area_good, f.area_net, all_area > 0 ? f.area_good / all_area : 0.0,
                                 all_area > 0 ? f.area_net / all_area : 0.0, f.purity, f.density, f.degenerate()});
  for (const auto& a : footprints) {
    std::vector<std::optional<double>> row;
    for (const auto& b : footprints) {
      if (a.degenerate() || b.degenerate() || a.area_good <= 0 || b.area_good <= 0) row.push_back(std::nullopt);
      else row.push_back(footprint_overlap(a, b));
    }
    report.overlap.push_back(std::move(row));
  }
  report.cross_validated = cls_json.at("cross_validated").get<SelectorMetrics>();
  report.training = cls_json.at("training").get<SelectorMetrics>();
  report.selected = features_json.at("selected").get<FeatureSubset>();
  for (const auto& rep : features_json.at("repeats"))
    report.selection_repeats.push_back({rep.at("features").get<FeatureSubset>(), rep.at("accuracy").get<double>()});
  report.selection_frequency = features_json.at("frequency").get<std::map<FeatureName, std::size_t>>();
  report.config = canonical_config(cfg);
  report.seed = std::to_string(cfg.seed);
  report.input_digest = table_json.at("input_digest").get<std::string>();
  write_report(report, out / "report.json");
}

/// Runs one named stage.
inline void run_stage(const std::string& stage, const PipelineConfig& cfg) {
  check_config(cfg);
  if (stage == "ingest") stage_ingest(cfg);
  else if (stage == "select-features") stage_select_features(cfg);
  else if (stage == "project") stage_project(cfg);
  else if (stage == "footprint") stage_footprint(cfg);
  else if (stage == "classify") stage_classify(cfg);
  else if (stage == "plot") stage_plot(cfg);
  else throw Error(ErrorCode::kConfig, "unknown stage '" + stage + "'");
}

inline void run_pipeline(const PipelineConfig& cfg) {
  for (const auto& stage : stage_names()) run_stage(stage, cfg);
}

/// Loaded selector: the projection plus one model per algorithm.
struct SelectorBundle {
  PcaModel pca;
  std::map<std::string, SvmModel> models;
  std::vector<FeatureName> input_features;  // every column of the training table
};

inline SelectorBundle load_selector(const fs::path& dir) {
  auto load = [&](const std::string& file) {
    const fs::path path = dir / file;
    if (!fs::exists(path)) throw Error(ErrorCode::kModel, "missing model file '" + path.string() + "'");
    try {
      return Json::parse(stage_detail::read_file(path));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kModel, "corrupt model file '" + path.string() + "': " + e.what());
    }
  };
  try {
    SelectorBundle b;
    const Json index = load("models.json");
    b.pca = load(index.at("pca_model").get<std::string>()).get<PcaModel>();
    b.input_features = index.at("input_features").get<std::vector<FeatureName>>();
    for (const auto& m : index.at("models"))
      b.models[m.at("algorithm").get<std::string>()] = load(m.at("file").get<std::string>()).get<SvmModel>();
    if (b.models.empty()) throw Error(ErrorCode::kModel, "model index lists no algorithms");
    return b;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kModel, std::string("corrupt model: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kModel) throw;
    throw Error(ErrorCode::kModel, e.what());
  }
}

/// Reads a feature vector as two CSV lines (names, then values) and ranks
/// the algorithms for it. Every retained model feature must be present.
/// Training-table columns outside the selected subset are ignored; names
/// never seen in training are rejected.
inline std::vector<RankedAlgorithm> rank_for_input(const SelectorBundle& bundle, std::string_view input) {
  const auto rows = csv::parse(input);
  if (rows.size() != 2 || rows[0].size() != rows[1].size())
    throw Error(ErrorCode::kModel, "expected a header line and one value line of equal width");
  std::map<std::string, double> given;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    const std::string name(detail::trim(rows[0][i]));
    const auto& known_names = bundle.input_features;
    const bool known = std::find(known_names.begin(), known_names.end(), name) != known_names.end();
    if (!known) throw Error(ErrorCode::kModel, "feature '" + name + "' is unknown to the model");
    auto v = detail::parse_real(rows[1][i]);
    if (!v || !std::isfinite(*v)) throw Error(ErrorCode::kModel, "feature '" + name + "' has a non-numeric value");
    given[name] = *v;
  }
  std::vector<double> raw;
  for (const auto& name : bundle.pca.scaling.features) {
    auto it = given.find(name);
    if (it == given.end()) throw Error(ErrorCode::kModel, "feature '" + name + "' is missing from the input");
    raw.push_back(it->second);
  }
  return select_aprt(bundle.models, project_point(bundle.pca, raw));
}

inline void print_ranking(std::ostream& out, const std::vector<RankedAlgorithm>& ranking) {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", ranking[i].decision);
    out << (i + 1) << ',' << ranking[i].algorithm << ',' << buf << '\n';
  }
}

}  // namespace eapr
