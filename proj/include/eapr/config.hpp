#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "eapr/feature_select.hpp"
#include "eapr/ingest.hpp"
#include "eapr/svg.hpp"
#include "eapr/svm.hpp"

namespace eapr {

struct PipelineConfig {
  std::string input;
  std::string output;
  ColumnSchema schema;
  GaConfig ga;
  SvmConfig svm;
  std::size_t classify_folds = 5;
  PlotSpec plot;
  std::size_t repeats = 10;
  std::uint64_t seed = 0;
};

using ConfigMap = std::map<std::string, std::string>;

/// Parses `key=value` lines. Blank lines and lines starting with '#' are
/// ignored; later keys override earlier ones.
inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kConfig, "config line " + std::to_string(line_no) + " has no '='");
    const auto key = detail::trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::kConfig, "config line " + std::to_string(line_no) + " has an empty key");
    out[std::string(key)] = std::string(detail::trim(line.substr(eq + 1)));
  }
  return out;
}

namespace config_detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double to_double(const std::string& key, const std::string& value) {
  auto v = detail::parse_real(value);
  if (!v || !std::isfinite(*v)) throw Error(ErrorCode::kConfig, "config key '" + key + "': not a number: '" + value + "'");
  return *v;
}

inline std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
    throw Error(ErrorCode::kConfig, "config key '" + key + "': not a non-negative integer: '" + value + "'");
  return v;
}

}  // namespace config_detail

/// Overlays `values` onto `config`. Unknown keys are an error.
inline void apply_config(PipelineConfig& c, const ConfigMap& values) {
  using namespace config_detail;
  for (const auto& [key, value] : values) {
    auto size = [&] { return static_cast<std::size_t>(to_u64(key, value)); };
    if (key == "input") c.input = value;
    else if (key == "output") c.output = value;
    else if (key == "seed") c.seed = to_u64(key, value);
    else if (key == "repeats") c.repeats = size();
    else if (key == "input.id_column") c.schema.id_column = value;
    else if (key == "input.dataset_column") c.schema.dataset_column = value.empty() ? std::nullopt : std::optional(value);
    else if (key == "input.group_column") c.schema.group_column = value.empty() ? std::nullopt : std::optional(value);
    else if (key == "input.outcome_prefix") c.schema.outcome_prefix = value;
    else if (key == "ga.population") c.ga.population_size = size();
    else if (key == "ga.generations") c.ga.generations = size();
    else if (key == "ga.crossover") c.ga.crossover_rate = to_double(key, value);
    else if (key == "ga.mutation") c.ga.mutation_rate = value == "auto" ? std::nullopt : std::optional(to_double(key, value));
    else if (key == "ga.tournament") c.ga.tournament_size = size();
    else if (key == "ga.min_k") c.ga.min_k = size();
    else if (key == "ga.max_k") c.ga.max_k = size();
    else if (key == "ga.cv_folds") c.ga.cv_folds = size();
    else if (key == "ga.threads") c.ga.threads = size();
    else if (key == "svm.kernel") c.svm.kernel = kernel_from_string(value);
    else if (key == "svm.C") c.svm.C = to_double(key, value);
    else if (key == "svm.gamma") c.svm.gamma = value == "median" ? std::nullopt : std::optional(to_double(key, value));
    else if (key == "svm.tolerance") c.svm.tolerance = to_double(key, value);
    else if (key == "svm.max_passes") c.svm.max_passes = static_cast<int>(to_u64(key, value));
    else if (key == "classify.folds") c.classify_folds = size();
    else if (key == "plot.width") c.plot.width = static_cast<int>(to_u64(key, value));
    else if (key == "plot.height") c.plot.height = static_cast<int>(to_u64(key, value));
    else if (key == "plot.margin") c.plot.margin = static_cast<int>(to_u64(key, value));
    else if (key == "plot.radius") c.plot.point_radius = to_double(key, value);
    else if (key == "plot.palette") c.plot.palette = value;
    else if (key == "plot.x_label") c.plot.x_label = value;
    else if (key == "plot.y_label") c.plot.y_label = value;
    else throw Error(ErrorCode::kConfig, "unknown config key '" + key + "'");
  }
}

inline void check_config(const PipelineConfig& c) {
  auto fail = [](const std::string& why) { throw Error(ErrorCode::kConfig, why); };
  if (c.input.empty()) fail("input path is empty");
  if (c.output.empty()) fail("output directory is empty");
  if (c.repeats < 1) fail("repeats must be at least 1");
  if (c.classify_folds < 2) fail("classify.folds must be at least 2");
  if (!(c.svm.C > 0) || !(c.svm.tolerance > 0) || c.svm.max_passes <= 0) fail("svm.C, svm.tolerance, svm.max_passes must be positive");
  if (c.svm.gamma && !(*c.svm.gamma > 0)) fail("svm.gamma must be positive");
  if (c.plot.width <= 2 * c.plot.margin || c.plot.height <= 2 * c.plot.margin) fail("plot size must exceed twice the margin");
  categorical_palette(c.plot.palette);
}

/// Every setting that influences results, in canonical text. Paths and the
/// thread count are left out so runs in different directories compare equal.
inline ConfigMap canonical_config(const PipelineConfig& c) {
  using config_detail::format_double;
  return {
      {"seed", std::to_string(c.seed)},
      {"repeats", std::to_string(c.repeats)},
      {"input.id_column", c.schema.id_column},
      {"input.dataset_column", c.schema.dataset_column.value_or("")},
      {"input.group_column", c.schema.group_column.value_or("")},
      {"input.outcome_prefix", c.schema.outcome_prefix},
      {"ga.population", std::to_string(c.ga.population_size)},
      {"ga.generations", std::to_string(c.ga.generations)},
      {"ga.crossover", format_double(c.ga.crossover_rate)},
      {"ga.mutation", c.ga.mutation_rate ? format_double(*c.ga.mutation_rate) : "auto"},
      {"ga.tournament", std::to_string(c.ga.tournament_size)},
      {"ga.min_k", std::to_string(c.ga.min_k)},
      {"ga.max_k", std::to_string(c.ga.max_k)},
      {"ga.cv_folds", std::to_string(c.ga.cv_folds)},
      {"svm.kernel", to_string(c.svm.kernel)},
      {"svm.C", format_double(c.svm.C)},
      {"svm.gamma", c.svm.gamma ? format_double(*c.svm.gamma) : "median"},
      {"svm.tolerance", format_double(c.svm.tolerance)},
      {"svm.max_passes", std::to_string(c.svm.max_passes)},
      {"classify.folds", std::to_string(c.classify_folds)},
      {"plot.width", std::to_string(c.plot.width)},
      {"plot.height", std::to_string(c.plot.height)},
      {"plot.margin", std::to_string(c.plot.margin)},
      {"plot.radius", format_double(c.plot.point_radius)},
      {"plot.palette", c.plot.palette},
      {"plot.x_label", c.plot.x_label},
      {"plot.y_label", c.plot.y_label},
  };
}

}  // namespace eapr
