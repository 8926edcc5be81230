// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Criterion 7 needs external data and is skipped unless
// EAPR_FULL_DATA names a CSV export.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "eapr/eapr.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/svm_checks.hpp"

using namespace eapr;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  enum Kind { kPass, kFail, kSkip } kind;
  std::string detail;
};

Verdict pass(std::string d) { return {Verdict::kPass, std::move(d)}; }
Verdict fail(std::string d) { return {Verdict::kFail, std::move(d)}; }

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int shell(const std::string& cmd, std::string* output = nullptr) {
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf;
  std::size_t n;
  std::string out;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  if (output) *output = std::move(out);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eapr_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<Point> uniform_points(std::mt19937_64& gen, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {u(gen), u(gen)};
  return pts;
}

struct Box {
  double x0, x1, y0, y1;
};

Box bounds(const std::vector<Point>& pts) {
  Box b{pts[0].x, pts[0].x, pts[0].y, pts[0].y};
  for (const auto& p : pts) {
    b.x0 = std::min(b.x0, p.x);
    b.x1 = std::max(b.x1, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

Verdict geometry() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(1);

  int hull_mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto pts = uniform_points(gen, 30, -1, 1);
    auto mine = convex_hull(pts).vertices;
    std::sort(mine.begin(), mine.end());
    hull_mismatches += mine != oracle::brute_force_extreme_points(pts);
  }

  double worst_area = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = uniform_points(gen, 12, -3, 5);
    const auto hull = convex_hull(pts);
    const Box b = bounds(hull.vertices);
    const double mc = oracle::monte_carlo_area(
        [&](const Point& p) { return oracle::point_in_polygon(hull.vertices, p); }, b.x0, b.x1, b.y0, b.y1,
        1'000'000, 100 + trial);
    worst_area = std::max(worst_area, std::abs(polygon_area(hull) - mc) / mc);
  }

  double worst_cut = 0;
  int cut_trials = 0;
  for (int trial = 0; cut_trials < 50; ++trial) {
    const auto a = convex_hull(uniform_points(gen, 10, 0, 2));
    const auto b = convex_hull(uniform_points(gen, 10, 0.5, 2.5));
    const Box ba = bounds(a.vertices), bb = bounds(b.vertices);
    const Box box{std::max(ba.x0, bb.x0), std::min(ba.x1, bb.x1), std::max(ba.y0, bb.y0), std::min(ba.y1, bb.y1)};
    if (box.x1 <= box.x0 || box.y1 <= box.y0) continue;
    const double mc = oracle::monte_carlo_area(
        [&](const Point& p) {
          return oracle::point_in_polygon(a.vertices, p) && oracle::point_in_polygon(b.vertices, p);
        },
        box.x0, box.x1, box.y0, box.y1, 1'000'000, 900 + trial);
    // Overlaps covering under 5% of the shared box are too small for a 1%
    // Monte Carlo estimate; draw another pair.
    if (mc < 0.05 * (box.x1 - box.x0) * (box.y1 - box.y0)) continue;
    worst_cut = std::max(worst_cut, std::abs(polygon_area(convex_intersection(a, b)) - mc) / mc);
    ++cut_trials;
  }

  const double elapsed = seconds_since(t0);
  const std::string detail = fmt("hull mismatches %d/500, worst area err %.3f%%, worst intersection err %.3f%%, %.1f s",
                                 hull_mismatches, 100 * worst_area, 100 * worst_cut, elapsed);
  const bool ok = hull_mismatches == 0 && worst_area < 0.01 && worst_cut < 0.01 && elapsed < 60;
  return ok ? pass(detail) : fail(detail);
}

Verdict pca() {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst_root = 0, worst_trace = 0;
  int unresolved = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 5;  // 2..6
    std::vector<std::vector<double>> rows(20 + trial % 7, std::vector<double>(m));
    for (auto& r : rows)
      for (std::size_t j = 0; j < m; ++j) r[j] = normal(gen) * (1.0 + j) + (j ? 0.5 * r[0] : 0.0);
    const auto cov = oracle::covariance(rows);
    double trace = 0;
    for (std::size_t i = 0; i < m; ++i) trace += cov[i][i];
    Matrix x(rows.size(), m);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t j = 0; j < m; ++j) x(r, j) = rows[r][j];
    const auto eig = fit_pca(x);
    const auto roots = oracle::char_poly_roots(cov);
    if (roots.size() != m) {
      ++unresolved;
      continue;
    }
    for (std::size_t k = 0; k < m; ++k) worst_root = std::max(worst_root, std::abs(eig.eigenvalues[k] - roots[k]));
    worst_trace = std::max(worst_trace, std::abs(oracle::pairwise_sum(eig.eigenvalues) - trace));
  }

  InstanceTable line;
  line.feature_names = {"x", "y"};
  for (int i = 0; i < 10; ++i) line.rows.push_back({"r" + std::to_string(i), "", {0.5 * i, 3.0 - 2.0 * i}, {}, ""});
  const double ev2 = fit_pca(line, FeatureSubset{"x", "y"}).explained_variance_2d;

  const std::string detail = fmt("worst |lambda - root| %.2e, worst |sum - trace| %.2e, collinear ev2d %.17g%s",
                                 worst_root, worst_trace, ev2, unresolved ? " (oracle unresolved)" : "");
  const bool ok = unresolved == 0 && worst_root <= 1e-8 && worst_trace <= 1e-9 && ev2 == 1.0;
  return ok ? pass(detail) : fail(detail);
}

GaConfig planted_ga(std::uint64_t seed) {
  GaConfig c;
  c.population_size = 30;
  c.generations = 25;
  c.min_k = 2;
  c.max_k = 6;
  c.seed = seed;
  return c;
}

Verdict planted_selection() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = fixtures::planted_table();
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = run_ga(table, planted_ga(seed));
    hits += r.best.contains("f07") && r.best.contains("f13");
  }

  // Exhaustive enumeration of every 2-subset under the fold seed of run 1.
  const GaConfig c = planted_ga(1);
  const std::uint64_t fold_seed = derive_seed(c.seed, "fitness");
  const FeatureSubset planted{"f07", "f13"};
  double planted_fitness = 0, best_other = 0;
  FeatureSubset runner_up;
  for (std::size_t i = 0; i < table.feature_names.size(); ++i)
    for (std::size_t j = i + 1; j < table.feature_names.size(); ++j) {
      const FeatureSubset s{table.feature_names[i], table.feature_names[j]};
      const double f = evaluate_subset(table, s, c, fold_seed).mean_cv_accuracy;
      if (s == planted) {
        planted_fitness = f;
      } else if (f > best_other) {
        best_other = f;
        runner_up = s;
      }
    }

  const double elapsed = seconds_since(t0);
  const std::string detail =
      fmt("recovered in %d/10 seeds, planted pair %.4f vs best other pair %.4f (%s), %.1f s", hits, planted_fitness,
          best_other, (runner_up.names().empty() ? "" : runner_up.names()[0] + "," + runner_up.names()[1]).c_str(),
          elapsed);
  const bool ok = hits >= 8 && planted_fitness > best_other && elapsed < 300;
  return ok ? pass(detail) : fail(detail);
}

Verdict svm() {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int models = 0, kkt_failures = 0, separable_failures = 0;
  double worst_decision = 0;
  std::string first_violation;

  auto check = [&](const std::vector<Point>& x, const std::vector<int>& y, const SvmConfig& c, bool separable) {
    const SvmModel m = train_svm(x, y, c);
    ++models;
    const auto v = svm_checks::kkt_violation(m, x, y, c.tolerance);
    if (!v.empty()) {
      ++kkt_failures;
      if (first_violation.empty()) first_violation = v;
    }
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto p = predict(m, x[i]);
      correct += p.label == y[i];
      worst_decision = std::max(worst_decision, std::abs(p.decision - svm_checks::direct_decision(m, x[i])));
    }
    for (int k = 0; k < 20; ++k) {
      const Point q{3 * u(gen), 3 * u(gen)};
      worst_decision = std::max(worst_decision, std::abs(predict(m, q).decision - svm_checks::direct_decision(m, q)));
    }
    if (separable && correct != x.size()) ++separable_failures;
  };

  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 20 + 5 * (trial % 8);
    const double gap = trial % 3 == 0 ? 3.0 : trial % 3 == 1 ? 1.0 : 0.2;
    std::vector<Point> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < n; ++i) {
      const int cls = i % 2 ? 1 : -1;
      x.push_back({cls * gap + 0.5 * normal(gen), cls * gap + 0.5 * normal(gen)});
      y.push_back(cls);
    }
    // Blobs 3 sigma-units apart on each axis are separable with certainty
    // only when no sample falls across; verify rather than assume.
    bool separable = true;
    for (std::size_t i = 0; i < n; ++i) separable &= y[i] * (x[i].x + x[i].y) > 0.5;
    for (Kernel k : {Kernel::kLinear, Kernel::kRbf})
      for (double C : {0.1, 1.0, 100.0}) {
        SvmConfig c;
        c.kernel = k;
        c.C = C;
        c.seed = static_cast<std::uint64_t>(trial);
        check(x, y, c, separable && gap == 3.0 && C >= 1.0);
      }
  }
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> x;
    std::vector<int> y;
    while (x.size() < 60) {
      const double a = u(gen), b = u(gen);
      x.push_back({a, b});
      y.push_back(a * b > 0 ? 1 : -1);
    }
    SvmConfig c;
    c.C = 10.0;
    c.gamma = 2.0;
    check(x, y, c, false);
  }

  const std::string detail = fmt("%d models, KKT failures %d%s, separable fits below 1.0: %d, worst decision err %.2e",
                                 models, kkt_failures, first_violation.empty() ? "" : (" (" + first_violation + ")").c_str(),
                                 separable_failures, worst_decision);
  const bool ok = kkt_failures == 0 && separable_failures == 0 && worst_decision <= 1e-8;
  return ok ? pass(detail) : fail(detail);
}

Verdict selector() {
  const fs::path dir = scratch("selector");
  std::ofstream(dir / "two.csv") << fixtures::to_csv(fixtures::two_region_table());
  std::string out;
  const std::string cli = EAPR_CLI_PATH;
  const int status = shell(cli + " pipeline -i " + (dir / "two.csv").string() + " -o " + (dir / "model").string() +
                               " --set ga.min_k=2 --set ga.max_k=3 --seed 5",
                           &out);
  if (status != 0) return fail("pipeline failed: " + out);

  int correct = 0, errors = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const double x = -0.95 + 0.1 * i, y = -0.95 + 0.1 * j;
      const fs::path q = dir / "q.csv";
      std::ofstream(q) << "x,y,noise\n" << fmt("%.17g,%.17g,0", x, y) << "\n";
      if (shell(cli + " select " + (dir / "model").string() + " < " + q.string(), &out) != 0) {
        ++errors;
        continue;
      }
      const std::string expected = x < 0 ? "1,A," : "1,B,";
      correct += out.rfind(expected, 0) == 0;
    }
  fs::remove_all(dir);
  const double rate = correct / 400.0;
  const std::string detail = fmt("true best ranked first on %d/400 grid points (%.1f%%), %d select errors", correct,
                                 100 * rate, errors);
  return rate >= 0.9 && errors == 0 ? pass(detail) : fail(detail);
}

Verdict determinism() {
  const std::string cli = EAPR_CLI_PATH;
  const fs::path data = EAPR_DATA_DIR;
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string args = " -c " + (data / "fixture60.conf").string() + " -i " + (data / "fixture60.csv").string();
  std::string out;
  if (shell(cli + " pipeline" + args + " -o " + a.string() + " --set ga.threads=1", &out) != 0)
    return fail("first run failed: " + out);
  if (shell(cli + " pipeline" + args + " -o " + b.string() + " --set ga.threads=8", &out) != 0)
    return fail("second run failed: " + out);

  int compared = 0, differing = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const auto name = e.path().filename();
    if (name != "report.json" && e.path().extension() != ".svg") continue;
    ++compared;
    if (!fs::exists(b / name) || slurp(a / name) != slurp(b / name)) ++differing;
  }
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string detail = fmt("%d artifacts compared (report.json + SVGs), %d differ", compared, differing);
  return compared >= 5 && differing == 0 ? pass(detail) : fail(detail);
}

Verdict full_scale() {
  const char* path = std::getenv("EAPR_FULL_DATA");
  if (!path || !*path)
    return {Verdict::kSkip, "set EAPR_FULL_DATA to a CSV export (dataset column with IntroClassJava/Defects4J) to run"};
  const fs::path dir = scratch("full");
  PipelineConfig c;
  c.input = path;
  c.output = dir.string();
  if (const char* conf = std::getenv("EAPR_FULL_CONFIG"); conf && *conf)
    apply_config(c, parse_config_text(slurp(conf)));
  c.input = path;
  c.output = dir.string();
  run_pipeline(c);

  const auto table = Json::parse(slurp(dir / "table.json")).at("table").get<InstanceTable>();
  const auto coords = Json::parse(slurp(dir / "coordinates.json")).at("points").get<std::vector<Point>>();
  std::vector<Point> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& tag = table.rows[i].dataset_tag;
    if (tag != "IntroClassJava" && tag != "Defects4J") continue;
    x.push_back(coords[i]);
    y.push_back(tag == "IntroClassJava" ? 1 : -1);
  }
  SvmConfig svm;
  svm.kernel = Kernel::kLinear;
  const auto model = train_svm(x, y, svm);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < x.size(); ++i) ok += predict(model, x[i]).label == y[i];
  const double acc = static_cast<double>(ok) / static_cast<double>(x.size());
  const std::string detail = fmt("IntroClassJava vs Defects4J linear separation accuracy %.4f on %zu instances", acc,
                                 x.size());
  return acc >= 0.95 ? pass(detail) : fail(detail);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 geometry oracles", geometry},     {"2 pca oracles", pca},
      {"3 planted feature selection", planted_selection}, {"4 svm correctness", svm},
      {"5 selector end-to-end", selector},  {"6 pipeline determinism", determinism},
      {"7 full-scale separation", full_scale},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Verdict o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.kind == Verdict::kPass ? "PASS" : o.kind == Verdict::kFail ? "FAIL" : "SKIP";
    failures += o.kind == Verdict::kFail;
    std::cout << tag << "  " << name << ": " << o.detail << std::endl;
  }
  return failures ? 1 : 0;
}
