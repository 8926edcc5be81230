#pragma once

// Synthetic instance tables with planted structure.

#include <cstdio>
#include <sstream>
#include <random>
#include <string>
#include <vector>

#include "eapr/core.hpp"

namespace fixtures {

using eapr::InstanceRecord;
using eapr::InstanceTable;
using eapr::Outcome;

inline std::string id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, i);
  return buf;
}

inline Outcome good_if(bool b) { return b ? Outcome::kGood : Outcome::kBad; }

/// 20 features f01..f20 of which only f07 and f13 drive the labels of three
/// algorithms; the remaining 18 are independent noise.
inline InstanceTable planted_table(std::size_t rows = 200, std::uint64_t seed = 7) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  InstanceTable t;
  for (int f = 1; f <= 20; ++f) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "f%02d", f);
    t.feature_names.push_back(buf);
  }
  t.algorithm_names = {"A", "B", "C"};
  for (std::size_t i = 0; i < rows; ++i) {
    InstanceRecord r;
    r.instance_id = id("bug", i);
    r.dataset_tag = i % 2 ? "left" : "right";
    for (int f = 0; f < 20; ++f) r.features.push_back(normal(gen));
    const double a = r.features[6], b = r.features[12];
    r.outcomes = {good_if(a + b > 0), good_if(a - b > 0.2), good_if(0.5 * a + b > -0.3)};
    t.rows.push_back(std::move(r));
  }
  return t;
}

/// Two informative features x, y and one noise feature. Algorithm A is GOOD
/// where x < 0, algorithm B where x > 0, with a small gap around x = 0.
inline InstanceTable two_region_table(std::size_t rows = 240, std::uint64_t seed = 11) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  InstanceTable t;
  t.feature_names = {"x", "y", "noise"};
  t.algorithm_names = {"A", "B"};
  for (std::size_t i = 0; i < rows;) {
    const double x = u(gen), y = u(gen), z = u(gen);
    if (std::abs(x) < 0.05) continue;
    InstanceRecord r;
    r.instance_id = id("p", i);
    r.dataset_tag = "synthetic";
    r.features = {x, y, 0.05 * z};
    r.outcomes = {good_if(x < 0), good_if(x > 0)};
    t.rows.push_back(std::move(r));
    ++i;
  }
  return t;
}

/// Table where features p and q linearly separate every algorithm's labels
/// with a wide margin, plus a constant-variance noise feature r.
inline InstanceTable separable_table(std::size_t rows = 80, std::uint64_t seed = 3) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  InstanceTable t;
  t.feature_names = {"p", "q", "r"};
  t.algorithm_names = {"X", "Y"};
  for (std::size_t i = 0; i < rows; ++i) {
    const bool cls = i % 2 == 0;
    const double shift = cls ? 3.0 : -3.0;
    InstanceRecord r;
    r.instance_id = id("s", i);
    r.dataset_tag = "synthetic";
    r.features = {shift + 0.3 * normal(gen), shift + 0.3 * normal(gen), normal(gen)};
    r.outcomes = {good_if(cls), good_if(!cls)};
    t.rows.push_back(std::move(r));
  }
  return t;
}

/// Writes a table in the ingest CSV layout (instance_id, dataset, features,
/// then one "aprt:" column per algorithm).
inline std::string to_csv(const InstanceTable& t) {
  std::ostringstream out;
  out.precision(17);
  out << "instance_id,dataset";
  for (const auto& f : t.feature_names) out << ',' << f;
  for (const auto& a : t.algorithm_names) out << ",aprt:" << a;
  out << '\n';
  for (const auto& r : t.rows) {
    out << r.instance_id << ',' << r.dataset_tag;
    for (double v : r.features) out << ',' << v;
    for (Outcome o : r.outcomes) out << ',' << (o == Outcome::kGood ? "1" : o == Outcome::kBad ? "0" : "");
    out << '\n';
  }
  return out.str();
}

}  // namespace fixtures
