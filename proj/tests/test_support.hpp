#pragma once

// Shared fixtures and brute-force oracles. The oracles work on plain
// std::vector<double> with explicit loops so they stay independent of the
// Eigen code paths they check.

#include "cmi/dataset.hpp"
#include "cmi/kmeans.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace cmi::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CMI_TEST_FIXTURES) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Dataset load_encoded(const std::string& table, const std::string& schema) {
  return encode(load_dataset(fixture(table), load_schema(fixture(schema))));
}

/// Table II without missing cells, Table III with R3.A3 and R5.A4 missing.
inline Dataset table02() { return load_encoded("table02.csv", "schema_numeric.json"); }
inline Dataset table03() { return load_encoded("table03.csv", "schema_numeric.json"); }
inline Dataset table16() { return load_encoded("table16.csv", "schema_classes.json"); }

inline FixedPartition table06_partition() { return FixedPartition{{{"R1", "R4", "R6", "R9"}, {"R2", "R7", "R8"}}}; }
inline FixedPartition table18_partition() {
  return FixedPartition{{{"R1", "R4", "R6", "R9"}, {"R2", "R7", "R8", "R3", "R5"}}};
}

using Vec = std::vector<double>;

inline Vec to_vec(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

inline double oracle_distance(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i])) continue;
    s += (a[i] - b[i]) * (a[i] - b[i]);
  }
  return std::sqrt(s);
}

inline Vec oracle_mean(const std::vector<Vec>& rows) {
  Vec m(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) m[i] += r[i];
  }
  for (double& x : m) x /= static_cast<double>(rows.size());
  return m;
}

inline double oracle_map(const Vec& record, const std::vector<Vec>& centroids) {
  double s = 0.0;
  for (const auto& c : centroids) s += oracle_distance(record, c);
  return s;
}

inline Vec row_vec(const Record& r) { return to_vec(r.values()); }

/// Random dataset of `m` records over `n` numeric attributes with a label
/// drawn from `classes` symbols.
inline Dataset random_dataset(std::mt19937_64& gen, int m, int n, int classes) {
  std::uniform_real_distribution<double> value(0.0, 10.0);
  Dataset ds;
  ds.schema.id_column = "id";
  ds.schema.label_column = "class";
  for (int a = 0; a < n; ++a) ds.schema.attributes.push_back({"a" + std::to_string(a), AttributeKind::kNumeric, {}, false});
  for (int i = 0; i < m; ++i) {
    Record r;
    r.id = "r" + std::to_string(i);
    r.label = "c" + std::to_string(i % classes);
    for (int a = 0; a < n; ++a) r.cells.emplace_back(value(gen));
    ds.records.push_back(std::move(r));
  }
  return ds;
}

}  // namespace cmi::test
