#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cmi::cli {

struct RunConfig {
  std::string data;
  std::string schema;
  std::string mode = "absolute";
  std::string init = "farthest";  // farthest | random
  std::uint64_t seed = 0;
  std::string partition;          // "R1,R4;R2,R7": fixed partition, overrides init
  std::optional<int> k;
  bool min_max_scale = false;
  bool scale_type2 = false;
  std::string out;
  std::string report;

  // classify
  std::string train;
  std::string query;
  bool with_knn_baseline = false;
  std::string d_table;

  // evaluate
  std::string experiment;
  std::string summary;

  // casestudy
  double tolerance = 1e-5;
  std::string fixtures;

  int verbosity = 0;
};

/// Default seed: $CMI_SEED when set and numeric, otherwise 0.
std::uint64_t default_seed();
/// Fixture directory: $CMI_FIXTURES when set, otherwise the bundled one.
std::string default_fixture_dir();

// Each command returns the process exit code and reports errors on `err`.
int cmd_impute(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_casestudy(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cmi::cli
