#pragma once

#include "cmi/dataset.hpp"
#include "cmi/impute.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace cmi {

struct MaskedCell {
  std::string record_id;
  std::size_t attribute = 0;
  double truth = 0.0;
};

struct MaskPlan {
  std::uint64_t seed = 0;
  double rate = 0.0;
  std::vector<MaskedCell> cells;
};

/// Masks round(rate * m * n) cells chosen uniformly without replacement,
/// skipping any cell that would leave its record with no observed value.
std::pair<Dataset, MaskPlan> inject_mcar(const Dataset& dataset, double rate, std::uint64_t seed);

/// Masks exactly the listed (record id, attribute) cells.
std::pair<Dataset, MaskPlan> apply_mask(const Dataset& dataset,
                                        const std::vector<std::pair<std::string, std::size_t>>& cells);

/// Restores every masked cell from the plan's ground truth.
Dataset unmask(const Dataset& masked, const MaskPlan& plan);

struct ImputationScore {
  double numeric_rmse = 0.0;
  std::size_t numeric_cells = 0;
  double categorical_accuracy = 0.0;
  std::size_t categorical_cells = 0;
};

ImputationScore score_imputation(const MaskPlan& plan, const Dataset& completed);

enum class Method {
  kClusterMapSigned,
  kClusterMapAbsolute,
  kClassMeanMode,
  kRawKnnDonor,
};

std::string to_string(Method method);
Method parse_method(std::string_view name);

/// Imputes `masked` with one of the comparison methods.
Dataset impute_with(Method method, const Dataset& masked, std::uint64_t seed);

struct SyntheticSpec {
  int clusters = 3;
  int per_cluster = 30;
  int numeric_attributes = 3;
  int categorical_attributes = 1;
  double separation = 6.0;
  double spread = 1.0;
  std::uint64_t seed = 7;
};

/// Gaussian blobs, one class per blob. Categorical attributes take the blob's
/// own symbol with probability 0.8, another symbol otherwise.
Dataset make_synthetic(const SyntheticSpec& spec);

struct ExperimentConfig {
  Dataset dataset;
  std::vector<Method> methods;
  std::vector<double> rates;
  int trials = 1;
  std::uint64_t master_seed = 0;
  double holdout_fraction = 0.2;
};

/// Experiment spec (JSON):
///   {"dataset": {"synthetic": {"clusters": 3, ...}}
///             | {"data": "file.csv", "schema": "schema.json"},
///    "methods": ["cluster-map-absolute", ...], "rates": [0.1],
///    "trials": 30, "master_seed": 42, "holdout_fraction": 0.2}
/// Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment(std::string_view json_text,
                                  const std::filesystem::path& base_dir = {});

struct TrialResult {
  Method method = Method::kClusterMapAbsolute;
  double rate = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  std::size_t masked = 0;
  ImputationScore score;
  double downstream_accuracy = 0.0;
};

struct MethodSummary {
  Method method = Method::kClusterMapAbsolute;
  double rate = 0.0;
  int trials = 0;
  double mean_numeric_rmse = 0.0;
  double mean_categorical_accuracy = 0.0;
  double mean_downstream_accuracy = 0.0;
};

struct EvaluationReport {
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> trials;
  std::vector<MethodSummary> summary;
};

/// For each rate and trial: hold out a labeled test slice, mask the rest
/// with MCAR, impute with every method, score the filled cells, and measure
/// mapped-classifier accuracy on the held-out slice.
EvaluationReport run_experiment(const ExperimentConfig& config);

std::string report_json(const EvaluationReport& report);
std::string summary_csv(const EvaluationReport& report);

}  // namespace cmi
