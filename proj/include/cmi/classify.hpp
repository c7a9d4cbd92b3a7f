#pragma once

#include "cmi/dataset.hpp"
#include "cmi/impute.hpp"
#include "cmi/kmeans.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace cmi {

struct ClassificationResult {
  std::vector<std::string> labels;   // sorted, de-duplicated
  std::vector<std::string> nearest;  // training ids attaining the minimum
  std::vector<std::string> ids;      // training ids, dataset order
  Eigen::VectorXd distances;         // d_i (mapped) or Euclidean distance (raw), per id
  double query_map = 0.0;            // Map'(query); mapped mode only
  bool tie = false;                  // more than one nearest record
};

/// Single-label classifier on the scalar mapping: the query is mapped with the
/// same centroids as the training records and takes the label of the
/// training record picked by `mode` from the difference column.
ClassificationResult classify_mapped(const Eigen::VectorXd& query, const Dataset& training,
                                     const ClusterModel& model, NearestMode mode);
ClassificationResult classify_mapped(const Record& query, const Dataset& training,
                                     const ClusterModel& model, NearestMode mode);

/// Clusters every training record into one cluster per class, then
/// classifies.
ClusterModel training_model(const Dataset& training, const InitPolicy& init,
                            const KMeansOptions& options = {});

/// Full-dimensional Euclidean 1-NN. Every record at the minimum distance
/// contributes its label.
ClassificationResult classify_raw_knn(const Eigen::VectorXd& query, const Dataset& training);
ClassificationResult classify_raw_knn(const Record& query, const Dataset& training);

}  // namespace cmi
