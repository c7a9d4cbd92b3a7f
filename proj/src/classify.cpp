#include "cmi/classify.hpp"

#include "cmi/error.hpp"
#include "cmi/mapping.hpp"

#include <algorithm>
#include <set>

namespace cmi {

namespace {

void check_training(const Dataset& training) {
  if (training.records.empty()) throw NoDonorsError("training set is empty");
  if (!training.labeled()) throw CannotClassifyError("training records must all carry a class label");
  if (!training.encoded()) throw DomainError("training set must be encoded");
  if (!training.complete()) throw DomainError("training records must be complete; impute them first");
}

void check_query(const Eigen::VectorXd& query, const Dataset& training) {
  if (query.size() != static_cast<Eigen::Index>(training.arity())) {
    throw DomainError("query arity " + std::to_string(query.size()) + " does not match " +
                      std::to_string(training.arity()));
  }
  if (query.hasNaN()) throw DomainError("query record must be complete");
}

ClassificationResult finish(const Dataset& training, Eigen::VectorXd scores) {
  ClassificationResult result;
  for (const auto& r : training.records) result.ids.push_back(r.id);
  const double best = scores.minCoeff();
  std::set<std::string> labels;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    if (scores(i) == best) {
      const auto& r = training.records[static_cast<std::size_t>(i)];
      result.nearest.push_back(r.id);
      labels.insert(*r.label);
    }
  }
  result.labels.assign(labels.begin(), labels.end());
  result.tie = result.nearest.size() > 1;
  return result;
}

}  // namespace

ClusterModel training_model(const Dataset& training, const InitPolicy& init,
                            const KMeansOptions& options) {
  check_training(training);
  return cluster(training.records, static_cast<int>(training.classes().size()), init, options);
}

ClassificationResult classify_mapped(const Eigen::VectorXd& query, const Dataset& training,
                                     const ClusterModel& model, NearestMode mode) {
  check_training(training);
  check_query(query, training);
  const Eigen::MatrixXd values = training.matrix();
  Eigen::VectorXd maps(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    maps(i) = map_complete(Eigen::VectorXd(values.row(i).transpose()), model);
  }
  const double query_map = map_query(query, model);
  const Eigen::VectorXd diffs = maps.array() - query_map;
  auto result = finish(training, mode == NearestMode::kAbsolute ? Eigen::VectorXd(diffs.cwiseAbs()) : diffs);
  result.distances = diffs;
  result.query_map = query_map;
  return result;
}

ClassificationResult classify_mapped(const Record& query, const Dataset& training,
                                     const ClusterModel& model, NearestMode mode) {
  return classify_mapped(query.values(), training, model, mode);
}

ClassificationResult classify_raw_knn(const Eigen::VectorXd& query, const Dataset& training) {
  check_training(training);
  check_query(query, training);
  const Eigen::MatrixXd values = training.matrix();
  Eigen::VectorXd dist(values.rows());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    dist(i) = type1_distance(Eigen::VectorXd(values.row(i).transpose()), query);
  }
  auto result = finish(training, dist);
  result.distances = dist;
  return result;
}

ClassificationResult classify_raw_knn(const Record& query, const Dataset& training) {
  return classify_raw_knn(query.values(), training);
}

}  // namespace cmi
