#include "cmi/kmeans.hpp"

#include "cmi/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace cmi {

namespace {

using Eigen::Index;

std::vector<int> assign_all(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  std::vector<int> out(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = nearest_centroid(points.row(i), centroids);
  }
  return out;
}

std::vector<int> counts_of(const std::vector<int>& assignment, int k) {
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (int c : assignment) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

Eigen::MatrixXd means_of(const Eigen::MatrixXd& points, const std::vector<int>& assignment, int k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
  const auto counts = counts_of(assignment, k);
  for (Index i = 0; i < points.rows(); ++i) {
    sums.row(assignment[static_cast<std::size_t>(i)]) += points.row(i);
  }
  for (int c = 0; c < k; ++c) sums.row(c) /= counts[static_cast<std::size_t>(c)];
  return sums;
}

// Each empty cluster takes the point lying farthest from its current centroid,
// drawn from clusters that can spare a member.
void reseed_empty(const Eigen::MatrixXd& points, Eigen::MatrixXd& centroids,
                  std::vector<int>& assignment) {
  const int k = static_cast<int>(centroids.rows());
  auto counts = counts_of(assignment, k);
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) continue;
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < points.rows(); ++i) {
      const int own = assignment[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(own)] < 2) continue;
      const double d = (points.row(i) - centroids.row(own)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    const int donor = assignment[static_cast<std::size_t>(far)];
    --counts[static_cast<std::size_t>(donor)];
    ++counts[static_cast<std::size_t>(c)];
    assignment[static_cast<std::size_t>(far)] = c;
    centroids.row(c) = points.row(far);
  }
}

Eigen::MatrixXd seed_farthest_first(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
  Rng rng(seed);
  const Index m = points.rows();
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Index>(rng.uniform_index(static_cast<std::size_t>(m))));
  Eigen::VectorXd nearest_d(m);
  for (Index i = 0; i < m; ++i) nearest_d(i) = (points.row(i) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    Index far = 0;
    nearest_d.maxCoeff(&far);
    centroids.row(c) = points.row(far);
    for (Index i = 0; i < m; ++i) {
      nearest_d(i) = std::min(nearest_d(i), (points.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

Eigen::MatrixXd seed_random(const Eigen::MatrixXd& points, int k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  rng.shuffle(order);
  Eigen::MatrixXd centroids(k, points.cols());
  for (int c = 0; c < k; ++c) centroids.row(c) = points.row(order[static_cast<std::size_t>(c)]);
  return centroids;
}

ClusterModel from_partition(const Eigen::MatrixXd& points, const std::vector<std::string>& ids,
                            int k, const FixedPartition& partition) {
  if (static_cast<int>(partition.clusters.size()) != k) {
    throw ConfigError("fixed partition has " + std::to_string(partition.clusters.size()) +
                      " clusters, expected " + std::to_string(k));
  }
  std::map<std::string, int> where;
  for (int c = 0; c < k; ++c) {
    if (partition.clusters[static_cast<std::size_t>(c)].empty()) {
      throw ConfigError("fixed partition cluster " + std::to_string(c) + " is empty");
    }
    for (const auto& id : partition.clusters[static_cast<std::size_t>(c)]) {
      if (!where.emplace(id, c).second) {
        throw ConfigError("record '" + id + "' appears twice in the fixed partition");
      }
    }
  }
  ClusterModel model;
  model.ids = ids;
  for (const auto& id : ids) {
    auto it = where.find(id);
    if (it == where.end()) throw ConfigError("record '" + id + "' is missing from the fixed partition");
    model.assignment.push_back(it->second);
    where.erase(it);
  }
  if (!where.empty()) {
    throw ConfigError("fixed partition names unknown record '" + where.begin()->first + "'");
  }
  model.centroids = means_of(points, model.assignment, k);
  model.converged = true;
  model.sse_history.push_back(within_cluster_sse(points, model.centroids, model.assignment));
  return model;
}

}  // namespace

int ClusterModel::cluster_of(std::string_view id) const {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return assignment[i];
  }
  throw DomainError("record '" + std::string(id) + "' is not part of the cluster model");
}

std::vector<std::string> ClusterModel::members(int c) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (assignment[i] == c) out.push_back(ids[i]);
  }
  return out;
}

double within_cluster_sse(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                          const std::vector<int>& assignment) {
  double sse = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    sse += (points.row(i) - centroids.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return sse;
}

ClusterModel cluster(const Eigen::MatrixXd& points, const std::vector<std::string>& ids, int k,
                     const InitPolicy& init, const KMeansOptions& options) {
  if (points.rows() == 0) throw InsufficientDataError("no complete records to cluster");
  if (k < 1) throw ConfigError("k must be positive");
  if (points.rows() < k) {
    throw InsufficientDataError("need at least " + std::to_string(k) + " complete records, have " +
                                std::to_string(points.rows()));
  }
  if (static_cast<Index>(ids.size()) != points.rows()) {
    throw DomainError("id count does not match point count");
  }
  if (points.hasNaN()) throw DomainError("cannot cluster records with missing cells");

  if (const auto* fixed = std::get_if<FixedPartition>(&init)) {
    return from_partition(points, ids, k, *fixed);
  }

  Eigen::MatrixXd centroids = std::holds_alternative<FarthestFirst>(init)
                                  ? seed_farthest_first(points, k, std::get<FarthestFirst>(init).seed)
                                  : seed_random(points, k, std::get<SeededRandom>(init).seed);

  ClusterModel model;
  model.ids = ids;
  std::vector<int> assignment = assign_all(points, centroids);
  for (;;) {
    reseed_empty(points, centroids, assignment);
    centroids = means_of(points, assignment, k);
    model.sse_history.push_back(within_cluster_sse(points, centroids, assignment));
    if (model.iterations >= options.max_iterations) break;
    ++model.iterations;
    auto next = assign_all(points, centroids);
    if (next == assignment) {
      model.converged = true;
      break;
    }
    assignment = std::move(next);
  }
  model.centroids = std::move(centroids);
  model.assignment = std::move(assignment);
  return model;
}

ClusterModel cluster(const std::vector<Record>& g1, int k, const InitPolicy& init,
                     const KMeansOptions& options) {
  std::vector<std::string> ids;
  ids.reserve(g1.size());
  for (const auto& r : g1) {
    if (!r.complete()) throw DomainError("record " + r.id + " has missing cells");
    ids.push_back(r.id);
  }
  return cluster(to_matrix(g1), ids, k, init, options);
}

std::string serialize(const ClusterModel& model) {
  nlohmann::ordered_json j;
  j["k"] = model.k();
  j["centroids"] = nlohmann::ordered_json::array();
  for (Index c = 0; c < model.centroids.rows(); ++c) {
    std::vector<double> row(model.centroids.row(c).begin(), model.centroids.row(c).end());
    j["centroids"].push_back(row);
  }
  nlohmann::ordered_json assignment = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < model.ids.size(); ++i) assignment[model.ids[i]] = model.assignment[i];
  j["assignment"] = assignment;
  j["iterations"] = model.iterations;
  j["converged"] = model.converged;
  return j.dump(2);
}

}  // namespace cmi
