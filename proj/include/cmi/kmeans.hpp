#pragma once

#include "cmi/dataset.hpp"
#include "cmi/error.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cmi {

/// Seeds from a random first point, then repeatedly the point farthest from
/// the centroids chosen so far.
struct FarthestFirst {
  std::uint64_t seed = 0;
};

/// Seeds from k distinct points drawn uniformly.
struct SeededRandom {
  std::uint64_t seed = 0;
};

/// Takes the partition as given: centroids are computed once, no iteration.
struct FixedPartition {
  std::vector<std::vector<std::string>> clusters;
};

using InitPolicy = std::variant<FarthestFirst, SeededRandom, FixedPartition>;

struct KMeansOptions {
  int max_iterations = 100;
};

struct ClusterModel {
  Eigen::MatrixXd centroids;       // k x n, one centroid per row
  std::vector<std::string> ids;    // clustered record ids, input order
  std::vector<int> assignment;     // cluster index per id
  int iterations = 0;
  bool converged = false;
  std::vector<double> sse_history; // within-cluster SSE after each update step

  int k() const { return static_cast<int>(centroids.rows()); }
  int cluster_of(std::string_view id) const;
  std::vector<std::string> members(int cluster) const;
};

/// Component-wise mean of the rows of `members`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic> centroid(
    const Eigen::MatrixBase<Derived>& members) {
  if (members.rows() == 0) throw DomainError("centroid of an empty member set");
  return members.colwise().mean();
}

/// Index of the nearest row of `centroids` by squared Euclidean distance;
/// the lowest index wins ties.
template <typename DerivedP, typename DerivedC>
int nearest_centroid(const Eigen::MatrixBase<DerivedP>& point,
                     const Eigen::MatrixBase<DerivedC>& centroids) {
  int best = 0;
  auto best_d = (centroids.row(0) - point).squaredNorm();
  for (Eigen::Index c = 1; c < centroids.rows(); ++c) {
    const auto d = (centroids.row(c) - point).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

ClusterModel cluster(const Eigen::MatrixXd& points, const std::vector<std::string>& ids, int k,
                     const InitPolicy& init, const KMeansOptions& options = {});
ClusterModel cluster(const std::vector<Record>& g1, int k, const InitPolicy& init,
                     const KMeansOptions& options = {});

double within_cluster_sse(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                          const std::vector<int>& assignment);

/// JSON: {"k":..,"centroids":[[..]],"assignment":{"R1":0,..},"iterations":..}
std::string serialize(const ClusterModel& model);

}  // namespace cmi
