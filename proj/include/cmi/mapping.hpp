#pragma once

#include "cmi/dataset.hpp"
#include "cmi/error.hpp"
#include "cmi/kmeans.hpp"

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <vector>

namespace cmi {

// Records enter the mapping layer as dense vectors with NaN marking a missing
// coordinate. Both routines accept row or column vectors of any scalar type.

/// Euclidean distance over all coordinates of a complete record.
template <typename DerivedR, typename DerivedC>
typename DerivedR::Scalar type1_distance(const Eigen::MatrixBase<DerivedR>& record,
                                         const Eigen::MatrixBase<DerivedC>& centre) {
  using Scalar = typename DerivedR::Scalar;
  if (record.size() != centre.size()) throw DomainError("record and centroid arity differ");
  Scalar sum(0);
  for (Eigen::Index i = 0; i < record.size(); ++i) {
    const Scalar x = record(i);
    if (std::isnan(x)) throw DomainError("type-1 distance requires a complete record");
    const Scalar diff = x - static_cast<Scalar>(centre(i));
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

enum class Type2Scaling {
  kNone,       // missing coordinates are dropped, nothing else
  kSqrtRatio,  // result multiplied by sqrt(n / observed)
};

/// Euclidean distance over the observed coordinates only.
template <typename DerivedR, typename DerivedC>
typename DerivedR::Scalar type2_distance(const Eigen::MatrixBase<DerivedR>& record,
                                         const Eigen::MatrixBase<DerivedC>& centre,
                                         Type2Scaling scaling = Type2Scaling::kNone) {
  using Scalar = typename DerivedR::Scalar;
  if (record.size() != centre.size()) throw DomainError("record and centroid arity differ");
  Scalar sum(0);
  Eigen::Index observed = 0;
  for (Eigen::Index i = 0; i < record.size(); ++i) {
    const Scalar x = record(i);
    if (std::isnan(x)) continue;
    const Scalar diff = x - static_cast<Scalar>(centre(i));
    sum += diff * diff;
    ++observed;
  }
  if (observed == 0) throw DomainError("record has no observed cells");
  Scalar d = std::sqrt(sum);
  if (scaling == Type2Scaling::kSqrtRatio) {
    d *= std::sqrt(static_cast<Scalar>(record.size()) / static_cast<Scalar>(observed));
  }
  return d;
}

/// Distance from `record` to every centroid of `model` (type-2, which reduces
/// to type-1 for complete records).
Eigen::VectorXd cluster_distances(const Eigen::VectorXd& record, const ClusterModel& model,
                                  Type2Scaling scaling = Type2Scaling::kNone);

/// Sum of type-1 distances to all centroids.
double map_complete(const Eigen::VectorXd& record, const ClusterModel& model);
double map_complete(const Record& record, const ClusterModel& model);

/// Sum of type-2 distances to all centroids.
double map_query(const Eigen::VectorXd& record, const ClusterModel& model,
                 Type2Scaling scaling = Type2Scaling::kNone);
double map_query(const Record& record, const ClusterModel& model,
                 Type2Scaling scaling = Type2Scaling::kNone);

struct MappingTable {
  std::vector<std::string> complete_ids;
  Eigen::VectorXd complete_map;
  std::vector<std::string> query_ids;
  Eigen::VectorXd query_map;
  std::string model_ref;

  double complete(std::string_view id) const;
  double query(std::string_view id) const;
};

/// Maps every g1 record with map_complete and every query with map_query.
MappingTable build_mapping_table(const std::vector<Record>& g1, const std::vector<Record>& queries,
                                 const ClusterModel& model,
                                 Type2Scaling scaling = Type2Scaling::kNone);
MappingTable build_mapping_table(const std::vector<std::string>& g1_ids,
                                 const Eigen::MatrixXd& g1_values,
                                 const std::vector<std::string>& query_ids,
                                 const Eigen::MatrixXd& query_values, const ClusterModel& model,
                                 Type2Scaling scaling = Type2Scaling::kNone);

/// Short stable fingerprint of a model's serialized form.
std::string model_fingerprint(const ClusterModel& model);

/// "group,id,map" rows, complete records first.
std::string serialize(const MappingTable& table);

}  // namespace cmi
