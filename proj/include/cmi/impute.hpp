#pragma once

#include "cmi/dataset.hpp"
#include "cmi/kmeans.hpp"
#include "cmi/mapping.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cmi {

/// How the nearest complete record is picked from a column of d_ij values.
enum class NearestMode {
  kPaperSigned,  // argmin of the signed difference Map(R_i) - Map'(R_j)
  kAbsolute,     // argmin of |Map(R_i) - Map'(R_j)|
};

std::string to_string(NearestMode mode);
NearestMode parse_nearest_mode(std::string_view text);

/// d(i, j) = Map(R_i) - Map'(R_j); rows follow g1_ids, columns query_ids.
struct DifferenceTable {
  std::vector<std::string> g1_ids;
  std::vector<std::string> query_ids;
  Eigen::MatrixXd entries;

  double at(std::string_view g1_id, std::string_view query_id) const;
  Eigen::VectorXd column(std::string_view query_id) const;
};

DifferenceTable difference_table(const MappingTable& maps);

/// All g1 ids attaining the minimum for `query_id` under `mode`, in table order.
/// Ties are exact floating-point equality.
std::vector<std::string> nearest_record(const DifferenceTable& table, std::string_view query_id,
                                        NearestMode mode);

enum class TiePolicy {
  kSingleDonor,  // one nearest record, its value is copied
  kClassMode,    // tied donors, categorical: most frequent value in the donor class
  kClassMean,    // tied donors, numeric: mean value in the donor class
};

std::string to_string(TiePolicy policy);

/// Fills one missing cell. `donors` must be ordered by ascending Map value;
/// when tied donors span several classes the pool is the majority class,
/// and a class-count tie goes to the class of the earliest donor. Without
/// labels the pool is the tied donors themselves.
double impute_cell(const Record& query, std::size_t attr, const std::vector<Record>& donors,
                   const std::vector<Record>& g1, const Schema& schema,
                   TiePolicy* applied = nullptr);

struct ImputeConfig {
  NearestMode mode = NearestMode::kAbsolute;
  std::optional<int> k;  // defaults to the number of decision classes
  InitPolicy init = FarthestFirst{0};
  KMeansOptions kmeans;
  Type2Scaling scaling = Type2Scaling::kNone;
  bool min_max_scale = false;
};

struct ImputedCell {
  std::string query_id;
  std::size_t attribute = 0;
  std::vector<std::string> donors;
  double value = 0.0;
  std::string decoded;
  NearestMode mode = NearestMode::kAbsolute;
  TiePolicy tie = TiePolicy::kSingleDonor;
};

struct ImputationResult {
  Dataset completed;
  std::vector<ImputedCell> cells;
  ClusterModel model;
  MappingTable maps;
  DifferenceTable differences;
};

/// Split, cluster the complete group, map, difference, pick the nearest
/// complete record and fill every missing cell of each incomplete record.
/// Donors always come from the original complete group.
ImputationResult impute_dataset(const Dataset& dataset, const ImputeConfig& config);

/// CSV: query,attribute,donors,value,decoded,mode,tie_policy
std::string provenance_report(const ImputationResult& result, const Schema& schema);

}  // namespace cmi
