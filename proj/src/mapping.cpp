#include "cmi/mapping.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>

namespace cmi {

Eigen::VectorXd cluster_distances(const Eigen::VectorXd& record, const ClusterModel& model,
                                  Type2Scaling scaling) {
  Eigen::VectorXd out(model.k());
  for (int c = 0; c < model.k(); ++c) {
    out(c) = type2_distance(record, model.centroids.row(c), scaling);
  }
  return out;
}

double map_complete(const Eigen::VectorXd& record, const ClusterModel& model) {
  double sum = 0.0;
  for (int c = 0; c < model.k(); ++c) sum += type1_distance(record, model.centroids.row(c));
  return sum;
}

double map_complete(const Record& record, const ClusterModel& model) {
  if (!record.complete()) throw DomainError("record " + record.id + " is not complete");
  return map_complete(record.values(), model);
}

double map_query(const Eigen::VectorXd& record, const ClusterModel& model, Type2Scaling scaling) {
  const Eigen::VectorXd d = cluster_distances(record, model, scaling);
  double sum = 0.0;
  for (Eigen::Index c = 0; c < d.size(); ++c) sum += d(c);
  return sum;
}

double map_query(const Record& record, const ClusterModel& model, Type2Scaling scaling) {
  if (record.missing_count() == record.cells.size()) {
    throw DomainError("record " + record.id + " has no observed cells");
  }
  return map_query(record.values(), model, scaling);
}

namespace {

double lookup(const std::vector<std::string>& ids, const Eigen::VectorXd& values,
              std::string_view id) {
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] == id) return values(static_cast<Eigen::Index>(i));
  }
  throw DomainError("no mapping value for '" + std::string(id) + "'");
}

}  // namespace

double MappingTable::complete(std::string_view id) const {
  return lookup(complete_ids, complete_map, id);
}

double MappingTable::query(std::string_view id) const { return lookup(query_ids, query_map, id); }

MappingTable build_mapping_table(const std::vector<std::string>& g1_ids,
                                 const Eigen::MatrixXd& g1_values,
                                 const std::vector<std::string>& query_ids,
                                 const Eigen::MatrixXd& query_values, const ClusterModel& model,
                                 Type2Scaling scaling) {
  MappingTable table;
  table.model_ref = model_fingerprint(model);
  table.complete_ids = g1_ids;
  table.query_ids = query_ids;
  table.complete_map.resize(g1_values.rows());
  for (Eigen::Index i = 0; i < g1_values.rows(); ++i) {
    table.complete_map(i) = map_complete(Eigen::VectorXd(g1_values.row(i).transpose()), model);
  }
  table.query_map.resize(query_values.rows());
  for (Eigen::Index j = 0; j < query_values.rows(); ++j) {
    const Eigen::VectorXd q = query_values.row(j).transpose();
    if (q.array().isNaN().all()) {
      throw DomainError("record " + query_ids[static_cast<std::size_t>(j)] +
                        " has no observed cells");
    }
    table.query_map(j) = map_query(q, model, scaling);
  }
  return table;
}

MappingTable build_mapping_table(const std::vector<Record>& g1, const std::vector<Record>& queries,
                                 const ClusterModel& model, Type2Scaling scaling) {
  std::vector<std::string> g1_ids;
  for (const auto& r : g1) {
    if (!r.complete()) throw DomainError("record " + r.id + " is not complete");
    g1_ids.push_back(r.id);
  }
  std::vector<std::string> query_ids;
  for (const auto& r : queries) query_ids.push_back(r.id);
  return build_mapping_table(g1_ids, to_matrix(g1), query_ids, to_matrix(queries), model, scaling);
}

std::string model_fingerprint(const ClusterModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize(model)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize(const MappingTable& table) {
  std::ostringstream out;
  out << "group,id,map\n";
  for (std::size_t i = 0; i < table.complete_ids.size(); ++i) {
    out << "complete," << table.complete_ids[i] << ','
        << format_number(table.complete_map(static_cast<Eigen::Index>(i))) << '\n';
  }
  for (std::size_t j = 0; j < table.query_ids.size(); ++j) {
    out << "query," << table.query_ids[j] << ','
        << format_number(table.query_map(static_cast<Eigen::Index>(j))) << '\n';
  }
  return out.str();
}

}  // namespace cmi
