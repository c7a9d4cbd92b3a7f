#include "cmi/impute.hpp"

#include "cmi/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace cmi {

std::string to_string(NearestMode mode) {
  return mode == NearestMode::kPaperSigned ? "paper-signed" : "absolute";
}

NearestMode parse_nearest_mode(std::string_view text) {
  if (text == "paper-signed") return NearestMode::kPaperSigned;
  if (text == "absolute") return NearestMode::kAbsolute;
  throw ConfigError("unknown mode '" + std::string(text) + "' (expected paper-signed or absolute)");
}

std::string to_string(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::kSingleDonor:
      return "single-donor";
    case TiePolicy::kClassMode:
      return "class-mode";
    case TiePolicy::kClassMean:
      return "class-mean";
  }
  return "unknown";
}

namespace {

std::size_t index_in(const std::vector<std::string>& ids, std::string_view id, const char* what) {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw DomainError(std::string("no ") + what + " record '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

double cell_value(const Record& r, std::size_t attr) {
  const auto* v = std::get_if<double>(&r.cells[attr]);
  if (!v) throw DomainError("record " + r.id + " has no encoded value at attribute " + std::to_string(attr));
  return *v;
}

}  // namespace

double DifferenceTable::at(std::string_view g1_id, std::string_view query_id) const {
  return entries(static_cast<Eigen::Index>(index_in(g1_ids, g1_id, "complete")),
                 static_cast<Eigen::Index>(index_in(query_ids, query_id, "query")));
}

Eigen::VectorXd DifferenceTable::column(std::string_view query_id) const {
  return entries.col(static_cast<Eigen::Index>(index_in(query_ids, query_id, "query")));
}

DifferenceTable difference_table(const MappingTable& maps) {
  if (maps.complete_ids.empty()) throw NoDonorsError("no complete records to act as donors");
  DifferenceTable table;
  table.g1_ids = maps.complete_ids;
  table.query_ids = maps.query_ids;
  table.entries = maps.complete_map.replicate(1, maps.query_map.size()) -
                  maps.query_map.transpose().replicate(maps.complete_map.size(), 1);
  return table;
}

std::vector<std::string> nearest_record(const DifferenceTable& table, std::string_view query_id,
                                        NearestMode mode) {
  Eigen::VectorXd col = table.column(query_id);
  if (mode == NearestMode::kAbsolute) col = col.cwiseAbs();
  std::vector<std::string> out;
  if (col.size() == 0) return out;
  const double best = col.minCoeff();
  for (Eigen::Index i = 0; i < col.size(); ++i) {
    if (col(i) == best) out.push_back(table.g1_ids[static_cast<std::size_t>(i)]);
  }
  return out;
}

double impute_cell(const Record& query, std::size_t attr, const std::vector<Record>& donors,
                   const std::vector<Record>& g1, const Schema& schema, TiePolicy* applied) {
  if (donors.empty()) throw NoDonorsError("no donor for record " + query.id);
  if (attr >= query.cells.size() || !is_missing(query.cells[attr])) {
    throw DomainError("record " + query.id + " has no missing cell at attribute " + std::to_string(attr));
  }
  auto report = [&](TiePolicy p) {
    if (applied) *applied = p;
  };
  if (donors.size() == 1) {
    report(TiePolicy::kSingleDonor);
    return cell_value(donors.front(), attr);
  }

  std::vector<double> pool;
  const bool labeled = std::all_of(donors.begin(), donors.end(), [](const Record& r) {
    return r.label.has_value();
  });
  if (labeled) {
    std::map<std::string, int> votes;
    for (const auto& d : donors) ++votes[*d.label];
    int top = 0;
    for (const auto& [cls, n] : votes) top = std::max(top, n);
    std::string chosen;
    for (const auto& d : donors) {
      if (votes[*d.label] == top) {
        chosen = *d.label;
        break;
      }
    }
    for (const auto& r : g1) {
      if (r.label == chosen) pool.push_back(cell_value(r, attr));
    }
  }
  if (pool.empty()) {
    for (const auto& d : donors) pool.push_back(cell_value(d, attr));
  }

  if (schema.attributes.at(attr).categorical()) {
    report(TiePolicy::kClassMode);
    std::map<double, int> freq;
    for (double v : pool) ++freq[v];
    double mode = freq.begin()->first;
    int count = 0;
    for (const auto& [v, n] : freq) {
      if (n > count) {
        count = n;
        mode = v;
      }
    }
    return mode;
  }
  report(TiePolicy::kClassMean);
  return std::accumulate(pool.begin(), pool.end(), 0.0) / static_cast<double>(pool.size());
}

ImputationResult impute_dataset(const Dataset& dataset, const ImputeConfig& config) {
  if (!dataset.encoded()) throw DomainError("dataset must be encoded before imputation");
  ImputationResult result;
  result.completed = dataset;

  GroupSplit split = split_groups(dataset);
  if (split.g2.empty()) return result;
  if (split.g1.empty()) throw NoDonorsError("every record has a missing cell; no donors available");
  for (const auto& r : split.g2) {
    if (r.missing_count() == r.cells.size()) {
      throw InsufficientDataError("record " + r.id + " has every cell missing");
    }
  }

  int k = 0;
  if (config.k) {
    k = *config.k;
  } else {
    k = static_cast<int>(dataset.classes().size());
    if (k == 0) throw ConfigError("dataset has no class labels; k must be given explicitly");
  }
  if (k > static_cast<int>(split.g1.size())) {
    throw InsufficientDataError("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(split.g1.size()) + " complete records");
  }

  Eigen::MatrixXd g1_values = to_matrix(split.g1);
  Eigen::MatrixXd g2_values = to_matrix(split.g2);
  if (config.min_max_scale) {
    Eigen::MatrixXd stacked(g1_values.rows() + g2_values.rows(), g1_values.cols());
    stacked << g1_values, g2_values;
    stacked = min_max_scale(stacked);
    g1_values = stacked.topRows(g1_values.rows());
    g2_values = stacked.bottomRows(g2_values.rows());
  }

  std::vector<std::string> g1_ids;
  for (const auto& r : split.g1) g1_ids.push_back(r.id);
  std::vector<std::string> g2_ids;
  for (const auto& r : split.g2) g2_ids.push_back(r.id);

  result.model = cluster(g1_values, g1_ids, k, config.init, config.kmeans);
  result.maps =
      build_mapping_table(g1_ids, g1_values, g2_ids, g2_values, result.model, config.scaling);
  result.differences = difference_table(result.maps);

  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) row_of[dataset.records[i].id] = i;

  for (const auto& query : split.g2) {
    const auto nearest = nearest_record(result.differences, query.id, config.mode);
    std::vector<Record> donors;
    for (const auto& id : nearest) donors.push_back(split.g1[index_in(g1_ids, id, "complete")]);
    std::stable_sort(donors.begin(), donors.end(), [&](const Record& a, const Record& b) {
      return result.maps.complete(a.id) < result.maps.complete(b.id);
    });

    Record& out = result.completed.records[row_of.at(query.id)];
    for (std::size_t a = 0; a < query.cells.size(); ++a) {
      if (!is_missing(query.cells[a])) continue;
      ImputedCell cell;
      cell.query_id = query.id;
      cell.attribute = a;
      cell.donors = nearest;
      cell.mode = config.mode;
      cell.value = impute_cell(query, a, donors, split.g1, dataset.schema, &cell.tie);
      const auto& spec = dataset.schema.attributes[a];
      cell.decoded = spec.categorical() ? spec.symbol(cell.value) : format_number(cell.value);
      out.cells[a] = cell.value;
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

std::string provenance_report(const ImputationResult& result, const Schema& schema) {
  std::ostringstream out;
  out << "query,attribute,donors,value,decoded,mode,tie_policy\n";
  for (const auto& c : result.cells) {
    std::string donors;
    for (const auto& d : c.donors) donors += (donors.empty() ? "" : ";") + d;
    out << c.query_id << ',' << schema.attributes[c.attribute].name << ',' << donors << ','
        << format_number(c.value) << ',' << c.decoded << ',' << to_string(c.mode) << ','
        << to_string(c.tie) << '\n';
  }
  return out.str();
}

}  // namespace cmi
