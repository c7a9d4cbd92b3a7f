#include "cmi/eval.hpp"

#include "cmi/classify.hpp"
#include "cmi/error.hpp"
#include "cmi/mapping.hpp"
#include "cmi/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace cmi {

namespace {

std::size_t row_index(const Dataset& ds, std::string_view id) {
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    if (ds.records[i].id == id) return i;
  }
  throw DomainError("no record with id '" + std::string(id) + "'");
}

void sort_plan(const Dataset& ds, MaskPlan& plan) {
  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < ds.records.size(); ++i) order[ds.records[i].id] = i;
  std::sort(plan.cells.begin(), plan.cells.end(), [&](const MaskedCell& a, const MaskedCell& b) {
    return std::pair(order[a.record_id], a.attribute) < std::pair(order[b.record_id], b.attribute);
  });
}

}  // namespace

std::pair<Dataset, MaskPlan> inject_mcar(const Dataset& dataset, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate < 1.0)) throw ConfigError("MCAR rate must lie in (0, 1)");
  if (!dataset.encoded() || !dataset.complete()) {
    throw ConfigError("MCAR injection needs a complete, encoded dataset");
  }
  const std::size_t m = dataset.size();
  const std::size_t n = dataset.arity();
  const auto target = static_cast<std::size_t>(std::llround(rate * static_cast<double>(m * n)));
  if (n == 0 || target > m * (n - 1)) {
    throw ConfigError("rate " + format_number(rate) +
                      " would leave some record with every cell masked");
  }

  std::vector<std::size_t> cells(m * n);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(cells);

  Dataset masked = dataset;
  MaskPlan plan{seed, rate, {}};
  std::vector<std::size_t> observed(m, n);
  for (std::size_t cell : cells) {
    if (plan.cells.size() == target) break;
    const std::size_t r = cell / n;
    const std::size_t a = cell % n;
    if (observed[r] < 2) continue;
    --observed[r];
    Record& rec = masked.records[r];
    plan.cells.push_back({rec.id, a, std::get<double>(rec.cells[a])});
    rec.cells[a] = Missing{};
  }
  sort_plan(dataset, plan);
  return {std::move(masked), std::move(plan)};
}

std::pair<Dataset, MaskPlan> apply_mask(const Dataset& dataset,
                                        const std::vector<std::pair<std::string, std::size_t>>& cells) {
  Dataset masked = dataset;
  MaskPlan plan;
  for (const auto& [id, attr] : cells) {
    Record& rec = masked.records[row_index(masked, id)];
    if (attr >= rec.cells.size()) throw ConfigError("attribute index out of range for " + id);
    const auto* v = std::get_if<double>(&rec.cells[attr]);
    if (!v) throw ConfigError("cell (" + id + ", " + std::to_string(attr) + ") is not an encoded value");
    plan.cells.push_back({id, attr, *v});
    rec.cells[attr] = Missing{};
  }
  for (const auto& rec : masked.records) {
    if (rec.missing_count() == rec.cells.size()) {
      throw ConfigError("mask leaves record " + rec.id + " without observed cells");
    }
  }
  if (const std::size_t total = dataset.size() * dataset.arity(); total > 0) {
    plan.rate = static_cast<double>(plan.cells.size()) / static_cast<double>(total);
  }
  sort_plan(dataset, plan);
  return {std::move(masked), std::move(plan)};
}

Dataset unmask(const Dataset& masked, const MaskPlan& plan) {
  Dataset out = masked;
  for (const auto& c : plan.cells) out.records[row_index(out, c.record_id)].cells[c.attribute] = c.truth;
  return out;
}

ImputationScore score_imputation(const MaskPlan& plan, const Dataset& completed) {
  ImputationScore score;
  double sq = 0.0;
  std::size_t hits = 0;
  for (const auto& c : plan.cells) {
    const Record& rec = completed.records[row_index(completed, c.record_id)];
    const auto* v = std::get_if<double>(&rec.cells.at(c.attribute));
    if (!v) {
      throw ScoringError("masked cell (" + c.record_id + ", " + std::to_string(c.attribute) +
                         ") was not filled");
    }
    if (completed.schema.attributes.at(c.attribute).categorical()) {
      ++score.categorical_cells;
      if (*v == c.truth) ++hits;
    } else {
      ++score.numeric_cells;
      sq += (*v - c.truth) * (*v - c.truth);
    }
  }
  if (score.numeric_cells > 0) score.numeric_rmse = std::sqrt(sq / static_cast<double>(score.numeric_cells));
  if (score.categorical_cells > 0) {
    score.categorical_accuracy = static_cast<double>(hits) / static_cast<double>(score.categorical_cells);
  }
  return score;
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kClusterMapSigned:
      return "cluster-map-paper-signed";
    case Method::kClusterMapAbsolute:
      return "cluster-map-absolute";
    case Method::kClassMeanMode:
      return "class-mean-mode";
    case Method::kRawKnnDonor:
      return "raw-knn-donor";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::kClusterMapSigned, Method::kClusterMapAbsolute, Method::kClassMeanMode,
                   Method::kRawKnnDonor}) {
    if (to_string(m) == name) return m;
  }
  if (name == "cluster-map(paper-signed)") return Method::kClusterMapSigned;
  if (name == "cluster-map(absolute)") return Method::kClusterMapAbsolute;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

namespace {

Dataset class_mean_mode(const Dataset& masked) {
  Dataset out = masked;
  const std::size_t n = masked.arity();
  for (auto& rec : out.records) {
    for (std::size_t a = 0; a < n; ++a) {
      if (!is_missing(rec.cells[a])) continue;
      std::vector<double> pool;
      for (const auto& other : masked.records) {
        if (other.label != rec.label) continue;
        if (const auto* v = std::get_if<double>(&other.cells[a])) pool.push_back(*v);
      }
      if (pool.empty()) {
        for (const auto& other : masked.records) {
          if (const auto* v = std::get_if<double>(&other.cells[a])) pool.push_back(*v);
        }
      }
      if (pool.empty()) throw NoDonorsError("attribute " + std::to_string(a) + " is never observed");
      if (masked.schema.attributes[a].categorical()) {
        std::map<double, int> freq;
        for (double v : pool) ++freq[v];
        auto best = std::max_element(freq.begin(), freq.end(),
                                     [](const auto& x, const auto& y) { return x.second < y.second; });
        rec.cells[a] = best->first;
      } else {
        rec.cells[a] = std::accumulate(pool.begin(), pool.end(), 0.0) / static_cast<double>(pool.size());
      }
    }
  }
  return out;
}

Dataset raw_knn_donor(const Dataset& masked) {
  const GroupSplit split = split_groups(masked);
  if (split.g1.empty()) throw NoDonorsError("no complete records to act as donors");
  const Eigen::MatrixXd donors = to_matrix(split.g1);
  Dataset out = masked;
  for (auto& rec : out.records) {
    if (rec.complete()) continue;
    const Eigen::VectorXd q = rec.values();
    Eigen::Index best = 0;
    double best_d = type2_distance(q, donors.row(0));
    for (Eigen::Index i = 1; i < donors.rows(); ++i) {
      const double d = type2_distance(q, donors.row(i));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    for (std::size_t a = 0; a < rec.cells.size(); ++a) {
      if (is_missing(rec.cells[a])) rec.cells[a] = donors(best, static_cast<Eigen::Index>(a));
    }
  }
  return out;
}

}  // namespace

Dataset impute_with(Method method, const Dataset& masked, std::uint64_t seed) {
  switch (method) {
    case Method::kClusterMapSigned:
    case Method::kClusterMapAbsolute: {
      ImputeConfig cfg;
      cfg.mode = method == Method::kClusterMapSigned ? NearestMode::kPaperSigned : NearestMode::kAbsolute;
      cfg.init = FarthestFirst{seed};
      return impute_dataset(masked, cfg).completed;
    }
    case Method::kClassMeanMode:
      return class_mean_mode(masked);
    case Method::kRawKnnDonor:
      return raw_knn_donor(masked);
  }
  throw ConfigError("unknown method");
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.clusters < 1 || spec.per_cluster < 1 || spec.numeric_attributes + spec.categorical_attributes < 1) {
    throw ConfigError("synthetic dataset needs at least one cluster, record and attribute");
  }
  Rng rng(spec.seed);
  Dataset ds;
  ds.schema.id_column = "id";
  ds.schema.label_column = "class";
  for (int a = 0; a < spec.numeric_attributes; ++a) {
    ds.schema.attributes.push_back({"x" + std::to_string(a + 1), AttributeKind::kNumeric, {}, false});
  }
  for (int a = 0; a < spec.categorical_attributes; ++a) {
    AttributeSpec cat{"c" + std::to_string(a + 1), AttributeKind::kCategorical, {}, true};
    for (int c = 0; c < spec.clusters; ++c) cat.encoding["s" + std::to_string(c + 1)] = c + 1;
    ds.schema.attributes.push_back(std::move(cat));
  }

  // Blob centres sit on a random direction per attribute, `separation` apart.
  Eigen::MatrixXd centres(spec.clusters, spec.numeric_attributes);
  for (int c = 0; c < spec.clusters; ++c) {
    for (int a = 0; a < spec.numeric_attributes; ++a) {
      centres(c, a) = spec.separation * c * (rng.uniform01() < 0.5 ? 1.0 : -1.0) + rng.normal(0.0, 1.0);
    }
  }
  int next_id = 1;
  for (int c = 0; c < spec.clusters; ++c) {
    for (int i = 0; i < spec.per_cluster; ++i) {
      Record rec;
      rec.id = "S" + std::to_string(next_id++);
      rec.label = "class-" + std::to_string(c + 1);
      for (int a = 0; a < spec.numeric_attributes; ++a) {
        rec.cells.emplace_back(rng.normal(centres(c, a), spec.spread));
      }
      for (int a = 0; a < spec.categorical_attributes; ++a) {
        int symbol = c + 1;
        if (spec.clusters > 1 && rng.uniform01() >= 0.8) {
          symbol = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(spec.clusters - 1))) + 1;
          if (symbol >= c + 1) ++symbol;
        }
        rec.cells.emplace_back(static_cast<double>(symbol));
      }
      ds.records.push_back(std::move(rec));
    }
  }
  return ds;
}

ExperimentConfig parse_experiment(std::string_view json_text, const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment spec is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const auto& d = j.at("dataset");
    if (d.contains("synthetic")) {
      const auto& s = d.at("synthetic");
      SyntheticSpec spec;
      spec.clusters = s.value("clusters", spec.clusters);
      spec.per_cluster = s.value("per_cluster", spec.per_cluster);
      spec.numeric_attributes = s.value("numeric_attributes", spec.numeric_attributes);
      spec.categorical_attributes = s.value("categorical_attributes", spec.categorical_attributes);
      spec.separation = s.value("separation", spec.separation);
      spec.spread = s.value("spread", spec.spread);
      spec.seed = s.value("seed", spec.seed);
      cfg.dataset = make_synthetic(spec);
    } else {
      auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base_dir / path;
      };
      const Schema schema = load_schema(resolve(d.at("schema").get<std::string>()));
      cfg.dataset = encode(load_dataset(resolve(d.at("data").get<std::string>()), schema));
    }
    for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m.get<std::string>()));
    cfg.rates = j.value("rates", std::vector<double>{0.1});
    cfg.trials = j.value("trials", 1);
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.holdout_fraction = j.value("holdout_fraction", 0.2);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed experiment spec: ") + e.what());
  }
  if (cfg.trials < 0) throw ConfigError("trials must be non-negative");
  if (!(cfg.holdout_fraction >= 0.0 && cfg.holdout_fraction < 1.0)) {
    throw ConfigError("holdout_fraction must lie in [0, 1)");
  }
  return cfg;
}

EvaluationReport run_experiment(const ExperimentConfig& config) {
  EvaluationReport report;
  report.master_seed = config.master_seed;
  if (config.methods.empty()) throw ConfigError("experiment lists no methods");
  if (!config.dataset.complete() || !config.dataset.encoded()) {
    throw ConfigError("experiment dataset must be complete and encoded");
  }

  for (std::size_t ri = 0; ri < config.rates.size(); ++ri) {
    const double rate = config.rates[ri];
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t trial_seed = mix_seed(config.master_seed, ri * 1000003ULL + static_cast<std::uint64_t>(t));

      std::vector<std::size_t> order(config.dataset.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng split_rng(mix_seed(trial_seed, 1));
      split_rng.shuffle(order);
      const auto holdout_n = static_cast<std::size_t>(
          std::llround(config.holdout_fraction * static_cast<double>(order.size())));
      std::vector<bool> held(config.dataset.size(), false);
      for (std::size_t i = 0; i < holdout_n; ++i) held[order[i]] = true;
      Dataset train{config.dataset.schema, {}};
      Dataset test{config.dataset.schema, {}};
      for (std::size_t i = 0; i < config.dataset.size(); ++i) {
        (held[i] ? test : train).records.push_back(config.dataset.records[i]);
      }

      const auto [masked, plan] = inject_mcar(train, rate, mix_seed(trial_seed, 2));
      for (Method method : config.methods) {
        TrialResult tr;
        tr.method = method;
        tr.rate = rate;
        tr.trial = t;
        tr.seed = trial_seed;
        tr.masked = plan.cells.size();
        const Dataset completed = impute_with(method, masked, mix_seed(trial_seed, 3));
        tr.score = score_imputation(plan, completed);
        if (!test.records.empty() && completed.labeled()) {
          const ClusterModel model = training_model(completed, FarthestFirst{mix_seed(trial_seed, 4)});
          std::size_t correct = 0;
          for (const auto& rec : test.records) {
            const auto res = classify_mapped(rec, completed, model, NearestMode::kAbsolute);
            if (res.labels.size() == 1 && rec.label && res.labels.front() == *rec.label) ++correct;
          }
          tr.downstream_accuracy = static_cast<double>(correct) / static_cast<double>(test.records.size());
        }
        report.trials.push_back(tr);
      }
    }
    for (Method method : config.methods) {
      MethodSummary s;
      s.method = method;
      s.rate = rate;
      for (const auto& tr : report.trials) {
        if (tr.method != method || tr.rate != rate) continue;
        ++s.trials;
        s.mean_numeric_rmse += tr.score.numeric_rmse;
        s.mean_categorical_accuracy += tr.score.categorical_accuracy;
        s.mean_downstream_accuracy += tr.downstream_accuracy;
      }
      if (s.trials > 0) {
        s.mean_numeric_rmse /= s.trials;
        s.mean_categorical_accuracy /= s.trials;
        s.mean_downstream_accuracy /= s.trials;
      }
      report.summary.push_back(s);
    }
  }
  return report;
}

std::string report_json(const EvaluationReport& report) {
  nlohmann::ordered_json j;
  j["generator"] = "cmi evaluate (artifact-generated results)";
  j["master_seed"] = report.master_seed;
  j["summary"] = nlohmann::ordered_json::array();
  for (const auto& s : report.summary) {
    j["summary"].push_back({{"method", to_string(s.method)},
                            {"rate", s.rate},
                            {"trials", s.trials},
                            {"mean_numeric_rmse", s.mean_numeric_rmse},
                            {"mean_categorical_accuracy", s.mean_categorical_accuracy},
                            {"mean_downstream_accuracy", s.mean_downstream_accuracy}});
  }
  j["trials"] = nlohmann::ordered_json::array();
  for (const auto& t : report.trials) {
    j["trials"].push_back({{"method", to_string(t.method)},
                           {"rate", t.rate},
                           {"trial", t.trial},
                           {"seed", t.seed},
                           {"masked_cells", t.masked},
                           {"numeric_rmse", t.score.numeric_rmse},
                           {"numeric_cells", t.score.numeric_cells},
                           {"categorical_accuracy", t.score.categorical_accuracy},
                           {"categorical_cells", t.score.categorical_cells},
                           {"downstream_accuracy", t.downstream_accuracy}});
  }
  return j.dump(2) + "\n";
}

std::string summary_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "method,rate,trials,mean_numeric_rmse,mean_categorical_accuracy,mean_downstream_accuracy\n";
  for (const auto& s : report.summary) {
    out << to_string(s.method) << ',' << format_number(s.rate) << ',' << s.trials << ','
        << format_number(s.mean_numeric_rmse) << ',' << format_number(s.mean_categorical_accuracy) << ','
        << format_number(s.mean_downstream_accuracy) << '\n';
  }
  return out.str();
}

}  // namespace cmi
