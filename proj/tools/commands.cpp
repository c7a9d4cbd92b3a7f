#include "commands.hpp"

#include "cmi/casestudy.hpp"
#include "cmi/classify.hpp"
#include "cmi/dataset.hpp"
#include "cmi/error.hpp"
#include "cmi/eval.hpp"
#include "cmi/impute.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cmi::cli {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or to `fallback` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

InitPolicy init_policy(const RunConfig& c) {
  if (!c.partition.empty()) {
    FixedPartition p;
    std::stringstream clusters(c.partition);
    std::string group;
    while (std::getline(clusters, group, ';')) {
      std::vector<std::string> members;
      std::stringstream ids(group);
      std::string id;
      while (std::getline(ids, id, ',')) {
        if (!id.empty()) members.push_back(id);
      }
      p.clusters.push_back(std::move(members));
    }
    return p;
  }
  if (c.init == "farthest") return FarthestFirst{c.seed};
  if (c.init == "random") return SeededRandom{c.seed};
  throw ConfigError("unknown init policy '" + c.init + "' (expected farthest or random)");
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ";") + s;
  return out;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(exit_code(e));
  }
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CMI_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
    }
  }
  return 0;
}

std::string default_fixture_dir() {
  if (const char* s = std::getenv("CMI_FIXTURES")) return s;
  return CMI_FIXTURE_DIR;
}

int cmd_impute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Schema schema = load_schema(c.schema);
    const Dataset ds = encode(load_dataset(c.data, schema));
    ImputeConfig cfg;
    cfg.mode = parse_nearest_mode(c.mode);
    cfg.k = c.k;
    cfg.init = init_policy(c);
    cfg.min_max_scale = c.min_max_scale;
    cfg.scaling = c.scale_type2 ? Type2Scaling::kSqrtRatio : Type2Scaling::kNone;
    const ImputationResult result = impute_dataset(ds, cfg);
    emit(c.out, write_dataset(result.completed), out);
    if (!c.report.empty()) emit(c.report, provenance_report(result, result.completed.schema), out);
    if (c.verbosity > 0) {
      err << "imputed " << result.cells.size() << " cells in mode " << to_string(cfg.mode) << '\n';
    }
    return 0;
  });
}

int cmd_classify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Schema schema = load_schema(c.schema);
    const Dataset training = encode(load_dataset(c.train, schema));
    const NearestMode mode = parse_nearest_mode(c.mode);
    const std::string query_text = read_text(c.query);

    std::ostringstream report;
    report << "query,labels,nearest,mode";
    if (c.with_knn_baseline) report << ",knn_labels,knn_nearest";
    report << '\n';
    std::ostringstream dtable;
    dtable << "query,record,d\n";

    if (query_text.find_first_not_of(" \t\r\n") == std::string::npos) {
      emit(c.out, report.str(), out);
      if (!c.d_table.empty()) emit(c.d_table, dtable.str(), out);
      return 0;
    }
    Dataset queries = parse_dataset(query_text, schema);
    // Queries share the training encodings so symbols map to the same ordinals.
    queries.schema = training.schema;
    for (auto& a : queries.schema.attributes) a.frozen = true;
    queries = encode(queries);

    const ClusterModel model = training_model(training, init_policy(c));
    for (const auto& q : queries.records) {
      const auto res = classify_mapped(q, training, model, mode);
      report << q.id << ',' << join(res.labels) << ',' << join(res.nearest) << ',' << to_string(mode);
      if (c.with_knn_baseline) {
        const auto knn = classify_raw_knn(q, training);
        report << ',' << join(knn.labels) << ',' << join(knn.nearest);
      }
      report << '\n';
      for (std::size_t i = 0; i < res.ids.size(); ++i) {
        dtable << q.id << ',' << res.ids[i] << ','
               << format_number(res.distances(static_cast<Eigen::Index>(i))) << '\n';
      }
      if (c.verbosity > 0) err << q.id << ": " << join(res.labels) << " via " << join(res.nearest) << '\n';
    }
    emit(c.out, report.str(), out);
    if (!c.d_table.empty()) emit(c.d_table, dtable.str(), out);
    return 0;
  });
}

int cmd_evaluate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto base = std::filesystem::path(c.experiment).parent_path();
    const ExperimentConfig cfg = parse_experiment(read_text(c.experiment), base);
    const EvaluationReport report = run_experiment(cfg);
    emit(c.out, report_json(report), out);
    if (!c.summary.empty()) emit(c.summary, summary_csv(report), out);
    return 0;
  });
}

int cmd_casestudy(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string dir = c.fixtures.empty() ? default_fixture_dir() : c.fixtures;
    const CaseStudyReport report = run_casestudy(dir, c.tolerance);
    emit(c.out, render(report), out);
    if (const auto* bad = report.first_mismatch()) {
      err << "mismatch: table " << bad->table << " row " << bad->row << " " << bad->column << ": printed "
          << bad->printed << ", computed " << bad->computed << '\n';
      return static_cast<int>(ExitCode::kCaseStudyMismatch);
    }
    return 0;
  });
}

}  // namespace cmi::cli
