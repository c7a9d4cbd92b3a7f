#include "cmi/casestudy.hpp"

#include "cmi/classify.hpp"
#include "cmi/dataset.hpp"
#include "cmi/error.hpp"
#include "cmi/impute.hpp"
#include "cmi/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace cmi {

std::vector<std::string> ReferenceTable::keys() const {
  std::vector<std::string> out;
  for (const auto& r : rows) out.push_back(r.front());
  return out;
}

const std::vector<std::string>& ReferenceTable::row(std::string_view key) const {
  for (const auto& r : rows) {
    if (r.front() == key) return r;
  }
  throw ParseError(name + ": no row '" + std::string(key) + "'");
}

double ReferenceTable::number(std::string_view key, std::size_t column) const {
  const auto& r = row(key);
  if (column >= r.size()) throw ParseError(name + ": row '" + std::string(key) + "' is too short");
  try {
    return std::stod(r[column]);
  } catch (const std::exception&) {
    throw ParseError(name + ": '" + r[column] + "' is not a number");
  }
}

ReferenceTable load_reference_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("missing fixture " + path.string());
  ReferenceTable table;
  table.name = path.filename().string();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) throw ParseError(table.name + " is empty");
  return table;
}

FixedPartition load_partition(const std::filesystem::path& path) {
  const auto table = load_reference_table(path);
  FixedPartition partition;
  for (const auto& r : table.rows) {
    if (r.size() < 2) throw ParseError(table.name + ": cluster row without members");
    std::vector<std::string> members;
    std::stringstream ss(r[1]);
    std::string id;
    while (std::getline(ss, id, ',')) members.push_back(id);
    partition.clusters.push_back(std::move(members));
  }
  return partition;
}

std::size_t CaseStudyReport::mismatches() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CaseStudyCheck& c) {
    return !c.pass && !c.erratum;
  }));
}

const CaseStudyCheck* CaseStudyReport::first_mismatch() const {
  for (const auto& c : checks) {
    if (!c.pass && !c.erratum) return &c;
  }
  return nullptr;
}

namespace {

std::string fixed6(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

std::string join(const std::vector<std::string>& v, const char* sep = ";") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

class Checker {
 public:
  explicit Checker(CaseStudyReport& report) : report_(report) {}

  void number(const std::string& table, const std::string& row, const std::string& column,
              const std::string& printed, double computed, bool erratum = false) {
    CaseStudyCheck c{table, row, column, printed, fixed6(computed), true, 0.0, erratum, false};
    c.abs_error = std::abs(std::stod(printed) - computed);
    c.pass = c.abs_error <= report_.tolerance;
    report_.checks.push_back(std::move(c));
  }

  // Distances to the two centroids, compared as an unordered pair.
  void pair(const std::string& table, const std::string& row, double printed_a, double printed_b,
            const std::string& printed_a_text, const std::string& printed_b_text,
            Eigen::VectorXd computed, bool erratum_low = false, bool erratum_high = false) {
    std::sort(computed.begin(), computed.end());
    const bool swap = printed_b < printed_a;
    number(table, row, "nearer centroid", swap ? printed_b_text : printed_a_text, computed(0), erratum_low);
    number(table, row, "farther centroid", swap ? printed_a_text : printed_b_text, computed(1),
           erratum_high);
  }

  void text(const std::string& table, const std::string& row, const std::string& column,
            const std::string& printed, const std::string& computed, bool erratum = false) {
    report_.checks.push_back(
        {table, row, column, printed, computed, false, 0.0, erratum, printed == computed});
  }

 private:
  CaseStudyReport& report_;
};

std::string canonical_csv(const std::string& text) {
  std::ostringstream out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    out << join(split_csv_line(line), ",") << '\n';
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("missing fixture " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CaseStudyReport run_casestudy(const std::filesystem::path& dir, double tolerance) {
  CaseStudyReport report;
  report.tolerance = tolerance;
  Checker check(report);
  auto table = [&](const char* file) { return load_reference_table(dir / file); };

  // ---- imputation ---------------------------------------------------------
  const Schema numeric_schema = load_schema(dir / "schema_numeric.json");
  const Dataset truth = encode(load_dataset(dir / "table02.csv", numeric_schema));
  const Dataset masked = encode(load_dataset(dir / "table03.csv", numeric_schema));
  const GroupSplit split = split_groups(masked);

  const auto t04 = table("table04.csv");
  std::vector<std::string> g1_ids;
  for (const auto& r : split.g1) g1_ids.push_back(r.id);
  check.text("IV", "-", "complete records", join(t04.keys()), join(g1_ids));
  const auto t05 = table("table05.csv");
  std::vector<std::string> g2_ids;
  for (const auto& r : split.g2) g2_ids.push_back(r.id);
  check.text("V", "-", "incomplete records", join(t05.keys()), join(g2_ids));
  for (const auto& r : split.g2) {
    const auto& printed = t05.row(r.id);
    for (std::size_t a = 0; a < r.cells.size(); ++a) {
      const std::string computed = is_missing(r.cells[a]) ? "?" : format_number(std::get<double>(r.cells[a]));
      check.text("V", r.id, numeric_schema.attributes[a].name, printed[a + 1], computed);
    }
  }

  const FixedPartition partition6 = load_partition(dir / "table06.csv");
  const ClusterModel model = cluster(split.g1, 2, partition6);

  const auto t07 = table("table07.csv");
  const auto t08 = table("table08.csv");
  const auto t09 = table("table09.csv");
  for (const auto& r : split.g1) {
    const Eigen::VectorXd d = cluster_distances(r.values(), model);
    check.pair("VII/VIII", r.id, t07.number(r.id, 1), t08.number(r.id, 1), t07.row(r.id)[1],
               t08.row(r.id)[1], d);
    check.number("IX", r.id, "Map", t09.row(r.id)[1], map_complete(r, model));
  }

  const auto t10 = table("table10.csv");
  const auto t11 = table("table11.csv");
  for (const auto& r : split.g2) {
    check.pair("X", r.id, t10.number(r.id, 1), t10.number(r.id, 2), t10.row(r.id)[1], t10.row(r.id)[2],
               cluster_distances(r.values(), model));
    check.number("XI", r.id, "Map'", t11.row(r.id)[1], map_query(r, model), /*erratum=*/true);
  }

  ImputeConfig signed_cfg;
  signed_cfg.mode = NearestMode::kPaperSigned;
  signed_cfg.k = 2;
  signed_cfg.init = partition6;
  const ImputationResult signed_run = impute_dataset(masked, signed_cfg);

  const auto t13 = table("table13.csv");
  const auto t15 = table("table15.csv");
  check.text("XIII", "R3", "nearest record", join(t13.keys()),
             join(nearest_record(signed_run.differences, "R3", NearestMode::kPaperSigned)));
  check.text("XV", "R5", "nearest record", join(t15.keys()),
             join(nearest_record(signed_run.differences, "R5", NearestMode::kPaperSigned)));
  for (const auto& cell : signed_run.cells) {
    const double expected = std::get<double>(truth.find(cell.query_id).cells[cell.attribute]);
    check.text("II", cell.query_id, numeric_schema.attributes[cell.attribute].name + " imputed",
               format_number(expected), format_number(cell.value));
  }
  check.text("II", "-", "completed table", "identical",
             canonical_csv(read_file(dir / "table02.csv")) == canonical_csv(write_dataset(signed_run.completed))
                 ? "identical"
                 : "differs");

  // The same run over the symbolic table restores the categorical symbols.
  const Schema symbolic_schema = load_schema(dir / "schema_symbolic.json");
  const Dataset symbolic = encode(load_dataset(dir / "table03_symbolic.csv", symbolic_schema));
  const ImputationResult symbolic_run = impute_dataset(symbolic, signed_cfg);
  for (const auto& cell : symbolic_run.cells) {
    const auto& printed = table("table01.csv").row(cell.query_id)[cell.attribute + 1];
    check.text("I", cell.query_id, symbolic_schema.attributes[cell.attribute].name + " decoded", printed,
               cell.decoded);
  }
  check.text("I", "-", "completed table", "identical",
             canonical_csv(read_file(dir / "table01.csv")) == canonical_csv(write_dataset(symbolic_run.completed))
                 ? "identical"
                 : "differs");

  // Replay: the printed Map' values drive the difference tables.
  MappingTable replay = signed_run.maps;
  for (std::size_t j = 0; j < replay.query_ids.size(); ++j) {
    replay.query_map(static_cast<Eigen::Index>(j)) = t11.number(replay.query_ids[j], 1);
  }
  const DifferenceTable replay_d = difference_table(replay);
  for (const auto& [file, query, name] :
       {std::tuple{"table12.csv", "R3", "XII"}, std::tuple{"table14.csv", "R5", "XIV"}}) {
    const auto t = table(file);
    for (const auto& id : t.keys()) {
      check.number(name, id, std::string("d(") + query + ") replay", t.row(id)[1], replay_d.at(id, query));
    }
  }

  ImputeConfig abs_cfg = signed_cfg;
  abs_cfg.mode = NearestMode::kAbsolute;
  const ImputationResult abs_run = impute_dataset(masked, abs_cfg);
  for (const auto& cell : abs_run.cells) {
    report.notes.push_back("absolute mode: " + cell.query_id + "." +
                           numeric_schema.attributes[cell.attribute].name + " <- " +
                           format_number(cell.value) + " from " + join(cell.donors) + " (truth " +
                           format_number(std::get<double>(truth.find(cell.query_id).cells[cell.attribute])) +
                           ")");
  }
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const ClusterModel km = cluster(split.g1, 2, FarthestFirst{seed});
    report.notes.push_back("k-means farthest-first seed " + std::to_string(seed) + " on the complete group: {" +
                           join(km.members(0), ",") + "} / {" + join(km.members(1), ",") + "}");
  }

  // ---- classification -----------------------------------------------------
  const Schema class_schema = load_schema(dir / "schema_classes.json");
  const Dataset training = encode(load_dataset(dir / "table16.csv", class_schema));
  const Dataset queries = encode(load_dataset(dir / "query_r10.csv", class_schema));
  const Record& r10 = queries.find("R10");
  const ClusterModel model18 = cluster(training.records, 2, load_partition(dir / "table18.csv"));

  const auto t19 = table("table19.csv");
  const auto t20 = table("table20.csv");
  const auto t21 = table("table21.csv");
  for (const auto& r : training.records) {
    const bool copied_row = r.id == "R9";
    check.pair("XIX/XX", r.id, t19.number(r.id, 1), t20.number(r.id, 1), t19.row(r.id)[1], t20.row(r.id)[1],
               cluster_distances(r.values(), model18), copied_row, copied_row);
    check.number("XXI", r.id, "Map", t21.row(r.id)[1], map_complete(r, model18), copied_row);
  }
  const auto t22 = table("table22.csv");
  const Eigen::VectorXd r10_d = cluster_distances(r10.values(), model18);
  check.pair("XXII", "R10", t22.number("R10", 1), t22.number("R10", 2), t22.row("R10")[1], t22.row("R10")[2],
             r10_d, false, true);
  const auto t23 = table("table23.csv");
  check.number("XXIII", "R10", "Map'", t23.row("R10")[1], map_query(r10, model18));

  const auto signed_cls = classify_mapped(r10, training, model18, NearestMode::kPaperSigned);
  const auto abs_cls = classify_mapped(r10, training, model18, NearestMode::kAbsolute);
  const auto t24 = table("table24.csv");
  for (std::size_t i = 0; i < signed_cls.ids.size(); ++i) {
    const auto& id = signed_cls.ids[i];
    check.number("XXIV", id, "d(R10)", t24.row(id)[1], signed_cls.distances(static_cast<Eigen::Index>(i)),
                 id == "R9");
  }
  check.text("XXIV", "R10", "nearest (paper-signed)", "R8", join(signed_cls.nearest));
  check.text("XXIV", "R10", "label (paper-signed)", "Level-2", join(signed_cls.labels));
  check.text("XXIV", "R10", "label (absolute)", "Level-2", join(abs_cls.labels));
  check.text("XXIV", "R10", "nearest (absolute)", "R8", join(abs_cls.nearest), /*erratum=*/true);

  const auto t17 = table("table17.csv");
  const auto knn = classify_raw_knn(r10, training);
  double printed_min = t17.number(t17.rows.front()[0], 1);
  for (const auto& id : t17.keys()) printed_min = std::min(printed_min, t17.number(id, 1));
  std::vector<std::string> printed_nearest;
  for (std::size_t i = 0; i < knn.ids.size(); ++i) {
    const auto& id = knn.ids[i];
    check.number("XVII", id, "distance to R10", t17.row(id)[1], knn.distances(static_cast<Eigen::Index>(i)));
    if (t17.number(id, 1) == printed_min) printed_nearest.push_back(id);
  }
  check.text("XVII", "R10", "nearest records", join(printed_nearest), join(knn.nearest));
  check.text("XVII", "R10", "labels", "Level-1;Level-2", join(knn.labels));
  check.text("XVII", "R10", "nearest records (prose)", "R4;R8", join(knn.nearest), /*erratum=*/true);

  // ---- errata ---------------------------------------------------------------
  report.errata.push_back(
      {"A", "Table XI, rows R3 and R5", t11.row("R3")[1] + ", " + t11.row("R5")[1],
       fixed6(map_query(split.g2[0], model)) + ", " + fixed6(map_query(split.g2[1], model)),
       "printed values repeat Table IX rows R1/R2 and disagree with the sums of Table X; Tables XII and XIV "
       "follow the printed values and are checked by replaying them"});
  report.errata.push_back({"B", "Table XXII, R10 farther-centroid distance", t22.row("R10")[2],
                           fixed6(r10_d.maxCoeff()),
                           "digit transposition; Table XXIII's sum requires the computed value"});
  report.errata.push_back({"C", "classification text, nearest records of R10 by raw distance", "R4, R8",
                           join(knn.nearest, ", "),
                           "Table XVII's minimum 1.414214 is attained by R4 and R9 (R8 is 2.44949); the "
                           "two-class tie is unchanged"});
  report.errata.push_back(
      {"D", "Tables XIX, XX, XXI and XXIV, row R9",
       t19.row("R9")[1] + ", " + t20.row("R9")[1] + ", " + t21.row("R9")[1] + ", " + t24.row("R9")[1],
       fixed6(cluster_distances(training.find("R9").values(), model18).minCoeff()) + ", " +
           fixed6(cluster_distances(training.find("R9").values(), model18).maxCoeff()) + ", " +
           fixed6(map_complete(training.find("R9"), model18)) + ", " +
           fixed6(signed_cls.distances(8)),
       "row R9 repeats row R1; Table VIII prints the correct 0.829156 for the same record and centroid. "
       "With the computed values the absolute-mode nearest record of R10 is R9 (also Level-2)"});
  return report;
}

std::string render(const CaseStudyReport& report) {
  std::ostringstream out;
  std::size_t errata_cells = 0;
  for (const auto& c : report.checks) errata_cells += c.erratum ? 1 : 0;
  out << "case study reproduction\n";
  out << "tolerance: " << report.tolerance << '\n';
  out << "checks: " << report.checks.size() << "  mismatches: " << report.mismatches()
      << "  erratum cells: " << errata_cells << "  documented errata: " << report.errata.size() << "\n\n";
  for (const auto& c : report.checks) {
    const char* status = c.erratum ? (c.pass ? "ERRATUM(match)" : "ERRATUM") : (c.pass ? "ok" : "MISMATCH");
    out << std::left << std::setw(15) << status << ' ' << std::setw(9) << c.table << ' ' << std::setw(4)
        << c.row << ' ' << c.column << ": printed " << c.printed << ", computed " << c.computed;
    if (c.numeric) out << " (|err| " << std::scientific << std::setprecision(2) << c.abs_error << std::defaultfloat << ")";
    out << '\n';
  }
  out << "\nerrata\n";
  for (const auto& e : report.errata) {
    out << "  [" << e.key << "] " << e.location << "\n      printed:  " << e.printed
        << "\n      computed: " << e.computed << "\n      " << e.explanation << '\n';
  }
  if (!report.notes.empty()) {
    out << "\nnotes\n";
    for (const auto& n : report.notes) out << "  " << n << '\n';
  }
  return out.str();
}

}  // namespace cmi
