#include "cmi/dataset.hpp"

#include "cmi/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace cmi {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

namespace {

std::optional<double> parse_real(const std::string& s) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void validate_encoding(const AttributeSpec& spec) {
  std::set<int> ordinals;
  for (const auto& [sym, ord] : spec.encoding) {
    if (!ordinals.insert(ord).second) {
      throw SchemaError("attribute '" + spec.name + "': ordinal " + std::to_string(ord) +
                        " assigned to more than one symbol");
    }
  }
  int expect = 1;
  for (int ord : ordinals) {
    if (ord != expect++) {
      throw SchemaError("attribute '" + spec.name + "': ordinals must be contiguous from 1");
    }
  }
}

}  // namespace

int AttributeSpec::ordinal(const std::string& sym) const {
  auto it = encoding.find(sym);
  if (it == encoding.end()) {
    throw SchemaError("attribute '" + name + "': unknown categorical symbol '" + sym + "'");
  }
  return it->second;
}

const std::string& AttributeSpec::symbol(double value) const {
  if (!categorical()) throw DecodeError("attribute '" + name + "' is numeric");
  for (const auto& [sym, ord] : encoding) {
    if (static_cast<double>(ord) == value) return sym;
  }
  throw DecodeError("attribute '" + name + "': " + format_number(value) +
                    " is not an ordinal of the encoding");
}

std::size_t Schema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  throw SchemaError("no attribute named '" + std::string(name) + "'");
}

Schema parse_schema(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
  }
  Schema schema;
  try {
    if (j.contains("id")) schema.id_column = j.at("id").get<std::string>();
    if (j.contains("label")) schema.label_column = j.at("label").get<std::string>();
    if (j.contains("missing_markers")) {
      schema.missing_markers = j.at("missing_markers").get<std::vector<std::string>>();
    }
    for (const auto& a : j.at("attributes")) {
      AttributeSpec spec;
      spec.name = a.at("name").get<std::string>();
      const auto kind = a.value("kind", std::string("numeric"));
      if (kind == "numeric") {
        spec.kind = AttributeKind::kNumeric;
      } else if (kind == "categorical") {
        spec.kind = AttributeKind::kCategorical;
      } else {
        throw SchemaError("attribute '" + spec.name + "': unknown kind '" + kind + "'");
      }
      if (a.contains("encoding")) {
        if (!spec.categorical()) {
          throw SchemaError("attribute '" + spec.name + "': numeric attributes take no encoding");
        }
        spec.encoding = a.at("encoding").get<std::map<std::string, int>>();
        spec.frozen = true;
        validate_encoding(spec);
      }
      schema.attributes.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed schema: ") + e.what());
  }
  if (schema.attributes.empty()) throw SchemaError("schema declares no attributes");
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open schema file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_schema(ss.str());
}

std::string schema_to_json(const Schema& schema) {
  nlohmann::ordered_json j;
  if (schema.id_column) j["id"] = *schema.id_column;
  if (schema.label_column) j["label"] = *schema.label_column;
  j["missing_markers"] = schema.missing_markers;
  j["attributes"] = nlohmann::ordered_json::array();
  for (const auto& a : schema.attributes) {
    nlohmann::ordered_json attr;
    attr["name"] = a.name;
    attr["kind"] = a.categorical() ? "categorical" : "numeric";
    if (a.categorical()) attr["encoding"] = a.encoding;
    j["attributes"].push_back(attr);
  }
  return j.dump(2);
}

bool Record::complete() const { return missing_count() == 0; }

std::size_t Record::missing_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), is_missing));
}

Eigen::VectorXd Record::values() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (is_missing(cells[i])) {
      v(idx) = std::numeric_limits<double>::quiet_NaN();
    } else if (const double* d = std::get_if<double>(&cells[i])) {
      v(idx) = *d;
    } else {
      throw DomainError("record " + id + ": cell " + std::to_string(i) + " is not encoded");
    }
  }
  return v;
}

std::vector<std::string> Dataset::classes() const {
  std::set<std::string> s;
  for (const auto& r : records) {
    if (r.label && !r.label->empty()) s.insert(*r.label);
  }
  return {s.begin(), s.end()};
}

bool Dataset::labeled() const {
  return !records.empty() && std::all_of(records.begin(), records.end(), [](const Record& r) {
    return r.label && !r.label->empty();
  });
}

bool Dataset::encoded() const {
  return std::all_of(records.begin(), records.end(), [](const Record& r) {
    return std::none_of(r.cells.begin(), r.cells.end(),
                        [](const Cell& c) { return std::holds_alternative<std::string>(c); });
  });
}

bool Dataset::complete() const {
  return std::all_of(records.begin(), records.end(), [](const Record& r) { return r.complete(); });
}

const Record& Dataset::find(std::string_view id) const {
  for (const auto& r : records) {
    if (r.id == id) return r;
  }
  throw DomainError("no record with id '" + std::string(id) + "'");
}

Eigen::MatrixXd Dataset::matrix() const { return to_matrix(records); }

Dataset parse_dataset(std::string_view text, const Schema& schema) {
  return parse_dataset(text, schema, schema.missing_markers);
}

Dataset parse_dataset(std::string_view text, const Schema& schema,
                      const std::vector<std::string>& missing_markers) {
  Dataset ds;
  ds.schema = schema;
  const std::set<std::string> markers(missing_markers.begin(), missing_markers.end());

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t row = 0;
  bool have_header = false;
  std::optional<std::size_t> id_pos;
  std::optional<std::size_t> label_pos;
  std::vector<std::size_t> attr_pos;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      have_header = true;
      width = fields.size();
      auto locate = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(fields.begin(), fields.end(), name);
        if (it == fields.end()) return std::nullopt;
        return static_cast<std::size_t>(it - fields.begin());
      };
      if (schema.id_column) {
        id_pos = locate(*schema.id_column);
        if (!id_pos) throw ParseError("header lacks id column '" + *schema.id_column + "'", row);
      }
      if (schema.label_column) label_pos = locate(*schema.label_column);
      for (const auto& a : schema.attributes) {
        auto p = locate(a.name);
        if (!p) throw ParseError("header lacks attribute '" + a.name + "'", row);
        attr_pos.push_back(*p);
      }
      const std::size_t expected = schema.arity() + (id_pos ? 1 : 0) + (label_pos ? 1 : 0);
      if (width != expected) {
        throw ParseError("header has " + std::to_string(width) + " fields, schema expects " +
                             std::to_string(expected),
                         row);
      }
      continue;
    }
    if (fields.size() != width) {
      throw ParseError("expected " + std::to_string(width) + " fields, found " +
                           std::to_string(fields.size()),
                       row);
    }
    Record rec;
    rec.id = id_pos ? fields[*id_pos] : "R" + std::to_string(ds.records.size() + 1);
    if (label_pos && !fields[*label_pos].empty()) rec.label = fields[*label_pos];
    rec.cells.reserve(schema.arity());
    for (std::size_t a = 0; a < schema.arity(); ++a) {
      const std::string& raw = fields[attr_pos[a]];
      const auto& spec = schema.attributes[a];
      if (markers.count(raw)) {
        rec.cells.emplace_back(Missing{});
      } else if (spec.categorical()) {
        if (spec.frozen) (void)spec.ordinal(raw);
        rec.cells.emplace_back(raw);
      } else {
        auto v = parse_real(raw);
        if (!v) {
          throw ParseError("attribute '" + spec.name + "': cannot parse '" + raw + "' as a number",
                           row);
        }
        rec.cells.emplace_back(*v);
      }
    }
    ds.records.push_back(std::move(rec));
  }
  if (!have_header) throw ParseError("input has no header row");
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open data file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), schema);
}

Dataset encode(const Dataset& dataset) {
  Dataset out = dataset;
  for (std::size_t a = 0; a < out.schema.arity(); ++a) {
    auto& spec = out.schema.attributes[a];
    if (!spec.categorical()) continue;
    if (!spec.frozen && spec.encoding.empty()) {
      std::set<std::string> symbols;
      for (const auto& r : dataset.records) {
        if (const auto* s = std::get_if<std::string>(&r.cells[a])) symbols.insert(*s);
      }
      int next = 1;
      for (const auto& s : symbols) spec.encoding[s] = next++;
    }
    for (auto& r : out.records) {
      if (const auto* s = std::get_if<std::string>(&r.cells[a])) {
        r.cells[a] = static_cast<double>(spec.ordinal(*s));
      }
    }
  }
  return out;
}

DecodedValue decode(double value, const AttributeSpec& spec) {
  if (!spec.categorical()) return value;
  return spec.symbol(value);
}

GroupSplit split_groups(const Dataset& dataset) {
  GroupSplit split;
  for (const auto& r : dataset.records) {
    (r.complete() ? split.g1 : split.g2).push_back(r);
  }
  return split;
}

Eigen::MatrixXd to_matrix(const std::vector<Record>& records) {
  const Eigen::Index n = records.empty() ? 0 : static_cast<Eigen::Index>(records.front().cells.size());
  Eigen::MatrixXd m(static_cast<Eigen::Index>(records.size()), n);
  for (std::size_t i = 0; i < records.size(); ++i) {
    m.row(static_cast<Eigen::Index>(i)) = records[i].values().transpose();
  }
  return m;
}

Eigen::MatrixXd min_max_scale(const Eigen::MatrixXd& values) {
  Eigen::MatrixXd out = values;
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      const double v = values(r, c);
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double span = hi - lo;
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      double& v = out(r, c);
      if (std::isnan(v)) continue;
      v = span > 0.0 ? (v - lo) / span : 0.0;
    }
  }
  return out;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, ptr);
}

namespace {

std::string format_cell(const Cell& cell, const AttributeSpec& spec, bool decode_symbols) {
  if (is_missing(cell)) return "?";
  if (const auto* s = std::get_if<std::string>(&cell)) return quote_if_needed(*s);
  const double v = std::get<double>(cell);
  if (decode_symbols && spec.categorical()) return quote_if_needed(spec.symbol(v));
  return format_number(v);
}

void write_header(std::ostringstream& out, const Schema& schema) {
  bool first = true;
  auto put = [&](const std::string& s) {
    if (!first) out << ',';
    out << quote_if_needed(s);
    first = false;
  };
  if (schema.id_column) put(*schema.id_column);
  for (const auto& a : schema.attributes) put(a.name);
  if (schema.label_column) put(*schema.label_column);
  out << '\n';
}

void write_row(std::ostringstream& out, const Record& r, const Schema& schema, bool decode_symbols) {
  bool first = true;
  auto put = [&](const std::string& s) {
    if (!first) out << ',';
    out << s;
    first = false;
  };
  if (schema.id_column) put(quote_if_needed(r.id));
  for (std::size_t a = 0; a < schema.arity(); ++a) {
    put(format_cell(r.cells[a], schema.attributes[a], decode_symbols));
  }
  if (schema.label_column) put(quote_if_needed(r.label.value_or("")));
  out << '\n';
}

}  // namespace

std::string write_dataset(const Dataset& dataset, bool decode_symbols) {
  std::ostringstream out;
  write_header(out, dataset.schema);
  for (const auto& r : dataset.records) write_row(out, r, dataset.schema, decode_symbols);
  return out.str();
}

std::string serialize(const GroupSplit& split, const Schema& schema) {
  Schema with_id = schema;
  if (!with_id.id_column) with_id.id_column = "id";
  std::ostringstream out;
  out << "# g1 " << split.g1.size() << '\n';
  write_header(out, with_id);
  for (const auto& r : split.g1) write_row(out, r, with_id, false);
  out << "# g2 " << split.g2.size() << '\n';
  write_header(out, with_id);
  for (const auto& r : split.g2) write_row(out, r, with_id, false);
  return out.str();
}

}  // namespace cmi
