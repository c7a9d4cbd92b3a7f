#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cmi {

enum class AttributeKind { kNumeric, kCategorical };

/// One column of the table. Categorical columns carry a symbol -> ordinal map
/// whose ordinals are contiguous from 1.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::kNumeric;
  std::map<std::string, int> encoding;
  // A frozen encoding was supplied by the user; symbols outside it are
  // rejected instead of being appended.
  bool frozen = false;

  bool categorical() const { return kind == AttributeKind::kCategorical; }

  /// Throws SchemaError if the symbol is not part of the encoding.
  int ordinal(const std::string& symbol) const;
  /// Inverse of ordinal(). Throws DecodeError for non-ordinal values.
  const std::string& symbol(double value) const;
};

struct Schema {
  std::vector<AttributeSpec> attributes;
  std::optional<std::string> id_column;
  std::optional<std::string> label_column;
  std::vector<std::string> missing_markers{"?", "NaN", ""};

  std::size_t arity() const { return attributes.size(); }
  std::size_t index_of(std::string_view name) const;
};

/// Schema config is JSON:
///   {"id": "Record", "label": "Decision Class", "missing_markers": ["?"],
///    "attributes": [{"name": "A1", "kind": "categorical",
///                    "encoding": {"c11": 1, "c12": 2}}, ...]}
Schema parse_schema(std::string_view json_text);
Schema load_schema(const std::filesystem::path& path);
std::string schema_to_json(const Schema& schema);

struct Missing {
  bool operator==(const Missing&) const = default;
};

/// A cell is missing, a real, or a categorical symbol awaiting encode().
using Cell = std::variant<Missing, double, std::string>;

inline bool is_missing(const Cell& c) { return std::holds_alternative<Missing>(c); }

struct Record {
  std::string id;
  std::vector<Cell> cells;
  std::optional<std::string> label;

  bool complete() const;
  std::size_t missing_count() const;
  /// Encoded cells as a vector, NaN where missing. Throws DomainError if a
  /// symbol has not been encoded yet.
  Eigen::VectorXd values() const;
};

struct Dataset {
  Schema schema;
  std::vector<Record> records;

  std::size_t size() const { return records.size(); }
  std::size_t arity() const { return schema.arity(); }
  /// Distinct non-empty labels in sorted order.
  std::vector<std::string> classes() const;
  bool labeled() const;
  bool encoded() const;
  bool complete() const;
  const Record& find(std::string_view id) const;
  /// Row-per-record matrix, NaN for missing cells.
  Eigen::MatrixXd matrix() const;
};

struct GroupSplit {
  std::vector<Record> g1;  // complete records
  std::vector<Record> g2;  // records with at least one missing cell
};

Dataset parse_dataset(std::string_view text, const Schema& schema);
Dataset parse_dataset(std::string_view text, const Schema& schema,
                      const std::vector<std::string>& missing_markers);
Dataset load_dataset(const std::filesystem::path& path, const Schema& schema);

/// Replaces categorical symbols by ordinals. Encodings that were not supplied
/// are built from the sorted distinct symbols of the column and written back
/// into the returned dataset's schema.
Dataset encode(const Dataset& dataset);

using DecodedValue = std::variant<double, std::string>;
DecodedValue decode(double value, const AttributeSpec& spec);

GroupSplit split_groups(const Dataset& dataset);

Eigen::MatrixXd to_matrix(const std::vector<Record>& records);

/// Column-wise min-max scaling over observed entries; NaN stays NaN and
/// constant columns map to 0.
Eigen::MatrixXd min_max_scale(const Eigen::MatrixXd& values);

/// Splits one comma-delimited line; fields are trimmed and may be
/// double-quoted.
std::vector<std::string> split_csv_line(std::string_view line);

/// Shortest text form that round-trips the double ("10", "1.75").
std::string format_number(double value);

/// Writes the dataset in its input layout (header + rows). Categorical cells
/// are decoded back to symbols when `decode_symbols` is set.
std::string write_dataset(const Dataset& dataset, bool decode_symbols = true);
std::string serialize(const GroupSplit& split, const Schema& schema);

}  // namespace cmi
