#pragma once

#include "cmi/kmeans.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cmi {

/// A reference table shipped as delimited text: header plus rows keyed by
/// their first field.
struct ReferenceTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::vector<std::string> keys() const;
  const std::vector<std::string>& row(std::string_view key) const;
  double number(std::string_view key, std::size_t column) const;
};

ReferenceTable load_reference_table(const std::filesystem::path& path);

/// Cluster membership tables list the member ids of each cluster in one
/// quoted field ("C1","R1,R4,R6,R9").
FixedPartition load_partition(const std::filesystem::path& path);

struct CaseStudyCheck {
  std::string table;
  std::string row;
  std::string column;
  std::string printed;
  std::string computed;
  bool numeric = false;
  double abs_error = 0.0;
  bool erratum = false;  // a documented inconsistency in the reference tables
  bool pass = false;
};

struct Erratum {
  std::string key;
  std::string location;
  std::string printed;
  std::string computed;
  std::string explanation;
};

struct CaseStudyReport {
  double tolerance = 1e-5;
  std::vector<CaseStudyCheck> checks;
  std::vector<Erratum> errata;
  std::vector<std::string> notes;

  /// Failing checks that are not documented errata.
  std::size_t mismatches() const;
  const CaseStudyCheck* first_mismatch() const;
};

/// Recomputes the worked imputation and classification example from the
/// fixtures in `fixture_dir` under the fixed reference partitions and checks
/// every published cell.
CaseStudyReport run_casestudy(const std::filesystem::path& fixture_dir, double tolerance = 1e-5);

std::string render(const CaseStudyReport& report);

}  // namespace cmi
