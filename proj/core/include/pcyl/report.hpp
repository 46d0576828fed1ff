#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace pcyl {

/// One CSV row. `kind` is estimate, fit, ratio, residual or m1. Empty
/// optional-looking cells are written as empty strings.
struct ReportRow {
  std::string kind = "estimate";
  std::string id;
  int d = 0;
  double u = 0.0;
  double scale = 0.0;
  double epsilon = 0.0;
  std::uint64_t replicates = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

struct EstimateReport {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<ReportRow> rows;
  std::uint64_t master_seed = 0;
  double wall_seconds = 0.0;

  /// Rows of the given kind in insertion order.
  std::vector<ReportRow> select(const std::string& kind) const;
};

inline constexpr const char* kReportMagic = "# pcyl-report v1";
inline constexpr const char* kReportColumns =
    "kind,id,d,u,scale,epsilon,replicates,estimate,stderr,seed";

/// Versioned CSV. Contains nothing that depends on timing or thread count.
void write_csv(std::ostream& out, const EstimateReport& report);
/// Human-readable block: parameters, rows, wall time.
void write_summary(std::ostream& out, const EstimateReport& report);

/// Parses CSV written by write_csv (used by tests and `describe`).
std::vector<ReportRow> read_csv(std::istream& in);

}  // namespace pcyl
