#include "pcyl/report.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>
#include <sstream>

#include "pcyl/errors.hpp"

namespace pcyl {
namespace {

std::string num(double x) { return fmt::format("{:.10g}", x); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<ReportRow> EstimateReport::select(const std::string& kind) const {
  std::vector<ReportRow> out;
  for (const auto& r : rows)
    if (r.kind == kind) out.push_back(r);
  return out;
}

void write_csv(std::ostream& out, const EstimateReport& report) {
  out << kReportMagic << " experiment=" << report.experiment << '\n';
  for (const auto& [k, v] : report.parameters) out << "# " << k << '=' << v << '\n';
  out << kReportColumns << '\n';
  for (const auto& r : report.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.kind, r.id, r.d, num(r.u),
                       num(r.scale), num(r.epsilon), r.replicates, num(r.estimate),
                       num(r.std_error), r.seed);
  }
}

void write_summary(std::ostream& out, const EstimateReport& report) {
  out << "experiment: " << report.experiment << '\n';
  out << "master_seed: " << report.master_seed << '\n';
  for (const auto& [k, v] : report.parameters) out << "  " << k << " = " << v << '\n';
  for (const auto& r : report.rows) {
    out << fmt::format("  {:<9} {:<22} d={} u={:<8} scale={:<10} est={:<14} se={}\n", r.kind,
                       r.id, r.d, num(r.u), num(r.scale), num(r.estimate), num(r.std_error));
  }
  out << fmt::format("wall_seconds: {:.3f}\n", report.wall_seconds);
}

std::vector<ReportRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind(kReportMagic, 0) != 0)
    fail(Errc::kParse, "missing report header");
  bool columns_seen = false;
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!columns_seen) {
      if (line != kReportColumns) fail(Errc::kParse, "unexpected report columns");
      columns_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10) fail(Errc::kParse, "report row needs 10 fields: " + line);
    try {
      ReportRow r;
      r.kind = f[0];
      r.id = f[1];
      r.d = std::stoi(f[2]);
      r.u = std::stod(f[3]);
      r.scale = std::stod(f[4]);
      r.epsilon = std::stod(f[5]);
      r.replicates = std::stoull(f[6]);
      r.estimate = std::stod(f[7]);
      r.std_error = std::stod(f[8]);
      r.seed = std::stoull(f[9]);
      rows.push_back(r);
    } catch (const std::exception&) {
      fail(Errc::kParse, "bad report row: " + line);
    }
  }
  return rows;
}

}  // namespace pcyl
