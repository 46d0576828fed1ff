#include "pcyl/line_io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "pcyl/errors.hpp"

namespace pcyl {
namespace {

constexpr const char* kMagic = "# pcyl-lines v1";

std::string join_coords(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.dim(); ++i) {
    if (i) s += ',';
    s += fmt::format("{:.17g}", v[i]);
  }
  return s;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    fail(Errc::kParse, std::string("bad number for ") + what + ": '" + s + "'");
  }
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    fail(Errc::kParse, std::string("bad integer for ") + what + ": '" + s + "'");
  }
}

}  // namespace

void write_lines(std::ostream& out, const LineProcessSample& sample) {
  const WindowSpec& w = sample.window;
  out << fmt::format("{} d={} u={:.17g} R={:.17g} center={} master_seed={} replicate={} count={}\n",
                     kMagic, w.dim(), sample.u, w.radius, join_coords(w.center),
                     sample.master_seed, sample.replicate_index, sample.lines.size());
  for (const auto& line : sample.lines) {
    std::string row = std::to_string(line.dim());
    for (int i = 0; i < line.dim(); ++i) row += fmt::format(" {:.17g}", line.direction[i]);
    for (int i = 0; i < line.dim(); ++i) row += fmt::format(" {:.17g}", line.anchor[i]);
    out << row << '\n';
  }
}

LineProcessSample read_lines(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind(kMagic, 0) != 0)
    fail(Errc::kParse, "missing '# pcyl-lines v1' header");
  std::map<std::string, std::string> fields;
  std::istringstream hs(header.substr(std::string(kMagic).size()));
  std::string tok;
  while (hs >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) fail(Errc::kParse, "bad header token '" + tok + "'");
    fields[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"d", "u", "R", "center", "master_seed", "replicate", "count"})
    if (!fields.count(key)) fail(Errc::kParse, std::string("header lacks ") + key);

  const int d = static_cast<int>(parse_u64(fields["d"], "d"));
  if (d < 2 || d > kMaxDim) fail(Errc::kParse, "header dimension out of range");
  LineProcessSample s;
  s.window.center = Vec(d);
  s.window.radius = parse_double(fields["R"], "R");
  s.u = parse_double(fields["u"], "u");
  s.master_seed = parse_u64(fields["master_seed"], "master_seed");
  s.replicate_index = parse_u64(fields["replicate"], "replicate");
  {
    std::istringstream cs(fields["center"]);
    std::string part;
    int i = 0;
    while (std::getline(cs, part, ',')) {
      if (i >= d) fail(Errc::kParse, "center has too many coordinates");
      s.window.center[i++] = parse_double(part, "center");
    }
    if (i != d) fail(Errc::kParse, "center has too few coordinates");
  }
  const std::uint64_t count = parse_u64(fields["count"], "count");

  std::string row;
  while (std::getline(in, row)) {
    if (row.empty() || row[0] == '#') continue;
    std::istringstream rs(row);
    std::string t;
    std::vector<double> vals;
    int rd = -1;
    if (!(rs >> t)) continue;
    rd = static_cast<int>(parse_u64(t, "row dimension"));
    while (rs >> t) vals.push_back(parse_double(t, "row value"));
    if (rd != d || static_cast<int>(vals.size()) != 2 * d)
      fail(Errc::kParse, "row does not have d + 2d fields: '" + row + "'");
    Vec dir(d), anchor(d);
    for (int i = 0; i < d; ++i) {
      dir[i] = vals[i];
      anchor[i] = vals[d + i];
    }
    // Keep the stored representation bit-for-bit; check_lines audits it.
    CanonicalLine line = canonicalize_line(anchor, dir);
    line.direction = UnitVector::stored(dir);
    line.anchor = anchor;
    s.lines.push_back(line);
  }
  if (s.lines.size() != count) fail(Errc::kParse, "row count differs from header count");
  return s;
}

LineCheck check_lines(const LineProcessSample& sample) {
  LineCheck out;
  const WindowSpec& w = sample.window;
  for (std::size_t k = 0; k < sample.lines.size(); ++k) {
    const CanonicalLine& l = sample.lines[k];
    ++out.rows;
    if (l.dim() != w.dim()) {
      out.violations.push_back(fmt::format("row {}: dimension {}", k, l.dim()));
      continue;
    }
    if (std::abs(norm(l.direction.vec()) - 1.0) > kUnitNormTol)
      out.violations.push_back(fmt::format("row {}: direction is not unit", k));
    for (int i = 0; i < l.dim(); ++i) {
      if (std::abs(l.direction[i]) > kUnitNormTol) {
        if (l.direction[i] < 0.0)
          out.violations.push_back(fmt::format("row {}: direction sign not canonical", k));
        break;
      }
    }
    if (std::abs(dot(l.anchor, l.direction.vec())) > 1e-10)
      out.violations.push_back(fmt::format("row {}: anchor not orthogonal", k));
    const double off = dist_line_point(l, w.center);
    if (off > w.radius + 1.0 + kGeomTol)
      out.violations.push_back(fmt::format("row {}: offset {:.6g} exceeds R + 1", k, off));
  }
  return out;
}

}  // namespace pcyl
