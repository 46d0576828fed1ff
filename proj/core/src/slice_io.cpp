#include "pcyl/slice_io.hpp"

#include <fmt/format.h>

#include <istream>
#include <ostream>

#include "pcyl/errors.hpp"

namespace pcyl {
namespace {

constexpr const char* kSliceMagic = "# pcyl-slice v1";

std::string coords(const Vec& v) {
  std::string s;
  for (int i = 0; i < v.dim(); ++i) s += fmt::format("{}{:.17g}", i ? "," : "", v[i]);
  return s;
}

}  // namespace

void write_pgm(std::ostream& out, const SliceGrid& g) {
  out << "P5\n" << g.nx << ' ' << g.ny << "\n1\n";
  for (int j = g.ny - 1; j >= 0; --j)
    out.write(reinterpret_cast<const char*>(g.occupied.data()) + static_cast<std::size_t>(j) * g.nx,
              g.nx);
}

PgmImage read_pgm(std::istream& in) {
  PgmImage img;
  std::string magic;
  in >> magic;
  if (magic != "P5") fail(Errc::kParse, "not a binary PGM");
  in >> img.width >> img.height >> img.maxval;
  if (!in || img.width <= 0 || img.height <= 0 || img.maxval <= 0 || img.maxval > 255)
    fail(Errc::kParse, "bad PGM header");
  in.get();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size()))
    fail(Errc::kParse, "truncated PGM data");
  return img;
}

void write_slice_header(std::ostream& out, const PlanarSliceOccupancy& slice, double u) {
  out << kSliceMagic << '\n';
  out << "d=" << slice.plane.dim() << '\n';
  out << "plane_offset=" << coords(slice.plane.offset) << '\n';
  out << fmt::format("square_center={:.17g},{:.17g}\n", slice.square.cx, slice.square.cy);
  out << fmt::format("halfwidth={:.17g}\n", slice.square.halfwidth);
  out << fmt::format("u={:.17g}\n", u);
  out << "master_seed=" << slice.master_seed << '\n';
  out << "replicate=" << slice.replicate_index << '\n';
  out << "obstacles=" << slice.obstacles.size() << '\n';
  if (slice.grid) {
    const SliceGrid& g = *slice.grid;
    out << fmt::format("epsilon={:.17g}\n", g.eps);
    out << "nx=" << g.nx << '\n' << "ny=" << g.ny << '\n';
    out << fmt::format("x0={:.17g}\ny0={:.17g}\n", g.x0, g.y0);
    out << "occupied=" << g.occupied_count() << '\n';
    out << "row_order=top_is_max_y\n";
  }
}

std::map<std::string, std::string> read_slice_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSliceMagic) fail(Errc::kParse, "missing slice header magic");
  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::kParse, "bad slice header line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace pcyl
