#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pcyl/vacancy.hpp"

namespace pcyl {

/// Binary PGM (P5), maxval 1, one byte per cell, 1 = occupied. Image row 0 is
/// the grid row with the largest y.
void write_pgm(std::ostream& out, const SliceGrid& grid);

struct PgmImage {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::vector<std::uint8_t> pixels;
};
PgmImage read_pgm(std::istream& in);

/// Sidecar text header: "# pcyl-slice v1" followed by key=value lines.
void write_slice_header(std::ostream& out, const PlanarSliceOccupancy& slice, double u);

/// Parses a sidecar header into its key/value table.
std::map<std::string, std::string> read_slice_header(std::istream& in);

}  // namespace pcyl
