#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pcyl/sampler.hpp"

namespace pcyl {

/// Text format, one line per row:
///   # pcyl-lines v1 d=3 u=1 R=2 center=0,0,0 master_seed=1 replicate=0 count=N
///   3 dir_1 dir_2 dir_3 anchor_1 anchor_2 anchor_3
/// Reals are written with 17 significant digits so a round trip is exact.
void write_lines(std::ostream& out, const LineProcessSample& sample);
LineProcessSample read_lines(std::istream& in);

struct LineCheck {
  std::size_t rows = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Verifies the sample invariants: unit canonical directions, anchors
/// orthogonal to directions, every line within R + 1 of the window center,
/// and the header count.
LineCheck check_lines(const LineProcessSample& sample);

}  // namespace pcyl
