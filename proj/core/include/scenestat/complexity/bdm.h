#pragma once

#include "scenestat/complexity/ctm.h"
#include "scenestat/grid/image.h"
#include "scenestat/grid/pattern.h"

namespace scenestat::complexity {

struct BdmParams {
  int block_side = 2;
};

/// Block Decomposition Method: tile the grid into non-overlapping b×b blocks
/// and sum CTM(u) + log2(multiplicity of u) over the distinct blocks u.
/// Requires table.side() == b and both grid dimensions divisible by b.
double bdm(const grid::BitGrid& grid, const CtmTable& table, BdmParams params = {});
double bdm(const grid::Pattern& pattern, const CtmTable& table, BdmParams params = {});

}  // namespace scenestat::complexity
