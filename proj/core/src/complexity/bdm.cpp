#include "scenestat/complexity/bdm.h"

#include <cmath>
#include <map>
#include <string>

#include "scenestat/error.h"

namespace scenestat::complexity {

double bdm(const grid::BitGrid& g, const CtmTable& table, BdmParams params) {
  const int b = params.block_side;
  if (b < 1 || b > 3) throw InputError("BDM block side must be in [1, 3]");
  if (table.side() != b) {
    throw InputError("CTM table side " + std::to_string(table.side()) +
                     " does not match block side " + std::to_string(b));
  }
  if (g.width() == 0 || g.height() == 0 || g.width() % b != 0 || g.height() % b != 0) {
    throw InputError("grid dimensions must be positive multiples of the block side");
  }
  std::map<std::uint32_t, std::uint64_t> blocks;
  for (int top = 0; top < g.height(); top += b) {
    for (int left = 0; left < g.width(); left += b) {
      std::uint32_t bits = 0;
      for (int r = 0; r < b; ++r) {
        for (int c = 0; c < b; ++c) bits |= std::uint32_t{g.at(top + r, left + c)} << (r * b + c);
      }
      ++blocks[bits];
    }
  }
  double total = 0.0;
  for (const auto& [bits, multiplicity] : blocks) {
    total += table.lookup(grid::Pattern{b, bits}) + std::log2(static_cast<double>(multiplicity));
  }
  return total;
}

double bdm(const grid::Pattern& pattern, const CtmTable& table, BdmParams params) {
  return bdm(grid::BitGrid(pattern.side, pattern.side, pattern.cells()), table, params);
}

}  // namespace scenestat::complexity
