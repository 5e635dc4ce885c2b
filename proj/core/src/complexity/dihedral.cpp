#include "scenestat/complexity/dihedral.h"

#include <algorithm>

#include "scenestat/error.h"

namespace scenestat::complexity {

grid::Pattern apply_symmetry(const grid::Pattern& p, int symmetry) {
  const int n = p.side;
  const int last = n - 1;
  std::uint32_t out = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      // Destination of cell (r, c).
      int dr = r, dc = c;
      switch (symmetry) {
        case 0: break;
        case 1: dr = c, dc = last - r; break;
        case 2: dr = last - r, dc = last - c; break;
        case 3: dr = last - c, dc = r; break;
        case 4: dc = last - c; break;
        case 5: dr = last - r; break;
        case 6: dr = c, dc = r; break;
        case 7: dr = last - c, dc = last - r; break;
        default: throw InputError("symmetry index must be in [0, 8)");
      }
      if (p.cell(r, c)) out |= std::uint32_t{1} << (dr * n + dc);
    }
  }
  return grid::Pattern{n, out};
}

std::array<grid::Pattern, kDihedralOrder> orbit(const grid::Pattern& p) {
  std::array<grid::Pattern, kDihedralOrder> out;
  for (int s = 0; s < kDihedralOrder; ++s) out[s] = apply_symmetry(p, s);
  return out;
}

grid::Pattern canonical(const grid::Pattern& p) {
  const auto images = orbit(p);
  return *std::min_element(images.begin(), images.end(),
                           [](const auto& a, const auto& b) { return a.bits < b.bits; });
}

int orbit_size(const grid::Pattern& p) {
  auto images = orbit(p);
  std::sort(images.begin(), images.end());
  return static_cast<int>(std::unique(images.begin(), images.end()) - images.begin());
}

}  // namespace scenestat::complexity
