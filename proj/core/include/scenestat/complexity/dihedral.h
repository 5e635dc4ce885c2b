#pragma once

#include <array>
#include <cstdint>

#include "scenestat/grid/pattern.h"

namespace scenestat::complexity {

/// The 8 symmetries of the square, in a fixed order: identity, rotations by
/// 90°, 180°, 270° clockwise, then reflections across the vertical axis, the
/// horizontal axis, the main diagonal and the anti-diagonal.
inline constexpr int kDihedralOrder = 8;

grid::Pattern apply_symmetry(const grid::Pattern& p, int symmetry);

std::array<grid::Pattern, kDihedralOrder> orbit(const grid::Pattern& p);

/// Class representative: the smallest packed integer over the orbit.
grid::Pattern canonical(const grid::Pattern& p);

/// Number of distinct patterns among the 8 images (1, 2, 4 or 8).
int orbit_size(const grid::Pattern& p);

inline bool is_canonical(const grid::Pattern& p) { return canonical(p).bits == p.bits; }

}  // namespace scenestat::complexity
