#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scenestat::grid {

inline constexpr int kMinSide = 1;
inline constexpr int kMaxSide = 5;  // 25 bits still fit the packed integer

/// A k×k binary array packed into an integer: bit r·k+c holds cell (r, c),
/// 1 = white.
struct Pattern {
  int side = 0;
  std::uint32_t bits = 0;

  /// Throws InputError when side is out of range or bits do not fit in side².
  static Pattern make(int side, std::uint32_t bits);

  /// Packs a row-major cell array of side² binary cells.
  static Pattern from_cells(int side, std::span<const std::uint8_t> cells);

  std::vector<std::uint8_t> cells() const;
  bool cell(int row, int col) const { return (bits >> (row * side + col)) & 1u; }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern&, const Pattern&) = default;
};

/// Number of distinct k×k patterns, 2^(k²).
std::uint64_t pattern_space_size(int side);

/// Lower-case hex, zero padded to ceil(k²/4) digits, no prefix.
std::string to_hex(const Pattern& p);
std::string to_hex(std::uint32_t bits, int side);

/// Accepts an optional 0x prefix and either case. Throws InputError.
Pattern parse_hex(std::string_view text, int side);

}  // namespace scenestat::grid
