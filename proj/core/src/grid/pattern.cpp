#include "scenestat/grid/pattern.h"

#include <charconv>

#include "scenestat/error.h"

namespace scenestat::grid {

namespace {

void check_side(int side) {
  if (side < kMinSide || side > kMaxSide) {
    throw InputError("pattern side must be in [" + std::to_string(kMinSide) + ", " +
                     std::to_string(kMaxSide) + "], got " + std::to_string(side));
  }
}

int hex_digits(int side) { return (side * side + 3) / 4; }

}  // namespace

std::uint64_t pattern_space_size(int side) {
  check_side(side);
  return std::uint64_t{1} << (side * side);
}

Pattern Pattern::make(int side, std::uint32_t bits) {
  if (bits >= pattern_space_size(side)) {
    throw InputError("pattern bits " + std::to_string(bits) + " do not fit a " +
                     std::to_string(side) + "x" + std::to_string(side) + " array");
  }
  return Pattern{side, bits};
}

Pattern Pattern::from_cells(int side, std::span<const std::uint8_t> cells) {
  check_side(side);
  if (cells.size() != static_cast<std::size_t>(side * side)) {
    throw InputError("expected " + std::to_string(side * side) + " cells, got " +
                     std::to_string(cells.size()));
  }
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] > 1) throw InputError("cells must be 0 or 1");
    bits |= std::uint32_t{cells[i]} << i;
  }
  return Pattern{side, bits};
}

std::vector<std::uint8_t> Pattern::cells() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(side * side));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (bits >> i) & 1u;
  return out;
}

std::string to_hex(std::uint32_t bits, int side) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(static_cast<std::size_t>(hex_digits(side)), '0');
  for (auto it = out.rbegin(); it != out.rend(); ++it) {
    *it = kDigits[bits & 0xfu];
    bits >>= 4;
  }
  return out;
}

std::string to_hex(const Pattern& p) { return to_hex(p.bits, p.side); }

Pattern parse_hex(std::string_view text, int side) {
  std::string_view digits = text;
  if (digits.starts_with("0x") || digits.starts_with("0X")) digits.remove_prefix(2);
  std::uint32_t bits = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), bits, 16);
  if (digits.empty() || ec != std::errc{} || end != digits.data() + digits.size()) {
    throw InputError("invalid pattern hex '" + std::string(text) + "'");
  }
  return Pattern::make(side, bits);
}

}  // namespace scenestat::grid
