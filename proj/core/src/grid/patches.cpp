#include "scenestat/grid/patches.h"

#include <array>
#include <string>

#include "scenestat/error.h"

namespace scenestat::grid {

std::string_view to_string(ExtractionMode mode) {
  return mode == ExtractionMode::kTiled ? "tiled" : "sliding";
}

ExtractionMode parse_extraction_mode(std::string_view text) {
  if (text == "tiled") return ExtractionMode::kTiled;
  if (text == "sliding") return ExtractionMode::kSliding;
  throw InputError("unknown extraction mode '" + std::string(text) + "'");
}

std::uint8_t lower_median(const GrayImage& image) {
  if (image.empty()) throw InputError("cannot binarize an empty image");
  std::array<std::size_t, 256> histogram{};
  for (std::uint8_t v : image.intensities()) ++histogram[v];
  // Rank (n−1)/2 in sorted order, 0-based.
  const std::size_t rank = (image.size() - 1) / 2;
  std::size_t seen = 0;
  for (int v = 0; v < 256; ++v) {
    seen += histogram[v];
    if (seen > rank) return static_cast<std::uint8_t>(v);
  }
  return 255;
}

BitGrid binarize_median(const GrayImage& image) {
  const std::uint8_t threshold = lower_median(image);
  std::vector<std::uint8_t> cells(image.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = image.intensities()[i] > threshold ? 1 : 0;
  }
  return BitGrid(image.width(), image.height(), std::move(cells));
}

std::size_t window_count(int width, int height, int side, ExtractionMode mode) {
  if (side < 1) throw InputError("window side must be at least 1");
  if (width < side || height < side) return 0;
  if (mode == ExtractionMode::kTiled) {
    return static_cast<std::size_t>(width / side) * static_cast<std::size_t>(height / side);
  }
  return static_cast<std::size_t>(width - side + 1) * static_cast<std::size_t>(height - side + 1);
}

std::vector<Pattern> extract_patches(const BitGrid& grid, int side, ExtractionMode mode) {
  if (side < kMinSide || side > kMaxSide) {
    throw InputError("patch side must be in [1, " + std::to_string(kMaxSide) + "]");
  }
  std::vector<Pattern> out;
  out.reserve(window_count(grid.width(), grid.height(), side, mode));
  const int stride = mode == ExtractionMode::kTiled ? side : 1;
  for (int top = 0; top + side <= grid.height(); top += stride) {
    for (int left = 0; left + side <= grid.width(); left += stride) {
      std::uint32_t bits = 0;
      for (int r = 0; r < side; ++r) {
        const std::uint8_t* row = grid.cells().data() + (top + r) * grid.width() + left;
        for (int c = 0; c < side; ++c) bits |= std::uint32_t{row[c]} << (r * side + c);
      }
      out.push_back(Pattern{side, bits});
    }
  }
  return out;
}

}  // namespace scenestat::grid
