#include "scenestat/grid/image.h"

#include <algorithm>
#include <string>

#include "scenestat/error.h"

namespace scenestat::grid {

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> intensities)
    : width_(width), height_(height), intensities_(std::move(intensities)) {
  if (width < 1 || height < 1) throw InputError("image dimensions must be positive");
  if (intensities_.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("image data has " + std::to_string(intensities_.size()) +
                     " samples, expected " + std::to_string(width * height));
  }
}

BitGrid::BitGrid(int width, int height, std::vector<std::uint8_t> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width < 0 || height < 0) throw InputError("grid dimensions must be non-negative");
  if (cells_.size() != static_cast<std::size_t>(width) * height) {
    throw InputError("grid data has " + std::to_string(cells_.size()) + " cells, expected " +
                     std::to_string(width * height));
  }
  if (std::any_of(cells_.begin(), cells_.end(), [](std::uint8_t c) { return c > 1; })) {
    throw InputError("grid cells must be 0 or 1");
  }
}

}  // namespace scenestat::grid
