#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace scenestat::grid {

/// 8-bit grayscale image, row-major.
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws InputError if the dimensions are zero or do not match the data.
  GrayImage(int width, int height, std::vector<std::uint8_t> intensities);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return intensities_.size(); }
  bool empty() const { return intensities_.empty(); }
  const std::vector<std::uint8_t>& intensities() const { return intensities_; }
  std::uint8_t at(int row, int col) const { return intensities_[row * width_ + col]; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> intensities_;
};

/// Binary image, row-major, 1 = white.
class BitGrid {
 public:
  BitGrid() = default;
  BitGrid(int width, int height, std::vector<std::uint8_t> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& cells() const { return cells_; }
  std::uint8_t at(int row, int col) const { return cells_[row * width_ + col]; }

  friend bool operator==(const BitGrid&, const BitGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> cells_;
};

}  // namespace scenestat::grid
