#pragma once

#include <cstdint>
#include <filesystem>
#include <span>

#include "scenestat/grid/image.h"

namespace scenestat::grid {

/// Decodes a P2 (ASCII) or P5 (binary) portable graymap with maxval <= 255.
/// Samples are rescaled to [0, 255] by round(v·255/maxval) when maxval < 255.
/// Throws ParseError carrying the byte offset of the first offending byte.
GrayImage load_pgm(std::span<const std::uint8_t> bytes);

GrayImage load_pgm_file(const std::filesystem::path& path);

/// Binary P5 encoding with maxval 255.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

}  // namespace scenestat::grid
