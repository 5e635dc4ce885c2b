#pragma once

#include <string_view>
#include <vector>

#include "scenestat/grid/image.h"
#include "scenestat/grid/pattern.h"

namespace scenestat::grid {

enum class ExtractionMode { kTiled, kSliding };

std::string_view to_string(ExtractionMode mode);
/// "tiled" or "sliding"; throws InputError otherwise.
ExtractionMode parse_extraction_mode(std::string_view text);

/// Threshold is the lower median of this image's intensities; a cell is white
/// iff its intensity is strictly above it. Throws InputError on an empty image.
BitGrid binarize_median(const GrayImage& image);

/// The threshold binarize_median uses.
std::uint8_t lower_median(const GrayImage& image);

/// Windows in row-major order of their top-left corner. Tiled windows sit at
/// multiples of k and drop partial edges; sliding windows use stride 1.
/// Grids smaller than k×k give an empty result.
std::vector<Pattern> extract_patches(const BitGrid& grid, int side, ExtractionMode mode);

/// Number of windows extract_patches would return.
std::size_t window_count(int width, int height, int side, ExtractionMode mode);

}  // namespace scenestat::grid
