#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenestat/grid/image.h"
#include "scenestat/grid/patches.h"
#include "scenestat/grid/pattern.h"
#include "scenestat/log_base.h"

namespace scenestat::grid {

/// Occurrence counts of k×k patterns over a scanned corpus. Only observed
/// patterns are stored, so every count is at least 1.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  FrequencyTable(int side, ExtractionMode mode);

  int side() const { return side_; }
  ExtractionMode mode() const { return mode_; }
  std::uint64_t total() const { return total_; }
  std::uint64_t n_images() const { return n_images_; }
  const std::map<std::uint32_t, std::uint64_t>& counts() const { return counts_; }
  std::size_t distinct() const { return counts_.size(); }

  std::uint64_t count(std::uint32_t bits) const;
  std::uint64_t count(const Pattern& p) const { return count(p.bits); }

  void add(std::uint32_t bits, std::uint64_t n = 1);
  void add_images(std::uint64_t n) { n_images_ += n; }

  /// Sums counts and image tallies. Associative and commutative, so per-image
  /// tables can be merged in any order. Throws InputError on side/mode mismatch.
  void merge(const FrequencyTable& other);

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;

 private:
  int side_ = 4;
  ExtractionMode mode_ = ExtractionMode::kTiled;
  std::map<std::uint32_t, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::uint64_t n_images_ = 0;
};

/// Table for a single image. Images smaller than one window contribute zero
/// patches but still count towards n_images.
FrequencyTable scan_image(const GrayImage& image, int side, ExtractionMode mode);

/// Binarizes each image on its own median and tallies every window.
/// `threads` = 0 picks hardware concurrency; the result does not depend on it.
FrequencyTable scan_corpus(std::span<const GrayImage> images, int side, ExtractionMode mode,
                           unsigned threads = 0);

/// .pgm files of a directory, or the paths listed in a manifest file (one per
/// line, relative to the manifest's directory, '#' comments), in lexicographic
/// order. Throws InputError if nothing is found.
std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& source);

/// CSV `pattern_hex,count` preceded by `# side=… mode=… total=… n_images=…`.
std::string save_frequency_csv(const FrequencyTable& table);
FrequencyTable load_frequency_csv(std::string_view text);

/// P(x|r) = 2^(−k²): each cell independently white or black with probability ½.
double chance_probability(int side);

/// Smoothed natural frequency (count + alpha) / (total + alpha·2^(k²)).
/// Throws UnobservedPatternError when alpha = 0 and the pattern was never seen.
double natural_probability(const Pattern& x, const FrequencyTable& table, double alpha);

/// log(P(x|r) / P(x|n)). Negative for patterns more common than chance,
/// positive for rarer ones.
double natural_randomness(const Pattern& x, const FrequencyTable& table, double alpha,
                          LogBase base = LogBase::kBits);

}  // namespace scenestat::grid
