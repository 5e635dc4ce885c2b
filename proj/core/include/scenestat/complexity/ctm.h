#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "scenestat/grid/pattern.h"

namespace scenestat::complexity {

struct SamplerParams {
  int side = 2;
  int n_states = 4;
  std::uint64_t n_samples = 1'000'000;
  std::uint64_t max_steps = 500;
  std::uint64_t seed = 0;

  friend bool operator==(const SamplerParams&, const SamplerParams&) = default;
};

/// Parameters of the reference 2×2 table shipped with the repository.
SamplerParams canonical_sampler_params();

/// Raw production counts from sampling random machines.
struct OutputFrequencies {
  SamplerParams params;
  std::uint64_t n_halting = 0;
  std::uint64_t total_hits = 0;                       // halting runs with a k×k box
  std::map<std::uint32_t, std::uint64_t> by_class;    // canonical pattern -> hits
};

/// Draws machines in fixed-size batches; batch b uses the stream
/// Rng::derive(seed, {b}). Results are identical for any thread count.
OutputFrequencies sample_outputs(const SamplerParams& params, unsigned threads = 0);

/// Coding-theorem estimates CTM(x) = −log2 D(x), where D(x) is the share of
/// qualifying outputs equal to x. Outputs are pooled per dihedral class, so
/// D(x) = freq(class of x) / (|orbit of x| · total_hits).
class CtmTable {
 public:
  struct Metadata {
    SamplerParams params;
    std::uint64_t n_halting = 0;
    std::uint64_t total_hits = 0;
    double ceiling = 0.0;  // value for classes never produced

    friend bool operator==(const Metadata&, const Metadata&) = default;
  };

  CtmTable() = default;
  /// Validates keys (canonical, in range) and values (finite, >= 0).
  CtmTable(Metadata meta, std::map<std::uint32_t, double> entries);

  int side() const { return meta_.params.side; }
  const Metadata& metadata() const { return meta_; }
  const std::map<std::uint32_t, double>& entries() const { return entries_; }

  /// CTM of any pattern of this side, via its canonical class; the ceiling for
  /// classes that were never produced.
  double lookup(const grid::Pattern& p) const;
  bool observed(const grid::Pattern& p) const;
  double min_value() const;

  friend bool operator==(const CtmTable&, const CtmTable&) = default;

 private:
  Metadata meta_;
  std::map<std::uint32_t, double> entries_;
};

/// Values are stored rounded to 12 significant digits so that the CSV form is
/// lossless. The ceiling is one bit above the largest observed value.
/// Throws InsufficientSamplesError when no qualifying output was produced.
CtmTable build_ctm_table(const OutputFrequencies& freq);

CtmTable sample_ctm(const SamplerParams& params, unsigned threads = 0);

/// CSV `pattern_hex,ctm_bits` preceded by `#` metadata lines.
std::string save_ctm_table(const CtmTable& table);
/// Throws ParseError on missing metadata, non-canonical keys or bad values.
CtmTable load_ctm_table(std::string_view text);

}  // namespace scenestat::complexity
