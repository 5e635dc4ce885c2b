#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scenestat/grid/frequency_table.h"

namespace scenestat::experiment {

struct StimulusProvenance {
  std::string corpus_id;
  std::uint64_t seed = 0;
  std::uint64_t corpus_total = 0;

  friend bool operator==(const StimulusProvenance&, const StimulusProvenance&) = default;
};

/// An ordered list of distinct patterns shown to every participant.
struct StimulusSet {
  std::string id;
  int side = 4;
  std::vector<std::uint32_t> patterns;
  StimulusProvenance provenance;

  /// Throws InputError on duplicates or out-of-range patterns.
  void validate() const;

  friend bool operator==(const StimulusSet&, const StimulusSet&) = default;
};

/// Draws n distinct patterns with probability proportional to their corpus
/// counts. Drawing occurrences without replacement and skipping repeats picks
/// each new pattern with probability proportional to its full count among the
/// patterns not yet chosen, so that is what is simulated directly. The set is
/// in draw order. Throws DataError if the table has fewer than n patterns.
StimulusSet sample_stimuli(const grid::FrequencyTable& table, std::size_t n, std::uint64_t seed,
                           std::string id, std::string corpus_id = {});

/// {"id", "k", "patterns": [hex...], "provenance": {...}}
std::string stimulus_set_to_json(const StimulusSet& set);
StimulusSet stimulus_set_from_json(std::string_view text);

}  // namespace scenestat::experiment
