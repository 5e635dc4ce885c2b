#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenestat/complexity/bdm.h"
#include "scenestat/complexity/ctm.h"
#include "scenestat/grid/frequency_table.h"
#include "scenestat/log_base.h"

namespace scenestat::pipeline {

struct ScoreRow {
  std::uint32_t pattern = 0;
  double complexity_bits = 0.0;
  double natural_randomness = 0.0;
};

struct ScoreOptions {
  double alpha = 1.0;
  LogBase base = LogBase::kBits;
};

/// Complexity (BDM with the CTM table's side as block side) and natural
/// randomness for each pattern. With alpha = 0 every unobserved pattern is
/// collected into one UnobservedPatternError.
std::vector<ScoreRow> score_patterns(std::span<const std::uint32_t> patterns,
                                     const grid::FrequencyTable& freq,
                                     const complexity::CtmTable& ctm, ScoreOptions options = {});

/// Every pattern observed in the frequency table, ascending.
std::vector<std::uint32_t> observed_patterns(const grid::FrequencyTable& freq);

/// `pattern_hex,complexity_bits,natural_randomness` with a `# k=… log_base=…` line.
std::string scores_to_csv(std::span<const ScoreRow> rows, int side, LogBase base);
std::vector<ScoreRow> scores_from_csv(std::string_view text, int side);

std::string_view to_string(LogBase base);
LogBase parse_log_base(std::string_view text);  // "2" / "bits" or "e" / "nats"

}  // namespace scenestat::pipeline
