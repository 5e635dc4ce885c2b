#pragma once

#include <cmath>

namespace scenestat {

// Every log-scaled score in the pipeline is reported in one of these units.
// Switching units is an affine rescaling of each score.
enum class LogBase { kBits, kNats };

inline double log_in(LogBase base, double x) {
  return base == LogBase::kBits ? std::log2(x) : std::log(x);
}

}  // namespace scenestat
