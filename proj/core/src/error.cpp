#include "scenestat/error.h"

#include <cstdio>

namespace scenestat {

namespace {

std::string describe(const std::vector<std::uint32_t>& patterns) {
  std::string out = "unobserved pattern(s) with zero smoothing:";
  for (std::uint32_t p : patterns) {
    char buf[16];
    std::snprintf(buf, sizeof buf, " 0x%x", p);
    out += buf;
  }
  return out;
}

}  // namespace

UnobservedPatternError::UnobservedPatternError(std::vector<std::uint32_t> patterns)
    : DataError(describe(patterns)), patterns_(std::move(patterns)) {}

}  // namespace scenestat
