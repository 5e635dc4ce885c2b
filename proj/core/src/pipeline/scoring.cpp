#include "scenestat/pipeline/scoring.h"

#include <sstream>

#include "csv_util.h"
#include "scenestat/error.h"

namespace scenestat::pipeline {

std::string_view to_string(LogBase base) { return base == LogBase::kBits ? "2" : "e"; }

LogBase parse_log_base(std::string_view text) {
  if (text == "2" || text == "bits") return LogBase::kBits;
  if (text == "e" || text == "nats") return LogBase::kNats;
  throw InputError("log base must be 2 or e, got '" + std::string(text) + "'");
}

std::vector<std::uint32_t> observed_patterns(const grid::FrequencyTable& freq) {
  std::vector<std::uint32_t> out;
  out.reserve(freq.distinct());
  for (const auto& [bits, n] : freq.counts()) out.push_back(bits);
  return out;
}

std::vector<ScoreRow> score_patterns(std::span<const std::uint32_t> patterns,
                                     const grid::FrequencyTable& freq,
                                     const complexity::CtmTable& ctm, ScoreOptions options) {
  const int side = freq.side();
  const complexity::BdmParams bdm_params{ctm.side()};
  std::vector<std::uint32_t> unobserved;
  std::vector<ScoreRow> rows;
  rows.reserve(patterns.size());
  for (std::uint32_t bits : patterns) {
    const auto p = grid::Pattern::make(side, bits);
    if (options.alpha == 0.0 && freq.count(p) == 0) {
      unobserved.push_back(bits);
      continue;
    }
    rows.push_back({bits, complexity::bdm(p, ctm, bdm_params),
                    grid::natural_randomness(p, freq, options.alpha, options.base)});
  }
  if (!unobserved.empty()) throw UnobservedPatternError(std::move(unobserved));
  return rows;
}

std::string scores_to_csv(std::span<const ScoreRow> rows, int side, LogBase base) {
  std::ostringstream out;
  out << "# k=" << side << " log_base=" << to_string(base) << "\n";
  out << "pattern_hex,complexity_bits,natural_randomness\n";
  for (const auto& r : rows) {
    out << grid::to_hex(r.pattern, side) << ',' << detail::format_double(r.complexity_bits) << ','
        << detail::format_double(r.natural_randomness) << '\n';
  }
  return out.str();
}

std::vector<ScoreRow> scores_from_csv(std::string_view text, int side) {
  std::istringstream in{std::string(text)};
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      if (line != "pattern_hex,complexity_bits,natural_randomness") {
        throw ParseError("expected header 'pattern_hex,complexity_bits,natural_randomness'",
                         lineno, ParseError::Unit::kLine);
      }
      have_header = true;
      continue;
    }
    const auto f = detail::split_commas(line);
    if (f.size() != 3) throw ParseError("expected three columns", lineno, ParseError::Unit::kLine);
    ScoreRow r;
    try {
      r.pattern = grid::parse_hex(f[0], side).bits;
    } catch (const InputError& e) {
      throw ParseError(e.what(), lineno, ParseError::Unit::kLine);
    }
    r.complexity_bits = detail::parse_field<double>(f[1], lineno);
    r.natural_randomness = detail::parse_field<double>(f[2], lineno);
    rows.push_back(r);
  }
  if (!have_header) throw ParseError("missing CSV header", lineno, ParseError::Unit::kLine);
  return rows;
}

}  // namespace scenestat::pipeline
