#include "scenestat/complexity/ctm.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "scenestat/complexity/dihedral.h"
#include "scenestat/complexity/turing.h"
#include "scenestat/error.h"
#include "scenestat/random.h"

namespace scenestat::complexity {

namespace {

constexpr std::uint64_t kBatchSize = 4096;

double round_to_12_digits(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  double out = 0.0;
  std::from_chars(buf, res.ptr, out);
  return out;
}

std::string format_12(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

struct BatchTally {
  std::uint64_t n_halting = 0;
  std::uint64_t total_hits = 0;
  std::map<std::uint32_t, std::uint64_t> by_class;

  void merge(const BatchTally& o) {
    n_halting += o.n_halting;
    total_hits += o.total_hits;
    for (const auto& [k, v] : o.by_class) by_class[k] += v;
  }
};

void validate(const SamplerParams& p) {
  if (p.side < 1 || p.side > 3) throw InputError("CTM side must be in [1, 3]");
  if (p.n_states < 1) throw InputError("n_states must be at least 1");
  if (p.n_samples < 1) throw InputError("n_samples must be at least 1");
  if (p.max_steps < 1) throw InputError("max_steps must be at least 1");
}

}  // namespace

SamplerParams canonical_sampler_params() {
  return SamplerParams{.side = 2, .n_states = 4, .n_samples = 1'000'000, .max_steps = 500,
                       .seed = 1729};
}

OutputFrequencies sample_outputs(const SamplerParams& params, unsigned threads) {
  validate(params);
  const std::uint64_t n_batches = (params.n_samples + kBatchSize - 1) / kBatchSize;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_batches));

  std::vector<BatchTally> per_thread(threads);
  std::atomic<std::uint64_t> next{0};
  auto work = [&](unsigned slot) {
    MachineRunner runner(params.max_steps);
    BatchTally& tally = per_thread[slot];
    for (std::uint64_t b = next++; b < n_batches; b = next++) {
      Rng rng = Rng::derive(params.seed, {b});
      const std::uint64_t begin = b * kBatchSize;
      const std::uint64_t end = std::min(params.n_samples, begin + kBatchSize);
      for (std::uint64_t i = begin; i < end; ++i) {
        const auto machine = TuringMachine2D::random(params.n_states, rng);
        const auto run = runner.run(machine, params.side);
        if (!run.halted) continue;
        ++tally.n_halting;
        if (auto p = run.as_pattern(params.side)) {
          ++tally.total_hits;
          ++tally.by_class[canonical(*p).bits];
        }
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  BatchTally all;
  for (const auto& t : per_thread) all.merge(t);
  return OutputFrequencies{params, all.n_halting, all.total_hits, std::move(all.by_class)};
}

CtmTable::CtmTable(Metadata meta, std::map<std::uint32_t, double> entries)
    : meta_(meta), entries_(std::move(entries)) {
  validate(meta_.params);
  if (!std::isfinite(meta_.ceiling) || meta_.ceiling < 0) {
    throw InputError("CTM ceiling must be finite and non-negative");
  }
  const auto space = grid::pattern_space_size(side());
  for (const auto& [bits, value] : entries_) {
    if (bits >= space) throw InputError("CTM key out of range");
    if (!is_canonical(grid::Pattern{side(), bits})) {
      throw InputError("CTM key " + grid::to_hex(bits, side()) + " is not canonical");
    }
    if (!std::isfinite(value) || value < 0) throw InputError("CTM values must be finite and >= 0");
  }
}

double CtmTable::lookup(const grid::Pattern& p) const {
  if (p.side != side()) throw InputError("pattern side does not match the CTM table");
  auto it = entries_.find(canonical(p).bits);
  return it == entries_.end() ? meta_.ceiling : it->second;
}

bool CtmTable::observed(const grid::Pattern& p) const {
  return p.side == side() && entries_.contains(canonical(p).bits);
}

double CtmTable::min_value() const {
  double best = meta_.ceiling;
  for (const auto& [bits, v] : entries_) best = std::min(best, v);
  return best;
}

CtmTable build_ctm_table(const OutputFrequencies& freq) {
  if (freq.total_hits == 0) {
    throw InsufficientSamplesError(freq.params.n_samples, freq.n_halting);
  }
  const double log_total = std::log2(static_cast<double>(freq.total_hits));
  std::map<std::uint32_t, double> entries;
  double max_value = 0.0;
  for (const auto& [bits, hits] : freq.by_class) {
    // Hits are pooled over the symmetry class; each member was produced
    // hits / |orbit| times in expectation.
    const double per_pattern =
        static_cast<double>(hits) / orbit_size(grid::Pattern{freq.params.side, bits});
    const double v = round_to_12_digits(log_total - std::log2(per_pattern));
    entries.emplace(bits, v);
    max_value = std::max(max_value, v);
  }
  CtmTable::Metadata meta{freq.params, freq.n_halting, freq.total_hits,
                          round_to_12_digits(max_value + 1.0)};
  return CtmTable(meta, std::move(entries));
}

CtmTable sample_ctm(const SamplerParams& params, unsigned threads) {
  return build_ctm_table(sample_outputs(params, threads));
}

std::string save_ctm_table(const CtmTable& table) {
  const auto& m = table.metadata();
  std::ostringstream out;
  out << "# side=" << m.params.side << " n_states=" << m.params.n_states
      << " n_samples=" << m.params.n_samples << " max_steps=" << m.params.max_steps
      << " seed=" << m.params.seed << "\n";
  out << "# n_halting=" << m.n_halting << " total_hits=" << m.total_hits
      << " ceiling=" << format_12(m.ceiling) << "\n";
  out << "pattern_hex,ctm_bits\n";
  for (const auto& [bits, v] : table.entries()) {
    out << grid::to_hex(bits, table.side()) << ',' << format_12(v) << '\n';
  }
  return out.str();
}

namespace {

template <typename T>
T parse_number(std::string_view s, std::size_t line) {
  T v{};
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
    throw ParseError("invalid number '" + std::string(s) + "'", line, ParseError::Unit::kLine);
  }
  return v;
}

}  // namespace

CtmTable load_ctm_table(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::map<std::string, std::string> meta_fields;
  std::map<std::uint32_t, double> entries;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  int side = 0;

  auto meta_u64 = [&](const char* key) {
    auto it = meta_fields.find(key);
    if (it == meta_fields.end()) {
      throw ParseError(std::string("missing metadata field '") + key + "'", lineno,
                       ParseError::Unit::kLine);
    }
    return parse_number<std::uint64_t>(it->second, lineno);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string kv;
      while (fields >> kv) {
        auto eq = kv.find('=');
        if (eq != std::string::npos) meta_fields[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      continue;
    }
    if (!have_header) {
      if (line != "pattern_hex,ctm_bits") {
        throw ParseError("expected header 'pattern_hex,ctm_bits'", lineno,
                         ParseError::Unit::kLine);
      }
      side = static_cast<int>(meta_u64("side"));
      if (side < 1 || side > 3) {
        throw ParseError("CTM side must be in [1, 3]", lineno, ParseError::Unit::kLine);
      }
      have_header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError("expected two columns", lineno, ParseError::Unit::kLine);
    }
    grid::Pattern p;
    try {
      p = grid::parse_hex(std::string_view(line).substr(0, comma), side);
    } catch (const InputError& e) {
      throw ParseError(e.what(), lineno, ParseError::Unit::kLine);
    }
    if (!is_canonical(p)) {
      throw ParseError("pattern " + grid::to_hex(p) + " is not a canonical representative",
                       lineno, ParseError::Unit::kLine);
    }
    const double v = parse_number<double>(std::string_view(line).substr(comma + 1), lineno);
    if (!std::isfinite(v) || v < 0) {
      throw ParseError("CTM values must be finite and non-negative", lineno,
                       ParseError::Unit::kLine);
    }
    if (!entries.emplace(p.bits, v).second) {
      throw ParseError("duplicate pattern " + grid::to_hex(p), lineno, ParseError::Unit::kLine);
    }
  }
  if (!have_header) throw ParseError("missing CSV header", lineno, ParseError::Unit::kLine);

  CtmTable::Metadata meta;
  meta.params.side = side;
  meta.params.n_states = static_cast<int>(meta_u64("n_states"));
  meta.params.n_samples = meta_u64("n_samples");
  meta.params.max_steps = meta_u64("max_steps");
  meta.params.seed = meta_u64("seed");
  meta.n_halting = meta_u64("n_halting");
  meta.total_hits = meta_u64("total_hits");
  auto ceiling = meta_fields.find("ceiling");
  if (ceiling == meta_fields.end()) {
    throw ParseError("missing metadata field 'ceiling'", lineno, ParseError::Unit::kLine);
  }
  meta.ceiling = parse_number<double>(ceiling->second, lineno);
  try {
    return CtmTable(meta, std::move(entries));
  } catch (const InputError& e) {
    throw ParseError(e.what(), lineno, ParseError::Unit::kLine);
  }
}

}  // namespace scenestat::complexity
