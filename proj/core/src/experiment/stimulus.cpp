#include "scenestat/experiment/stimulus.h"

#include <set>

#include "json.hpp"
#include "scenestat/error.h"
#include "scenestat/random.h"

namespace scenestat::experiment {

namespace {

// Fenwick tree over non-negative integer weights with weighted search.
class WeightTree {
 public:
  explicit WeightTree(const std::vector<std::uint64_t>& weights) : tree_(weights.size() + 1, 0) {
    for (std::size_t i = 0; i < weights.size(); ++i) add(i, static_cast<std::int64_t>(weights[i]));
    while (top_bit_ * 2 <= weights.size()) top_bit_ *= 2;
  }

  void add(std::size_t i, std::int64_t delta) {
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) {
      tree_[k] = static_cast<std::uint64_t>(static_cast<std::int64_t>(tree_[k]) + delta);
    }
  }

  // Index of the item whose cumulative weight interval contains `target`.
  std::size_t find(std::uint64_t target) const {
    std::size_t pos = 0;
    for (std::size_t step = top_bit_; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  std::vector<std::uint64_t> tree_;
  std::size_t top_bit_ = 1;
};

}  // namespace

void StimulusSet::validate() const {
  const auto space = grid::pattern_space_size(side);
  std::set<std::uint32_t> seen;
  for (std::uint32_t p : patterns) {
    if (p >= space) throw InputError("stimulus pattern out of range for side");
    if (!seen.insert(p).second) {
      throw InputError("stimulus set repeats pattern " + grid::to_hex(p, side));
    }
  }
  if (id.empty()) throw InputError("stimulus set needs an id");
}

StimulusSet sample_stimuli(const grid::FrequencyTable& table, std::size_t n, std::uint64_t seed,
                           std::string id, std::string corpus_id) {
  if (table.distinct() < n) {
    throw DataError("frequency table has " + std::to_string(table.distinct()) +
                    " distinct patterns, cannot draw " + std::to_string(n));
  }
  std::vector<std::uint32_t> patterns;
  std::vector<std::uint64_t> weights;
  for (const auto& [bits, count] : table.counts()) {
    patterns.push_back(bits);
    weights.push_back(count);
  }
  WeightTree tree(weights);
  std::uint64_t remaining = table.total();
  Rng rng(seed);

  StimulusSet set{std::move(id), table.side(), {},
                  StimulusProvenance{std::move(corpus_id), seed, table.total()}};
  set.patterns.reserve(n);
  while (set.patterns.size() < n) {
    const std::size_t i = tree.find(rng.below(remaining));
    set.patterns.push_back(patterns[i]);
    tree.add(i, -static_cast<std::int64_t>(weights[i]));
    remaining -= weights[i];
  }
  return set;
}

std::string stimulus_set_to_json(const StimulusSet& set) {
  nlohmann::ordered_json j;
  j["id"] = set.id;
  j["k"] = set.side;
  auto& patterns = j["patterns"] = nlohmann::ordered_json::array();
  for (std::uint32_t p : set.patterns) patterns.push_back(grid::to_hex(p, set.side));
  j["provenance"] = {{"corpus_id", set.provenance.corpus_id},
                     {"seed", set.provenance.seed},
                     {"corpus_total", set.provenance.corpus_total}};
  return j.dump(2) + "\n";
}

StimulusSet stimulus_set_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    StimulusSet set;
    set.id = j.at("id").get<std::string>();
    set.side = j.at("k").get<int>();
    for (const auto& p : j.at("patterns")) {
      set.patterns.push_back(grid::parse_hex(p.get<std::string>(), set.side).bits);
    }
    if (j.contains("provenance")) {
      const auto& prov = j["provenance"];
      set.provenance.corpus_id = prov.value("corpus_id", "");
      set.provenance.seed = prov.value("seed", std::uint64_t{0});
      set.provenance.corpus_total = prov.value("corpus_total", std::uint64_t{0});
    }
    set.validate();
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid stimulus set JSON: ") + e.what());
  }
}

}  // namespace scenestat::experiment
