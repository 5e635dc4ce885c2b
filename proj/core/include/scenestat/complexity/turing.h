#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "scenestat/grid/pattern.h"
#include "scenestat/random.h"

namespace scenestat::complexity {

enum class Move : std::uint8_t { kUp, kDown, kLeft, kRight };

struct Transition {
  static constexpr int kHalt = -1;

  std::uint8_t write = 0;
  Move move = Move::kUp;
  int next = kHalt;  // 0-based state index, or kHalt

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Two-symbol turmite: a Turing machine whose head walks a 2D grid. States are
/// 0-based here; state 0 is the start state.
class TuringMachine2D {
 public:
  /// All entries default to (write 0, up, HALT).
  explicit TuringMachine2D(int n_states);

  /// Every one of the 2s entries drawn uniformly from the 2·4·(s+1) choices.
  static TuringMachine2D random(int n_states, Rng& rng);

  /// Choice index c ∈ [0, 8(s+1)): write = c mod 2, move = (c / 2) mod 4,
  /// next = c / 8 with s meaning HALT.
  static Transition decode_choice(int n_states, std::uint64_t choice);

  int n_states() const { return n_states_; }
  const Transition& at(int state, int symbol) const { return table_[state * 2 + symbol]; }
  void set(int state, int symbol, Transition t);

  std::string describe() const;

 private:
  int n_states_;
  std::vector<Transition> table_;
};

struct RunResult {
  bool halted = false;
  std::uint64_t steps = 0;
  // Bounding box of every cell ever written. `cells` (row-major, unwritten
  // cells inside the box read as blank 0) is filled only for halting runs.
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> cells;

  /// The produced array when the machine halted with a k×k bounding box.
  std::optional<grid::Pattern> as_pattern(int side) const;
};

/// Starts at state 0 on an all-0 unbounded grid with the head at the origin.
/// Each step writes, moves, then changes state; entering HALT ends the run.
/// A run still going after max_steps steps is reported as non-halting.
RunResult run_machine(const TuringMachine2D& machine, std::uint64_t max_steps);

/// Reusable scratch space for running many machines; avoids reallocating the
/// grid per run. Not thread safe; use one per thread.
class MachineRunner {
 public:
  explicit MachineRunner(std::uint64_t max_steps);
  ~MachineRunner();
  MachineRunner(MachineRunner&&) noexcept;
  MachineRunner& operator=(MachineRunner&&) noexcept;

  /// Same semantics as run_machine. When `only_side` is set, the bounding box
  /// cells are materialized only if the box is only_side × only_side.
  RunResult run(const TuringMachine2D& machine, std::optional<int> only_side = std::nullopt);

 private:
  struct Tape;
  std::uint64_t max_steps_;
  std::unique_ptr<Tape> tape_;
};

}  // namespace scenestat::complexity
