#include "scenestat/complexity/turing.h"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "scenestat/error.h"

namespace scenestat::complexity {

TuringMachine2D::TuringMachine2D(int n_states) : n_states_(n_states) {
  if (n_states < 1) throw InputError("a machine needs at least one state");
  table_.resize(static_cast<std::size_t>(n_states) * 2);
}

Transition TuringMachine2D::decode_choice(int n_states, std::uint64_t choice) {
  Transition t;
  t.write = static_cast<std::uint8_t>(choice & 1u);
  t.move = static_cast<Move>((choice >> 1) & 3u);
  const auto next = static_cast<int>(choice >> 3);
  t.next = next == n_states ? Transition::kHalt : next;
  return t;
}

TuringMachine2D TuringMachine2D::random(int n_states, Rng& rng) {
  TuringMachine2D m(n_states);
  const std::uint64_t choices = 8 * static_cast<std::uint64_t>(n_states + 1);
  for (auto& entry : m.table_) entry = decode_choice(n_states, rng.below(choices));
  return m;
}

void TuringMachine2D::set(int state, int symbol, Transition t) {
  if (state < 0 || state >= n_states_ || symbol < 0 || symbol > 1) {
    throw InputError("transition index out of range");
  }
  if (t.write > 1) throw InputError("machines write only 0 or 1");
  if (t.next != Transition::kHalt && (t.next < 0 || t.next >= n_states_)) {
    throw InputError("transition names an unknown state");
  }
  table_[state * 2 + symbol] = t;
}

std::string TuringMachine2D::describe() const {
  static constexpr char kMoves[] = "UDLR";
  std::ostringstream out;
  for (int s = 0; s < n_states_; ++s) {
    for (int sym = 0; sym < 2; ++sym) {
      const auto& t = at(s, sym);
      out << (s || sym ? " " : "") << int(t.write) << kMoves[static_cast<int>(t.move)];
      if (t.next == Transition::kHalt) out << 'H';
      else out << t.next;
    }
  }
  return out.str();
}

std::optional<grid::Pattern> RunResult::as_pattern(int side) const {
  if (!halted || width != side || height != side) return std::nullopt;
  return grid::Pattern::from_cells(side, cells);
}

// The head never leaves the square of radius max_steps around the origin, so a
// dense array covers every reachable cell when that square is small enough.
struct MachineRunner::Tape {
  static constexpr std::uint64_t kDenseLimit = 2047;

  explicit Tape(std::uint64_t max_steps) {
    if (max_steps <= kDenseLimit) {
      span = static_cast<std::int64_t>(2 * max_steps + 1);
      dense.assign(static_cast<std::size_t>(span * span), 0);
      origin = static_cast<std::int64_t>(max_steps);
    }
  }

  bool is_dense() const { return !dense.empty(); }

  std::uint8_t get(std::int64_t row, std::int64_t col) const {
    if (is_dense()) return dense[index(row, col)];
    auto it = sparse.find(key(row, col));
    return it == sparse.end() ? 0 : it->second;
  }

  void put(std::int64_t row, std::int64_t col, std::uint8_t v) {
    if (is_dense()) {
      const auto i = index(row, col);
      if (!touched_flag(i)) touched.push_back(i);
      dense[i] = v | 2u;  // bit 1 marks "written"
    } else {
      sparse[key(row, col)] = v;
    }
  }

  void clear() {
    for (auto i : touched) dense[i] = 0;
    touched.clear();
    sparse.clear();
  }

  std::size_t index(std::int64_t row, std::int64_t col) const {
    return static_cast<std::size_t>((row + origin) * span + (col + origin));
  }
  bool touched_flag(std::size_t i) const { return dense[i] & 2u; }
  static std::int64_t key(std::int64_t row, std::int64_t col) {
    return (row << 32) ^ (col & 0xffffffff);
  }

  std::int64_t span = 0;
  std::int64_t origin = 0;
  std::vector<std::uint8_t> dense;
  std::vector<std::size_t> touched;
  std::unordered_map<std::int64_t, std::uint8_t> sparse;
};

MachineRunner::MachineRunner(std::uint64_t max_steps)
    : max_steps_(max_steps), tape_(std::make_unique<Tape>(max_steps)) {
  if (max_steps < 1) throw InputError("max_steps must be at least 1");
}

MachineRunner::~MachineRunner() = default;
MachineRunner::MachineRunner(MachineRunner&&) noexcept = default;
MachineRunner& MachineRunner::operator=(MachineRunner&&) noexcept = default;

RunResult MachineRunner::run(const TuringMachine2D& machine, std::optional<int> only_side) {
  Tape& tape = *tape_;
  tape.clear();
  std::int64_t row = 0, col = 0;
  std::int64_t min_row = 0, max_row = 0, min_col = 0, max_col = 0;
  int state = 0;
  RunResult result;

  while (result.steps < max_steps_) {
    const auto& t = machine.at(state, tape.get(row, col) & 1u);
    tape.put(row, col, t.write);
    min_row = std::min(min_row, row);
    max_row = std::max(max_row, row);
    min_col = std::min(min_col, col);
    max_col = std::max(max_col, col);
    switch (t.move) {
      case Move::kUp: --row; break;
      case Move::kDown: ++row; break;
      case Move::kLeft: --col; break;
      case Move::kRight: ++col; break;
    }
    ++result.steps;
    if (t.next == Transition::kHalt) {
      result.halted = true;
      break;
    }
    state = t.next;
  }

  result.width = static_cast<int>(max_col - min_col + 1);
  result.height = static_cast<int>(max_row - min_row + 1);
  if (!result.halted) return result;
  if (only_side && (result.width != *only_side || result.height != *only_side)) return result;
  result.cells.resize(static_cast<std::size_t>(result.width) * result.height);
  for (std::int64_t r = min_row; r <= max_row; ++r) {
    for (std::int64_t c = min_col; c <= max_col; ++c) {
      result.cells[(r - min_row) * result.width + (c - min_col)] = tape.get(r, c) & 1u;
    }
  }
  return result;
}

RunResult run_machine(const TuringMachine2D& machine, std::uint64_t max_steps) {
  MachineRunner runner(max_steps);
  return runner.run(machine);
}

}  // namespace scenestat::complexity
