#include "scenestat/experiment/store.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "scenestat/random.h"

namespace scenestat::experiment {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Choice c) { return c == Choice::kRandom ? "random" : "not_random"; }

Choice parse_choice(std::string_view text) {
  if (text == "random") return Choice::kRandom;
  if (text == "not_random") return Choice::kNotRandom;
  throw ValidationError("choice must be \"random\" or \"not_random\"");
}

struct ExperimentStore::State {
  std::map<std::string, std::shared_ptr<const StimulusSet>> sets;
  std::map<std::string, std::shared_ptr<const Session>> sessions;
  std::uint64_t next_counter = 0;
};

namespace {

std::string random_session_id() {
  static std::mutex mu;
  static std::random_device device;
  std::lock_guard lock(mu);
  std::string out;
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(device()));
    out += buf;
  }
  return out;
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::vector<std::size_t> presentation_order(std::uint64_t master_seed, std::uint64_t counter,
                                            std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng::derive(master_seed, {counter});
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

ordered_json session_event(const Session& s) {
  ordered_json j{{"type", "session"},       {"id", s.id},
                 {"set_id", s.set_id},      {"counter", s.counter},
                 {"created_at_ms", s.created_at_ms}, {"order", s.order}};
  if (s.participant.age) j["age"] = *s.participant.age;
  if (s.participant.gender) j["gender"] = *s.participant.gender;
  return j;
}

ordered_json response_event(const std::string& session_id, const Response& r) {
  return ordered_json{{"type", "response"},
                      {"session_id", session_id},
                      {"index", r.index},
                      {"pattern", r.pattern},
                      {"choice", to_string(r.choice)},
                      {"rt_ms", r.rt_ms},
                      {"received_at_ms", r.received_at_ms}};
}

bool same_payload(const Response& a, const Response& b) {
  return a.choice == b.choice && a.rt_ms == b.rt_ms;
}

// Folds one logged event into `state`. Replays are idempotent: an event that
// is already reflected is ignored.
void apply_event(ExperimentStore::State& state, const json& ev) {
  const auto type = ev.at("type").get<std::string>();
  if (type == "session") {
    Session s;
    s.id = ev.at("id").get<std::string>();
    s.set_id = ev.at("set_id").get<std::string>();
    s.counter = ev.at("counter").get<std::uint64_t>();
    s.created_at_ms = ev.at("created_at_ms").get<std::int64_t>();
    s.order = ev.at("order").get<std::vector<std::size_t>>();
    if (ev.contains("age")) s.participant.age = ev["age"].get<int>();
    if (ev.contains("gender")) s.participant.gender = ev["gender"].get<std::string>();
    auto set = state.sets.find(s.set_id);
    if (set == state.sets.end()) {
      throw InputError("log references unknown stimulus set '" + s.set_id + "'");
    }
    if (s.order.size() != set->second->patterns.size()) {
      throw InputError("log session " + s.id + " has a malformed presentation order");
    }
    state.next_counter = std::max(state.next_counter, s.counter + 1);
    std::string id = s.id;
    state.sessions.try_emplace(std::move(id), std::make_shared<const Session>(std::move(s)));
  } else if (type == "response") {
    const auto sid = ev.at("session_id").get<std::string>();
    auto it = state.sessions.find(sid);
    if (it == state.sessions.end()) throw InputError("log response for unknown session " + sid);
    Response r;
    r.index = ev.at("index").get<std::size_t>();
    r.pattern = ev.at("pattern").get<std::uint32_t>();
    r.choice = parse_choice(ev.at("choice").get<std::string>());
    r.rt_ms = ev.at("rt_ms").get<std::int64_t>();
    r.received_at_ms = ev.at("received_at_ms").get<std::int64_t>();
    if (r.index >= it->second->order.size()) throw InputError("log response index out of range");
    if (it->second->responses.contains(r.index)) return;
    auto updated = std::make_shared<Session>(*it->second);
    updated->responses.emplace(r.index, r);
    it->second = std::move(updated);
  } else {
    throw InputError("unknown event type '" + type + "'");
  }
}

void replay(ExperimentStore::State& state, const std::vector<std::string>& lines,
            const std::filesystem::path& source) {
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    try {
      apply_event(state, json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(source.string() + ": corrupt event: " + e.what(), lineno,
                       ParseError::Unit::kLine);
    }
  }
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ExperimentStore::ExperimentStore(StoreOptions options) : options_(std::move(options)) {
  namespace fs = std::filesystem;
  if (!options_.id_source) options_.id_source = random_session_id;
  if (!options_.clock) options_.clock = now_ms;
  if (!fs::is_directory(options_.data_dir)) {
    throw InputError("data directory " + options_.data_dir.string() + " does not exist");
  }
  std::error_code ec;
  fs::create_directories(options_.data_dir / "sets", ec);
  if (ec) throw InputError("cannot create " + (options_.data_dir / "sets").string());

  auto state = std::make_shared<State>();
  std::vector<fs::path> set_files;
  for (const auto& entry : fs::directory_iterator(options_.data_dir / "sets")) {
    if (entry.path().extension() == ".json") set_files.push_back(entry.path());
  }
  std::sort(set_files.begin(), set_files.end());
  for (const auto& path : set_files) {
    auto set = std::make_shared<const StimulusSet>(stimulus_set_from_json(read_file(path)));
    if (!state->sets.emplace(set->id, set).second) {
      throw InputError("duplicate stimulus set id '" + set->id + "'");
    }
  }

  const auto snapshot = options_.data_dir / "snapshot.jsonl";
  if (fs::exists(snapshot)) replay(*state, read_lines(snapshot), snapshot);
  log_ = std::make_unique<EventLog>(options_.data_dir / "events.jsonl");
  replay(*state, log_->recovered(), log_->path());
  std::atomic_store(&state_, std::shared_ptr<const State>(std::move(state)));
}

ExperimentStore::~ExperimentStore() = default;

std::shared_ptr<const ExperimentStore::State> ExperimentStore::state() const {
  return std::atomic_load(&state_);
}

void ExperimentStore::add_set(const StimulusSet& set) {
  set.validate();
  std::lock_guard lock(write_mutex_);
  auto current = state();
  if (auto it = current->sets.find(set.id); it != current->sets.end()) {
    if (*it->second == set) return;
    throw ConflictError("stimulus set '" + set.id + "' already exists with different content");
  }
  if (set.id.find_first_of("/\\") != std::string::npos || set.id.starts_with('.')) {
    throw ValidationError("stimulus set id must be a plain file name");
  }
  write_file_atomic(options_.data_dir / "sets" / (set.id + ".json"), stimulus_set_to_json(set));
  auto next = std::make_shared<State>(*current);
  next->sets.emplace(set.id, std::make_shared<const StimulusSet>(set));
  std::atomic_store(&state_, std::shared_ptr<const State>(std::move(next)));
}

std::shared_ptr<const StimulusSet> ExperimentStore::find_set(const std::string& id) const {
  auto s = state();
  auto it = s->sets.find(id);
  return it == s->sets.end() ? nullptr : it->second;
}

std::vector<std::string> ExperimentStore::set_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, set] : state()->sets) ids.push_back(id);
  return ids;
}

Session ExperimentStore::create_session(const std::string& set_id, const ParticipantMeta& meta) {
  if (meta.age && (*meta.age < 0 || *meta.age > 150)) {
    throw ValidationError("age must be between 0 and 150");
  }
  std::lock_guard lock(write_mutex_);
  auto current = state();
  auto set = current->sets.find(set_id);
  if (set == current->sets.end()) throw NotFoundError("unknown stimulus set '" + set_id + "'");

  Session s;
  do {
    s.id = options_.id_source();
  } while (current->sessions.contains(s.id));
  s.set_id = set_id;
  s.participant = meta;
  s.counter = current->next_counter;
  s.created_at_ms = options_.clock();
  s.order = presentation_order(options_.master_seed, s.counter, set->second->patterns.size());

  log_->append(session_event(s).dump());
  auto next = std::make_shared<State>(*current);
  next->next_counter = s.counter + 1;
  next->sessions.emplace(s.id, std::make_shared<const Session>(s));
  std::atomic_store(&state_, std::shared_ptr<const State>(std::move(next)));
  return s;
}

std::optional<Session> ExperimentStore::find_session(const std::string& id) const {
  auto s = state();
  auto it = s->sessions.find(id);
  if (it == s->sessions.end()) return std::nullopt;
  return *it->second;
}

RecordOutcome ExperimentStore::record_response(const std::string& session_id, std::size_t index,
                                               Choice choice, std::int64_t rt_ms) {
  if (rt_ms < 0) throw ValidationError("rt_ms must be non-negative");
  std::lock_guard lock(write_mutex_);
  auto current = state();
  auto it = current->sessions.find(session_id);
  if (it == current->sessions.end()) throw NotFoundError("unknown session '" + session_id + "'");
  const Session& session = *it->second;
  if (index >= session.order.size()) {
    throw ValidationError("trial index " + std::to_string(index) + " outside [0, " +
                          std::to_string(session.order.size()) + ")");
  }
  Response r;
  r.index = index;
  r.choice = choice;
  r.rt_ms = rt_ms;
  if (auto prior = session.responses.find(index); prior != session.responses.end()) {
    if (same_payload(prior->second, r)) return RecordOutcome::kDuplicate;
    throw ConflictError("trial " + std::to_string(index) + " already has a different response");
  }
  r.pattern = current->sets.at(session.set_id)->patterns[session.order[index]];
  r.received_at_ms = options_.clock();

  log_->append(response_event(session_id, r).dump());
  auto updated = std::make_shared<Session>(session);
  updated->responses.emplace(index, r);
  auto next = std::make_shared<State>(*current);
  next->sessions[session_id] = std::move(updated);
  std::atomic_store(&state_, std::shared_ptr<const State>(std::move(next)));
  return RecordOutcome::kStored;
}

AggregateExport ExperimentStore::export_aggregates(const std::string& set_id) const {
  auto s = state();
  auto set = s->sets.find(set_id);
  if (set == s->sets.end()) throw NotFoundError("unknown stimulus set '" + set_id + "'");

  AggregateExport out;
  out.set_id = set_id;
  out.side = set->second->side;
  std::map<std::uint32_t, std::size_t> row_of;
  for (std::uint32_t p : set->second->patterns) {
    row_of[p] = out.rows.size();
    out.rows.push_back({p, 0, 0});
  }
  for (const auto& [id, session] : s->sessions) {
    if (session->set_id != set_id) continue;
    if (!session->completed()) {
      ++out.incomplete_sessions;
      continue;
    }
    ++out.completed_sessions;
    for (const auto& [index, r] : session->responses) {
      auto& row = out.rows[row_of.at(r.pattern)];
      ++row.n_total;
      if (r.choice == Choice::kRandom) ++row.n_random;
    }
  }
  return out;
}

void ExperimentStore::write_snapshot() {
  std::lock_guard lock(write_mutex_);
  auto current = state();
  std::vector<std::shared_ptr<const Session>> sessions;
  for (const auto& [id, s] : current->sessions) sessions.push_back(s);
  std::sort(sessions.begin(), sessions.end(),
            [](const auto& a, const auto& b) { return a->counter < b->counter; });
  std::string content;
  for (const auto& s : sessions) {
    content += session_event(*s).dump() + "\n";
    for (const auto& [index, r] : s->responses) content += response_event(s->id, r).dump() + "\n";
  }
  write_file_atomic(options_.data_dir / "snapshot.jsonl", content);
  log_->truncate();
}

std::size_t ExperimentStore::session_count() const { return state()->sessions.size(); }

std::string aggregates_to_csv(const AggregateExport& e) {
  std::ostringstream out;
  out << "# set_id=" << e.set_id << " k=" << e.side << " completed_sessions=" << e.completed_sessions
      << " incomplete_sessions=" << e.incomplete_sessions
      << " presentation=all_trials_self_paced\n";
  if (e.completed_sessions == 0) out << "# warning=no_completed_sessions\n";
  out << "pattern_hex,n_random,n_total\n";
  for (const auto& row : e.rows) {
    out << grid::to_hex(row.pattern, e.side) << ',' << row.n_random << ',' << row.n_total << '\n';
  }
  return out.str();
}

std::vector<stats::JudgmentAggregate> aggregates_from_csv(std::string_view text, int side) {
  std::istringstream in{std::string(text)};
  std::vector<stats::JudgmentAggregate> rows;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  auto parse_u64 = [&](std::string_view s) {
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
      throw ParseError("invalid count '" + std::string(s) + "'", lineno, ParseError::Unit::kLine);
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!have_header) {
      if (line != "pattern_hex,n_random,n_total") {
        throw ParseError("expected header 'pattern_hex,n_random,n_total'", lineno,
                         ParseError::Unit::kLine);
      }
      have_header = true;
      continue;
    }
    std::string_view view(line);
    const auto c1 = view.find(',');
    const auto c2 = view.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos) {
      throw ParseError("expected three columns", lineno, ParseError::Unit::kLine);
    }
    stats::JudgmentAggregate row;
    try {
      row.pattern = grid::parse_hex(view.substr(0, c1), side).bits;
    } catch (const InputError& e) {
      throw ParseError(e.what(), lineno, ParseError::Unit::kLine);
    }
    row.n_random = parse_u64(view.substr(c1 + 1, c2 - c1 - 1));
    row.n_total = parse_u64(view.substr(c2 + 1));
    if (row.n_random > row.n_total) {
      throw ParseError("n_random exceeds n_total", lineno, ParseError::Unit::kLine);
    }
    rows.push_back(row);
  }
  if (!have_header) throw ParseError("missing CSV header", lineno, ParseError::Unit::kLine);
  return rows;
}

}  // namespace scenestat::experiment
