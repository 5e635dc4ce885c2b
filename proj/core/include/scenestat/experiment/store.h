#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "scenestat/error.h"
#include "scenestat/experiment/event_log.h"
#include "scenestat/experiment/stimulus.h"
#include "scenestat/stats/mediation.h"

namespace scenestat::experiment {

class NotFoundError : public InputError {
 public:
  using InputError::InputError;
};

class ConflictError : public InputError {
 public:
  using InputError::InputError;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

enum class Choice { kRandom, kNotRandom };

std::string_view to_string(Choice c);
/// "random" or "not_random"; throws ValidationError otherwise.
Choice parse_choice(std::string_view text);

struct ParticipantMeta {
  std::optional<int> age;
  std::optional<std::string> gender;

  friend bool operator==(const ParticipantMeta&, const ParticipantMeta&) = default;
};

struct Response {
  std::size_t index = 0;
  std::uint32_t pattern = 0;
  Choice choice = Choice::kRandom;
  std::int64_t rt_ms = 0;
  std::int64_t received_at_ms = 0;  // Unix epoch milliseconds
};

struct Session {
  std::string id;
  std::string set_id;
  ParticipantMeta participant;
  std::vector<std::size_t> order;  // trial index -> position in the stimulus set
  std::int64_t created_at_ms = 0;
  std::uint64_t counter = 0;  // creation rank; seeds the presentation order
  std::map<std::size_t, Response> responses;

  bool completed() const { return responses.size() == order.size(); }
};

enum class RecordOutcome { kStored, kDuplicate };

struct AggregateExport {
  std::string set_id;
  int side = 4;
  std::vector<stats::JudgmentAggregate> rows;  // stimulus set order
  std::size_t completed_sessions = 0;
  std::size_t incomplete_sessions = 0;
};

/// `# …` metadata lines then `pattern_hex,n_random,n_total`.
std::string aggregates_to_csv(const AggregateExport& e);
/// Reads the same format; metadata lines are optional.
std::vector<stats::JudgmentAggregate> aggregates_from_csv(std::string_view text, int side);

struct StoreOptions {
  std::filesystem::path data_dir;
  std::uint64_t master_seed = 0;
  /// Generates session ids; defaults to 128 bits from std::random_device.
  std::function<std::string()> id_source;
  /// Wall clock in Unix milliseconds; overridable for tests.
  std::function<std::int64_t()> clock;
};

/// Sessions and judgments backed by an append-only JSONL event log in
/// data_dir. Writers are serialized and every event is fsync'd before the
/// call returns; readers work on immutable snapshots without locking.
class ExperimentStore {
 public:
  /// Loads stimulus sets from data_dir/sets/*.json, then replays
  /// data_dir/snapshot.jsonl and data_dir/events.jsonl. Throws InputError if
  /// data_dir is not a writable directory or a log is corrupt before its
  /// final record.
  explicit ExperimentStore(StoreOptions options);
  ~ExperimentStore();

  ExperimentStore(const ExperimentStore&) = delete;
  ExperimentStore& operator=(const ExperimentStore&) = delete;

  /// Registers a set and writes it to data_dir/sets/<id>.json. Re-adding an
  /// identical set is a no-op; a different set under the same id conflicts.
  void add_set(const StimulusSet& set);
  std::shared_ptr<const StimulusSet> find_set(const std::string& id) const;
  std::vector<std::string> set_ids() const;

  Session create_session(const std::string& set_id, const ParticipantMeta& meta);
  std::optional<Session> find_session(const std::string& id) const;

  /// Appends the response durably. A retry with the same choice and rt is
  /// acknowledged as a duplicate; a different payload for an answered trial
  /// throws ConflictError; an index outside the session throws
  /// ValidationError; an unknown session throws NotFoundError.
  RecordOutcome record_response(const std::string& session_id, std::size_t index, Choice choice,
                                std::int64_t rt_ms);

  /// Tallies completed sessions only; abandoned ones are excluded.
  AggregateExport export_aggregates(const std::string& set_id) const;

  /// Rewrites snapshot.jsonl from the current state and empties the event
  /// log. Called on clean shutdown.
  void write_snapshot();

  std::size_t session_count() const;

  struct State;  // opaque; defined in store.cpp

 private:
  std::shared_ptr<const State> state() const;

  StoreOptions options_;
  std::mutex write_mutex_;
  std::shared_ptr<const State> state_;
  std::unique_ptr<EventLog> log_;
};

}  // namespace scenestat::experiment
