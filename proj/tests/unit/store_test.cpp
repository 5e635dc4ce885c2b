#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "scenestat/error.h"
#include "scenestat/experiment/store.h"
#include "scenestat/random.h"
#include "test_support.h"

namespace scenestat::experiment {
namespace {

StimulusSet make_set(std::size_t n, const std::string& id = "set-a") {
  StimulusSet set;
  set.id = id;
  set.side = 4;
  for (std::uint32_t i = 0; i < n; ++i) set.patterns.push_back(i * 37 + 5);
  return set;
}

StoreOptions options_for(const std::filesystem::path& dir, std::uint64_t seed = 42) {
  StoreOptions o;
  o.data_dir = dir;
  o.master_seed = seed;
  auto counter = std::make_shared<int>(0);
  o.id_source = [counter] { return "s" + std::to_string((*counter)++); };
  o.clock = [] { return std::int64_t{1'700'000'000'000}; };
  return o;
}

bool is_permutation_of_indices(const std::vector<std::size_t>& order, std::size_t n) {
  std::vector<std::size_t> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> want(n);
  std::iota(want.begin(), want.end(), 0);
  return sorted == want;
}

// Deterministic scripted answer: white-heavy patterns are judged random.
Choice scripted_choice(std::uint32_t pattern, int participant) {
  return (std::popcount(pattern) + participant) % 3 == 0 ? Choice::kRandom : Choice::kNotRandom;
}

void answer_all(ExperimentStore& store, const Session& s, const StimulusSet& set, int participant) {
  for (std::size_t i = 0; i < s.order.size(); ++i) {
    store.record_response(s.id, i, scripted_choice(set.patterns[s.order[i]], participant), 500);
  }
}

TEST(Store, SessionsGetDistinctIdsAndPermutations) {
  testing::TempDir dir;
  ExperimentStore store(StoreOptions{dir.path(), 1, {}, {}});
  store.add_set(make_set(10));
  const Session a = store.create_session("set-a", {});
  const Session b = store.create_session("set-a", {25, "f"});
  EXPECT_NE(a.id, b.id);
  EXPECT_EQ(a.id.size(), 32u);
  EXPECT_TRUE(is_permutation_of_indices(a.order, 10));
  EXPECT_TRUE(is_permutation_of_indices(b.order, 10));
  EXPECT_EQ(b.counter, a.counter + 1);
  EXPECT_THROW(store.create_session("nope", {}), NotFoundError);
  EXPECT_THROW(store.create_session("set-a", {200, {}}), ValidationError);
}

TEST(Store, OrderReproducibleAcrossRestart) {
  testing::TempDir first, second;
  std::vector<std::size_t> order_a, order_b;
  {
    ExperimentStore store(options_for(first.path()));
    store.add_set(make_set(30));
    order_a = store.create_session("set-a", {}).order;
  }
  {
    ExperimentStore store(options_for(second.path()));
    store.add_set(make_set(30));
    order_b = store.create_session("set-a", {}).order;
  }
  EXPECT_EQ(order_a, order_b);

  ExperimentStore reopened(options_for(first.path()));
  const auto session = reopened.find_session("s0");
  ASSERT_TRUE(session.has_value());
  EXPECT_EQ(session->order, order_a);
  // The counter survives the restart, so the next order matches a fresh store's second session.
  ExperimentStore fresh(options_for(second.path()));
  EXPECT_EQ(reopened.create_session("set-a", {}).order, fresh.create_session("set-a", {}).order);
}

TEST(Store, RecordIdempotenceConflictAndRange) {
  testing::TempDir dir;
  ExperimentStore store(options_for(dir.path()));
  store.add_set(make_set(5));
  const Session s = store.create_session("set-a", {});
  EXPECT_EQ(store.record_response(s.id, 0, Choice::kRandom, 300), RecordOutcome::kStored);
  EXPECT_EQ(store.record_response(s.id, 0, Choice::kRandom, 300), RecordOutcome::kDuplicate);
  EXPECT_EQ(store.find_session(s.id)->responses.size(), 1u);
  EXPECT_THROW(store.record_response(s.id, 0, Choice::kNotRandom, 300), ConflictError);
  EXPECT_THROW(store.record_response(s.id, 5, Choice::kRandom, 300), ValidationError);
  EXPECT_THROW(store.record_response(s.id, 1, Choice::kRandom, -1), ValidationError);
  EXPECT_THROW(store.record_response("missing", 0, Choice::kRandom, 1), NotFoundError);
  EXPECT_EQ(store.find_session(s.id)->responses.at(0).pattern, make_set(5).patterns[s.order[0]]);
}

TEST(Store, ExportCountsCompletedSessionsOnly) {
  testing::TempDir dir;
  ExperimentStore store(options_for(dir.path()));
  const StimulusSet set = make_set(6);
  store.add_set(set);

  const auto empty = store.export_aggregates("set-a");
  EXPECT_EQ(empty.rows.size(), 6u);
  for (const auto& row : empty.rows) EXPECT_EQ(row.n_total, 0u);
  EXPECT_NE(aggregates_to_csv(empty).find("# warning=no_completed_sessions"), std::string::npos);

  // Three scripted sessions plus one abandoned after two trials.
  std::map<std::uint32_t, std::pair<std::uint64_t, std::uint64_t>> tally;
  for (int p = 0; p < 3; ++p) {
    const Session s = store.create_session("set-a", {});
    answer_all(store, s, set, p);
    for (std::uint32_t pattern : set.patterns) {
      tally[pattern].first += scripted_choice(pattern, p) == Choice::kRandom;
      tally[pattern].second += 1;
    }
  }
  const Session abandoned = store.create_session("set-a", {});
  store.record_response(abandoned.id, 0, Choice::kRandom, 10);
  store.record_response(abandoned.id, 1, Choice::kRandom, 10);

  const auto e = store.export_aggregates("set-a");
  EXPECT_EQ(e.completed_sessions, 3u);
  EXPECT_EQ(e.incomplete_sessions, 1u);
  ASSERT_EQ(e.rows.size(), set.patterns.size());
  std::uint64_t sum_total = 0;
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    EXPECT_EQ(e.rows[i].pattern, set.patterns[i]);
    EXPECT_EQ(e.rows[i].n_random, tally[set.patterns[i]].first);
    EXPECT_EQ(e.rows[i].n_total, tally[set.patterns[i]].second);
    sum_total += e.rows[i].n_total;
  }
  EXPECT_EQ(sum_total, e.completed_sessions * set.patterns.size());
  EXPECT_THROW(store.export_aggregates("other"), NotFoundError);

  const std::string csv = aggregates_to_csv(e);
  EXPECT_NE(csv.find("presentation=all_trials_self_paced"), std::string::npos);
  const auto parsed = aggregates_from_csv(csv, 4);
  ASSERT_EQ(parsed.size(), e.rows.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    EXPECT_EQ(parsed[i].pattern, e.rows[i].pattern);
    EXPECT_EQ(parsed[i].n_random, e.rows[i].n_random);
  }
}

TEST(Store, DurabilityWithTornTrailingRecord) {
  testing::TempDir dir;
  std::string sid;
  {
    ExperimentStore store(options_for(dir.path()));
    store.add_set(make_set(4));
    const Session s = store.create_session("set-a", {});
    sid = s.id;
    store.record_response(sid, 0, Choice::kRandom, 100);
    store.record_response(sid, 1, Choice::kNotRandom, 100);
  }
  // Simulate a crash halfway through writing the next response.
  const auto log = dir / "events.jsonl";
  std::string content = testing::read_file(log);
  const std::string last = content.substr(content.rfind('\n', content.size() - 2) + 1);
  testing::write_file(log, content + last.substr(0, last.size() / 2));

  ExperimentStore reopened(options_for(dir.path()));
  const auto s = reopened.find_session(sid);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->responses.size(), 2u);
  EXPECT_EQ(reopened.record_response(sid, 2, Choice::kRandom, 100), RecordOutcome::kStored);
  EXPECT_EQ(testing::read_file(log).find(last.substr(0, last.size() / 2) + "{"), std::string::npos);
}

TEST(Store, SnapshotAndReplayAreIdempotent) {
  testing::TempDir dir;
  AggregateExport before;
  {
    ExperimentStore store(options_for(dir.path()));
    const StimulusSet set = make_set(8);
    store.add_set(set);
    for (int p = 0; p < 4; ++p) answer_all(store, store.create_session("set-a", {}), set, p);
    before = store.export_aggregates("set-a");
    store.write_snapshot();
    EXPECT_EQ(testing::read_file(dir / "events.jsonl"), "");
    store.write_snapshot();
  }
  ExperimentStore reopened(options_for(dir.path()));
  const auto after = reopened.export_aggregates("set-a");
  EXPECT_EQ(aggregates_to_csv(after), aggregates_to_csv(before));
  EXPECT_EQ(reopened.session_count(), 4u);
}

TEST(Store, SetsLoadFromDataDirectory) {
  testing::TempDir dir;
  {
    ExperimentStore store(options_for(dir.path()));
    store.add_set(make_set(3, "alpha"));
    EXPECT_NO_THROW(store.add_set(make_set(3, "alpha")));
    EXPECT_THROW(store.add_set(make_set(4, "alpha")), ConflictError);
    EXPECT_THROW(store.add_set(make_set(4, "../evil")), ValidationError);
  }
  ExperimentStore reopened(options_for(dir.path()));
  EXPECT_EQ(reopened.set_ids(), std::vector<std::string>{"alpha"});
  EXPECT_THROW(ExperimentStore(options_for(dir / "absent")), InputError);
}

TEST(Store, ConcurrentParticipantsMatchSerialReplay) {
  const StimulusSet set = make_set(40);
  constexpr int kParticipants = 50;

  testing::TempDir concurrent_dir;
  StoreOptions copts{concurrent_dir.path(), 7, {}, {}};
  ExperimentStore concurrent(copts);
  concurrent.add_set(set);

  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int p = 0; p < kParticipants; ++p) {
    threads.emplace_back([&, p] {
      try {
        const Session s = concurrent.create_session("set-a", {});
        Rng rng(p);
        for (std::size_t i = 0; i < s.order.size(); ++i) {
          const std::uint32_t pattern = set.patterns[s.order[i]];
          concurrent.record_response(s.id, i, scripted_choice(pattern, p), 100);
          if (rng.below(4) == 0) concurrent.record_response(s.id, i, scripted_choice(pattern, p), 100);
          if (rng.below(8) == 0) std::this_thread::yield();
        }
      } catch (...) {
        ++failures;
      }
    });
  }
  for (auto& t : threads) t.join();
  ASSERT_EQ(failures.load(), 0);

  // Serial replay: each participant's answers depend only on the pattern shown.
  testing::TempDir serial_dir;
  ExperimentStore serial(options_for(serial_dir.path(), 99));
  serial.add_set(set);
  for (int p = 0; p < kParticipants; ++p) answer_all(serial, serial.create_session("set-a", {}), set, p);

  const auto got = concurrent.export_aggregates("set-a");
  const auto want = serial.export_aggregates("set-a");
  EXPECT_EQ(got.completed_sessions, static_cast<std::size_t>(kParticipants));
  EXPECT_EQ(aggregates_to_csv(got), aggregates_to_csv(want));

  ExperimentStore reopened(copts);
  EXPECT_EQ(aggregates_to_csv(reopened.export_aggregates("set-a")), aggregates_to_csv(want));
}

TEST(Store, ChoiceNames) {
  EXPECT_EQ(parse_choice("random"), Choice::kRandom);
  EXPECT_EQ(to_string(Choice::kNotRandom), "not_random");
  EXPECT_THROW(parse_choice("maybe"), ValidationError);
}

}  // namespace
}  // namespace scenestat::experiment
