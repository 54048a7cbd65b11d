#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vreal/config_io.hpp"
#include "vreal/participant_sim.hpp"
#include "vreal/report.hpp"
#include "vreal/scenario.hpp"

using namespace vreal;
using vreal::testing::error_code_of;

TEST_CASE("scene streams are fixed by seed and scene") {
  CHECK(scene_stream_seed(1, 3) == scene_stream_seed(1, 3));
  CHECK(scene_stream_seed(1, 3) != scene_stream_seed(1, 4));
  CHECK(scene_stream_seed(1, 3) != scene_stream_seed(2, 3));

  SceneRng a(99, 12), b(99, 12);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

  SceneRng r(7, 1);
  double sum = 0.0;
  for (int i = 0; i < 20'000; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 20'000 == doctest::Approx(0.5).epsilon(0.02));

  double nsum = 0.0, nsq = 0.0;
  for (int i = 0; i < 20'000; ++i) {
    const double x = r.normal(3.0, 2.0);
    nsum += x;
    nsq += x * x;
  }
  const double mean = nsum / 20'000;
  CHECK(mean == doctest::Approx(3.0).epsilon(0.03));
  CHECK(std::sqrt(nsq / 20'000 - mean * mean) == doctest::Approx(2.0).epsilon(0.03));

  for (int i = 0; i < 1000; ++i) CHECK(r.truncated_normal(0.0, 1.0) >= 0.0);
  CHECK(r.pick({0.0, 1.0, 0.0}) == 1);
}

TEST_CASE("profiles validate their probabilities") {
  CHECK_NOTHROW(ParticipantProfile{}.validate());
  CHECK_NOTHROW(ParticipantProfile::perfect().validate());
  CHECK_NOTHROW(ParticipantProfile::null_profile().validate());
  ParticipantProfile p;
  p.attention_hit_prob = 1.5;
  CHECK(error_code_of([&] { p.validate(); }) == Errc::ConfigError);
  p = ParticipantProfile{};
  p.latency_sd_ms = -1.0;
  CHECK(error_code_of([&] { p.validate(); }) == Errc::ConfigError);
  p = ParticipantProfile{};
  p.item_choice_weights = {0.0, 0.0, 0.0, 0.0};
  CHECK(error_code_of([&] { p.validate(); }) == Errc::ConfigError);
}

TEST_CASE("same profile and seed give identical logs and reports") {
  const ScoringConfig config;
  const ParticipantProfile p;
  const SessionLog a = simulate_session(p, 42, config);
  const SessionLog b = simulate_session(p, 42, config);
  CHECK(serialize_log(a) == serialize_log(b));
  const TaskScorecard ca = aggregate_scorecard(a, config);
  CHECK(export_report(ca, ca.telemetry) == export_report(aggregate_scorecard(b, config), ca.telemetry));
  CHECK(serialize_log(simulate_session(p, 43, config)) != serialize_log(a));
  CHECK(a.header.seed == 42);
  CHECK(a.header.config_hash == config_hash(config));
}

TEST_CASE("simulated clock is close to an hour") {
  const ScoringConfig config;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const SessionLog log = simulate_session(ParticipantProfile{}, seed, config);
    const double minutes = static_cast<double>(log.events.back().sim_time_ms) / 60'000.0;
    CHECK(minutes > 55.0);
    CHECK(minutes < 75.0);
  }
}

TEST_CASE("perfect and null participants") {
  const ScoringConfig config;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TaskScorecard best = aggregate_scorecard(simulate_session(ParticipantProfile::perfect(), seed, config), config);
    CHECK(best.immediate_recognition == 20);
    CHECK(best.visual_attention.points == 16);
    for (const auto& pm : best.pm) {
      if (pm.polarity == PmPolarity::Positive) CHECK(pm.points == 6);
    }
    CHECK(best.telemetry.practice_attempts.at(11) == 1);
    CHECK(best.telemetry.practice_attempts.at(18) == 1);

    const TaskScorecard worst =
        aggregate_scorecard(simulate_session(ParticipantProfile::null_profile(), seed, config), config);
    for (const auto& pm : worst.pm) CHECK(pm.points == 0);
    CHECK(worst.collection == CollectionScore{0, 0});
    for (int gated : {11, 18}) {
      CHECK(worst.telemetry.practice_attempts.at(gated) >= 1);
      CHECK(worst.telemetry.practice_attempts.at(gated) <= kMaxPracticeAttempts);
    }
  }
}

TEST_CASE("cohort simulation") {
  const ScoringConfig config;
  std::vector<ParticipantProfile> profiles(25);
  std::vector<std::uint64_t> seeds(25);
  for (std::size_t i = 0; i < 25; ++i) seeds[i] = 1000 + i;
  profiles[3] = ParticipantProfile::perfect();

  const auto cohort = simulate_cohort(profiles, seeds, config, 4);
  REQUIRE(cohort.size() == 25);
  for (std::size_t i = 0; i < 25; ++i) {
    CHECK(cohort[i].log == simulate_session(profiles[i], seeds[i], config));
    CHECK(cohort[i].scorecard == aggregate_scorecard(cohort[i].log, config));
  }
  CHECK(simulate_cohort(profiles, seeds, config, 1).at(7).log == cohort[7].log);

  SUBCASE("permuting inputs permutes outputs") {
    std::vector<std::size_t> order(25);
    for (std::size_t i = 0; i < 25; ++i) order[i] = (i * 7 + 3) % 25;
    std::vector<ParticipantProfile> pp;
    std::vector<std::uint64_t> ss;
    for (std::size_t i : order) {
      pp.push_back(profiles[i]);
      ss.push_back(seeds[i]);
    }
    const auto permuted = simulate_cohort(pp, ss, config, 3);
    for (std::size_t k = 0; k < 25; ++k) CHECK(permuted[k].log == cohort[order[k]].log);
  }
  SUBCASE("empty and mismatched inputs") {
    CHECK(simulate_cohort({}, {}, config).empty());
    CHECK(error_code_of([&] { simulate_cohort(profiles, {1, 2}, config); }) == Errc::LengthMismatch);
  }
}

TEST_CASE("generated logs always replay cleanly") {
  const ScoringConfig config;
  ParticipantProfile wild;
  wild.pm_hit_prob = {0.5, 0.5, 0.5};
  wild.prompt_yield_probs = {0.3, 0.3, 0.3};
  wild.false_prompt_yes_prob = 0.5;
  wild.item_choice_weights = {1.0, 1.0, 1.0, 1.0};
  wild.recognition_distractor_prob = 0.5;
  wild.attention_false_alarm_prob = 0.5;
  wild.notes_use_prob = 1.0;
  wild.cooking_timing_sd_s = 8.0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    CAPTURE(seed);
    const SessionLog log = simulate_session(wild, seed, config);
    const ReplayResult r = replay(log);
    REQUIRE(r.final_state.complete);
    CHECK_NOTHROW(aggregate_scorecard(log, config));
  }
}

TEST_CASE("higher hit probabilities never lower mean scores") {
  const ScoringConfig config;
  auto mean_pm = [&](double hit) {
    ParticipantProfile p;
    p.pm_hit_prob = {hit, hit, hit};
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      sum += aggregate_scorecard(simulate_session(p, seed, config), config).pm_total();
    }
    return sum / 200.0;
  };
  const double m0 = mean_pm(0.0), m5 = mean_pm(0.5), m1 = mean_pm(1.0);
  CHECK(m0 <= m5);
  CHECK(m5 <= m1);

  auto mean_attention = [&](double hit) {
    ParticipantProfile p;
    p.attention_hit_prob = hit;
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const TaskScorecard c = aggregate_scorecard(simulate_session(p, seed, config), config);
      sum += c.visual_attention.points + c.auditory_attention.points;
    }
    return sum / 200.0;
  };
  CHECK(mean_attention(0.0) <= mean_attention(1.0));
}
