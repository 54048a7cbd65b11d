#pragma once

// Seeded stochastic participants that play a full session through the
// scenario engine.

#include <array>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "vreal/scoring.hpp"
#include "vreal/session_log.hpp"

namespace vreal {

struct ParticipantProfile {
  /// Probability of acting before the first prompt, by PmDelay.
  std::array<double, 3> pm_hit_prob{0.8, 0.7, 0.6};
  /// Probability of acting in response to prompt 1, 2 and 3 after a miss.
  std::array<double, 3> prompt_yield_probs{0.6, 0.7, 0.8};
  /// Probability of affirming each false prompt.
  double false_prompt_yes_prob = 0.1;
  /// Relative weights of the item-board choice, by ItemCategory.
  std::array<double, 4> item_choice_weights{0.85, 0.05, 0.05, 0.05};
  double recognition_target_prob = 0.8;
  double recognition_distractor_prob = 0.15;
  /// Mean number of extra street units drawn beyond the ideal route.
  double planning_extra_units = 1.0;
  double cooking_timing_sd_s = 2.0;
  double attention_hit_prob = 0.85;
  double attention_false_alarm_prob = 0.1;
  double wrong_controller_prob = 0.1;
  double notes_use_prob = 0.5;
  double latency_mean_ms = 2500.0;
  double latency_sd_ms = 800.0;

  /// Every hit probability 1, every false-alarm probability 0, no timing noise.
  static ParticipantProfile perfect();
  /// Every action probability 0.
  static ParticipantProfile null_profile();

  /// Throws ConfigError when a probability leaves [0,1] or an sd is negative.
  void validate() const;

  bool operator==(const ParticipantProfile&) const = default;
};

/// Deterministic stream for one (seed, scene) pair. Draws are derived from
/// raw mt19937_64 output so they do not depend on the standard library's
/// distribution implementations.
class SceneRng {
 public:
  SceneRng(std::uint64_t seed, int scene);

  double uniform();  // [0, 1)
  bool bernoulli(double p);
  double normal(double mean, double sd);
  /// Normal truncated below at zero (resampled, not clamped).
  double truncated_normal(double mean, double sd);
  std::size_t pick(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t scene_stream_seed(std::uint64_t seed, int scene) noexcept;

inline constexpr int kMaxPracticeAttempts = 10;

SessionLog simulate_session(const ParticipantProfile& profile, std::uint64_t seed,
                            const ScoringConfig& config);

struct SimulatedSession {
  SessionLog log;
  TaskScorecard scorecard;
};

/// Sessions are independent; output order follows input order. Throws
/// LengthMismatch when the lists differ in length.
std::vector<SimulatedSession> simulate_cohort(const std::vector<ParticipantProfile>& profiles,
                                              const std::vector<std::uint64_t>& seeds,
                                              const ScoringConfig& config,
                                              unsigned max_threads = 0);

}  // namespace vreal
