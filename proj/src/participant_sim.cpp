#include "vreal/participant_sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <thread>

#include "vreal/config_io.hpp"
#include "vreal/error.hpp"
#include "vreal/scenario.hpp"

namespace vreal {

ParticipantProfile ParticipantProfile::perfect() {
  ParticipantProfile p;
  p.pm_hit_prob = {1.0, 1.0, 1.0};
  p.prompt_yield_probs = {1.0, 1.0, 1.0};
  p.false_prompt_yes_prob = 0.0;
  p.item_choice_weights = {1.0, 0.0, 0.0, 0.0};
  p.recognition_target_prob = 1.0;
  p.recognition_distractor_prob = 0.0;
  p.planning_extra_units = 0.0;
  p.cooking_timing_sd_s = 0.0;
  p.attention_hit_prob = 1.0;
  p.attention_false_alarm_prob = 0.0;
  p.wrong_controller_prob = 0.0;
  p.notes_use_prob = 1.0;
  return p;
}

ParticipantProfile ParticipantProfile::null_profile() {
  ParticipantProfile p;
  p.pm_hit_prob = {0.0, 0.0, 0.0};
  p.prompt_yield_probs = {0.0, 0.0, 0.0};
  p.false_prompt_yes_prob = 0.0;
  p.recognition_target_prob = 0.0;
  p.recognition_distractor_prob = 0.0;
  p.attention_hit_prob = 0.0;
  p.attention_false_alarm_prob = 0.0;
  p.wrong_controller_prob = 0.0;
  p.notes_use_prob = 0.0;
  return p;
}

void ParticipantProfile::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::ConfigError, std::string(name) + " must lie in [0,1]");
    }
  };
  for (double p : pm_hit_prob) prob(p, "pm_hit_prob");
  for (double p : prompt_yield_probs) prob(p, "prompt_yield_probs");
  prob(false_prompt_yes_prob, "false_prompt_yes_prob");
  prob(recognition_target_prob, "recognition_target_prob");
  prob(recognition_distractor_prob, "recognition_distractor_prob");
  prob(attention_hit_prob, "attention_hit_prob");
  prob(attention_false_alarm_prob, "attention_false_alarm_prob");
  prob(wrong_controller_prob, "wrong_controller_prob");
  prob(notes_use_prob, "notes_use_prob");
  double weight_sum = 0.0;
  for (double w : item_choice_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::ConfigError, "item_choice_weights must be >= 0");
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw Error(Errc::ConfigError, "item_choice_weights must not all be zero");
  for (double v : {planning_extra_units, cooking_timing_sd_s, latency_mean_ms, latency_sd_ms}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(Errc::ConfigError, "means and standard deviations must be finite and >= 0");
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t scene_stream_seed(std::uint64_t seed, int scene) noexcept {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(scene));
}

SceneRng::SceneRng(std::uint64_t seed, int scene) : engine_(scene_stream_seed(seed, scene)) {}

double SceneRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool SceneRng::bernoulli(double p) {
  // Always consume a draw so p does not shift later draws.
  const double u = uniform();
  return u < p;
}

double SceneRng::normal(double mean, double sd) {
  double z;
  if (has_spare_) {
    has_spare_ = false;
    z = spare_;
  } else {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    z = r * std::cos(2.0 * std::numbers::pi * u2);
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
  }
  return mean + sd * z;
}

double SceneRng::truncated_normal(double mean, double sd) {
  for (int i = 0; i < 64; ++i) {
    const double x = normal(mean, sd);
    if (x >= 0.0) return x;
  }
  return 0.0;
}

std::size_t SceneRng::pick(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  // Rounding at the upper edge: last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0.0) return i;
  }
  return 0;
}

// ---------------------------------------------------------------------------

namespace {

// Relative share of the session clock given to each scene.
constexpr std::array<double, kSceneCount> kSceneWeights = {
    300, 150, 300, 180, 150, 240, 90, 240, 120, 150, 90,
    180, 60,  240, 120, 90,  120, 90, 180, 90,  120, 240};

constexpr std::array<const char*, 7> kLivingRoomDistractors = {
    "magazine", "book", "remote control", "notebook", "pencil", "chessboard", "bottle of wine"};

class Participant {
 public:
  Participant(const ParticipantProfile& profile, std::uint64_t seed, const ScoringConfig& config)
      : profile_(profile), seed_(seed), config_(config) {
    double total = 0.0;
    for (double w : kSceneWeights) total += w;
    ms_per_weight_ = config.session_duration_s * 1000.0 / total;
  }

  SessionLog run(const std::string& hash) {
    log_.header.seed = seed_;
    log_.header.config_hash = hash;
    for (int id = 1; id <= kSceneCount; ++id) play_scene(id);
    return std::move(log_);
  }

 private:
  // --- plumbing -------------------------------------------------------------

  std::vector<Effect> emit(EventPayload p, std::int64_t at) {
    clock_ = std::max(clock_, at);
    SessionEvent e{seq_++, clock_, scene_, std::move(p)};
    AdvanceResult r = advance(state_, e);
    state_ = std::move(r.state);
    log_ = append_event(std::move(log_), std::move(e));
    return std::move(r.effects);
  }

  std::vector<Effect> act(EventPayload p) { return emit(std::move(p), clock_ + latency()); }

  std::int64_t latency() {
    return static_cast<std::int64_t>(
        std::llround(rng_->truncated_normal(profile_.latency_mean_ms, profile_.latency_sd_ms)));
  }

  static bool finished(const std::vector<Effect>& fx) {
    return std::any_of(fx.begin(), fx.end(), [](const Effect& e) {
      return std::holds_alternative<effect::SceneTransition>(e) ||
             std::holds_alternative<effect::SessionComplete>(e);
    });
  }

  static std::optional<int> prompt_depth(const std::vector<Effect>& fx) {
    std::optional<int> d;
    for (const auto& e : fx) {
      if (const auto* p = std::get_if<effect::PromptShown>(&e)) d = p->depth;
    }
    return d;
  }

  void maybe_read_notes() {
    if (!rng_->bernoulli(profile_.notes_use_prob)) return;
    act(payload::NoteOpened{});
    const auto reading = static_cast<std::int64_t>(std::llround(rng_->truncated_normal(4000.0, 1500.0)));
    emit(payload::NoteClosed{}, clock_ + reading);
  }

  void exit_scene() {
    emit(payload::SceneExited{}, std::max(entered_ + budget_ms(), clock_ + latency()));
  }

  std::int64_t budget_ms() const {
    return static_cast<std::int64_t>(
        std::llround(kSceneWeights[static_cast<std::size_t>(scene_ - 1)] * ms_per_weight_));
  }

  double hit_prob(int scene_id) const {
    return profile_.pm_hit_prob[static_cast<std::size_t>(scene(scene_id).pm_tasks.front().delay)];
  }

  // --- scenes ---------------------------------------------------------------

  void play_scene(int id) {
    scene_ = id;
    SceneRng rng(seed_, id);
    rng_ = &rng;
    entered_ = clock_;
    emit(payload::SceneEntered{}, clock_);

    const SceneDescriptor& sd = scene(id);
    if (sd.gated_by_practice) {
      practice();
    } else if (sd.kind == SceneKind::Tutorial) {
      emit(payload::TutorialCompleted{},
           std::max(clock_ + latency(), entered_ + budget_ms() * 9 / 10));
    } else {
      switch (id) {
        case 3: bedroom(); break;
        case 6: kitchen(); break;
        case 8: living_room(); break;
        case 12: visual_ride(); break;
        case 14: supermarket(); break;
        case 19: auditory_ride(); break;
        case 22: back_home(); break;
        default: npc_dialogue(sd.pm_tasks.front()); break;
      }
    }
    exit_scene();
    rng_ = nullptr;
  }

  void practice() {
    constexpr int kPracticeDistractors = 3;
    for (int attempt = 1;; ++attempt) {
      payload::PracticeAttempt a;
      if (attempt >= kMaxPracticeAttempts) {
        a = {kPracticeTargets, 0};
      } else {
        // Each failed attempt halves the remaining miss and false-alarm rates.
        const double learn = std::pow(0.5, attempt - 1);
        const double hit = 1.0 - (1.0 - profile_.attention_hit_prob) * learn;
        const double fa = profile_.attention_false_alarm_prob * learn;
        for (int i = 0; i < kPracticeTargets; ++i) a.targets_hit += rng_->bernoulli(hit) ? 1 : 0;
        for (int i = 0; i < kPracticeDistractors; ++i) a.distractors_hit += rng_->bernoulli(fa) ? 1 : 0;
      }
      const auto trial = static_cast<std::int64_t>(std::llround(rng_->truncated_normal(30000.0, 5000.0)));
      if (finished(emit(a, clock_ + trial))) return;
    }
  }

  // Every item gets its draw; picks beyond the list capacity are dropped.
  std::vector<std::string> recognition_picks() {
    const RecognitionCatalog& cat = config_.recognition;
    std::vector<std::string> picks;
    auto consider = [&](const std::string& id, double p) {
      if (rng_->bernoulli(p) && picks.size() < kShoppingListCapacity) picks.push_back(id);
    };
    for (const auto& id : cat.targets) consider(id, profile_.recognition_target_prob);
    for (const auto* group : {&cat.qualitative_distractors, &cat.quantitative_distractors, &cat.false_items}) {
      for (const auto& id : *group) consider(id, profile_.recognition_distractor_prob);
    }
    return picks;
  }

  void bedroom() {
    for (int i = 0; i < 3; ++i) act(payload::NotesIntentAnswered{rng_->bernoulli(profile_.notes_use_prob)});

    for (const auto& id : recognition_picks()) act(payload::ItemSelected{id});

    // Extra units follow a geometric law with the profile's mean.
    int extra = 0;
    if (profile_.planning_extra_units > 0.0) {
      const double q = profile_.planning_extra_units / (1.0 + profile_.planning_extra_units);
      while (extra < kStreetUnits - kIdealRouteUnits && rng_->bernoulli(q)) ++extra;
    }
    const NormativeTiming& norms = config_.planning_norms;
    const auto elapsed = std::max<std::int64_t>(
        1000, std::llround(rng_->truncated_normal(norms.mean_s, norms.sd_s) * 1000.0));
    const std::int64_t start = clock_;
    const int units = kIdealRouteUnits + extra;
    for (int u = 1; u <= units; ++u) {
      emit(payload::RouteUnitToggled{u}, start + elapsed * u / (units + 1));
    }
    emit(payload::RouteSubmitted{elapsed}, start + elapsed);
    act(payload::FinalButtonPressed{});
  }

  /// Trigger-driven cascade: press the trigger until the scene ends, acting
  /// on prompts as the profile dictates.
  void trigger_cascade(bool remembered, const EventPayload& action, const EventPayload& trigger) {
    if (remembered) act(action);
    bool done = remembered;
    for (;;) {
      const auto fx = act(trigger);
      if (finished(fx)) return;
      const int depth = prompt_depth(fx).value_or(0);
      if (!done && depth >= 1 &&
          rng_->bernoulli(profile_.prompt_yield_probs[static_cast<std::size_t>(depth - 1)])) {
        act(action);
        done = true;
      }
    }
  }

  void kitchen() {
    maybe_read_notes();
    const std::int64_t on_heat_at = clock_ + latency();
    std::vector<std::pair<std::int64_t, CookingItem>> removals;
    for (CookingItem item : {CookingItem::Omelette, CookingItem::Sausages, CookingItem::Kettle}) {
      const double t = std::max(0.0, rng_->normal(cooking_on_time_midpoint_s(item),
                                                  profile_.cooking_timing_sd_s));
      removals.emplace_back(std::llround(t * 1000.0), item);
    }
    std::sort(removals.begin(), removals.end());
    for (const auto& [ms, item] : removals) {
      emit(payload::CookingItemPlaced{item, ms}, on_heat_at + ms);
    }
    trigger_cascade(rng_->bernoulli(hit_prob(6)), payload::MedicationTaken{}, payload::FinalButtonPressed{});
  }

  void living_room() {
    maybe_read_notes();
    for (const auto& item : collection_targets()) {
      if (rng_->bernoulli(profile_.attention_hit_prob)) act(payload::ItemStowed{item, true});
    }
    for (const char* item : kLivingRoomDistractors) {
      if (rng_->bernoulli(profile_.attention_false_alarm_prob)) act(payload::ItemStowed{item, false});
    }
    trigger_cascade(rng_->bernoulli(hit_prob(8)), payload::PieRemoved{}, payload::ExitAttempted{});
  }

  void npc_dialogue(const PmTaskSpec& task) {
    maybe_read_notes();
    const bool negative = task.polarity == PmPolarity::NegativeFalsePrompt;
    for (int depth = 1;; ++depth) {
      double p_yes;
      if (negative) {
        p_yes = profile_.false_prompt_yes_prob;
      } else if (depth == 1) {
        p_yes = hit_prob(scene_);
      } else {
        p_yes = profile_.prompt_yield_probs[static_cast<std::size_t>(depth - 1)];
      }
      const bool yes = rng_->bernoulli(p_yes);
      const auto fx = act(payload::NpcPromptAnswered{yes});
      if (finished(fx)) return;
      if (yes) break;
    }
    const std::vector<double> weights(profile_.item_choice_weights.begin(),
                                      profile_.item_choice_weights.end());
    const auto choice = static_cast<ItemCategory>(rng_->pick(weights));
    act(payload::NpcItemChosen{choice});
    if (scene_ == 21 && choice == ItemCategory::Correct) act(payload::KeysGiven{});
  }

  template <class Emit>
  void ride(const StimulusCounts& counts, Emit&& emit_response) {
    std::vector<int> order(static_cast<std::size_t>(counts.total()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng_->uniform() * static_cast<double>(i));
      std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }
    const std::int64_t span = budget_ms() * 8 / 10;
    const std::int64_t start = clock_;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int id = order[k];
      const bool target = id < counts.targets;
      const double p = target ? profile_.attention_hit_prob : profile_.attention_false_alarm_prob;
      const std::int64_t at = start + span * static_cast<std::int64_t>(k + 1) /
                                          static_cast<std::int64_t>(order.size() + 1);
      if (rng_->bernoulli(p)) emit_response(id, at);
    }
    emit(payload::FinalButtonPressed{}, std::max(clock_, start + span));
  }

  void visual_ride() {
    ride(config_.visual, [&](int id, std::int64_t at) {
      const VisualStimulus s = visual_stimulus(id, config_.visual);
      emit(payload::PosterSpotted{id, s.kind, s.side}, at);
    });
  }

  void auditory_ride() {
    ride(config_.auditory, [&](int id, std::int64_t at) {
      const AuditoryStimulus s = auditory_stimulus(id, config_.auditory);
      const Side other = s.side == Side::Left ? Side::Right : Side::Left;
      Side controller;
      if (s.kind == AuditoryKind::Target) {
        controller = rng_->bernoulli(profile_.wrong_controller_prob) ? other : s.side;
      } else {
        controller = rng_->bernoulli(0.5) ? Side::Left : Side::Right;
      }
      emit(payload::SoundTriggered{id, s.kind, s.side, controller}, at);
    });
  }

  void supermarket() {
    for (const auto& id : recognition_picks()) act(payload::ShoppingCollected{id});
    act(payload::FinalButtonPressed{});
  }

  void back_home() {
    const auto& offsets = *scene(22).pm_tasks.front().cascade.timer_offsets_ms;
    const bool remembered = rng_->bernoulli(hit_prob(22));
    // Put-away runs during the first minute; a remembering participant
    // takes the medication somewhere inside it.
    const std::int64_t remember_at = entered_ + 5000 + static_cast<std::int64_t>(rng_->uniform() * 55000.0);
    bool taken = false;
    maybe_read_notes();
    std::vector<std::string> bought;
    for (const auto& e : log_.events) {
      if (const auto* s = e.as<payload::ShoppingCollected>()) bought.push_back(s->item);
    }
    const std::int64_t stow_span = 60000;
    for (std::size_t i = 0; i < bought.size(); ++i) {
      const std::int64_t at = entered_ + stow_span * static_cast<std::int64_t>(i + 1) /
                                             static_cast<std::int64_t>(bought.size() + 1);
      if (remembered && !taken && at >= remember_at) {
        emit(payload::MedicationTaken{}, std::max(clock_, remember_at));
        taken = true;
      }
      emit(payload::ItemStowed{bought[i], true}, std::max(clock_, at));
    }
    if (remembered && !taken) {
      emit(payload::MedicationTaken{}, std::max(clock_, std::min(remember_at, entered_ + offsets[0] - 1)));
      taken = true;
    }
    for (std::size_t d = 0; d < offsets.size() && !taken; ++d) {
      const std::int64_t shown = entered_ + offsets[d];
      if (clock_ >= shown) continue;
      if (!rng_->bernoulli(profile_.prompt_yield_probs[d])) continue;
      std::int64_t delay = latency();
      if (d + 1 < offsets.size()) delay = std::min(delay, offsets[d + 1] - offsets[d] - 1);
      emit(payload::MedicationTaken{}, shown + delay);
      taken = true;
    }
    emit(payload::FinalButtonPressed{},
         std::max(clock_ + latency(), entered_ + offsets.back() + 5000));
  }

  const ParticipantProfile& profile_;
  std::uint64_t seed_;
  const ScoringConfig& config_;
  double ms_per_weight_ = 0.0;

  SessionState state_;
  SessionLog log_;
  SceneRng* rng_ = nullptr;
  int scene_ = 1;
  std::int64_t seq_ = 0;
  std::int64_t clock_ = 0;
  std::int64_t entered_ = 0;
};

}  // namespace

SessionLog simulate_session(const ParticipantProfile& profile, std::uint64_t seed,
                            const ScoringConfig& config) {
  profile.validate();
  config.validate();
  return Participant(profile, seed, config).run(config_hash(config));
}

std::vector<SimulatedSession> simulate_cohort(const std::vector<ParticipantProfile>& profiles,
                                              const std::vector<std::uint64_t>& seeds,
                                              const ScoringConfig& config, unsigned max_threads) {
  if (profiles.size() != seeds.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(profiles.size()) + " profiles but " +
                                          std::to_string(seeds.size()) + " seeds");
  }
  config.validate();
  for (const auto& p : profiles) p.validate();

  std::vector<SimulatedSession> out(profiles.size());
  if (max_threads == 0) max_threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(max_threads, profiles.size());

  auto run_range = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < profiles.size(); i += stride) {
      SessionLog log = simulate_session(profiles[i], seeds[i], config);
      TaskScorecard card = aggregate_scorecard(log, config);
      out[i] = SimulatedSession{std::move(log), std::move(card)};
    }
  };
  if (workers <= 1) {
    run_range(0, 1);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, run_range, w, workers));
  for (auto& j : jobs) j.get();
  return out;
}

}  // namespace vreal
