#pragma once

// The 22-scene scenario as a deterministic state machine over SessionEvents.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "vreal/session_log.hpp"

namespace vreal {

inline constexpr int kSceneCount = 22;

enum class SceneKind { Tutorial, Storyline };
enum class PmBasis { EventBased, TimeBased };
enum class PmDelay { Short, Medium, Long };
enum class PmPolarity { Positive, NegativeFalsePrompt };
enum class CascadeTrigger { FinalButton, ExitAttempt, NpcDialogue, Timer };

std::string_view to_string(SceneKind v) noexcept;
std::string_view to_string(PmBasis v) noexcept;
std::string_view to_string(PmDelay v) noexcept;
std::string_view to_string(PmPolarity v) noexcept;
std::string_view to_string(CascadeTrigger v) noexcept;

struct CascadeSpec {
  CascadeTrigger trigger = CascadeTrigger::FinalButton;
  /// Present only for Timer triggers: offsets from scene entry.
  std::optional<std::array<std::int64_t, 3>> timer_offsets_ms;
  std::vector<std::string> prompt_texts;
};

struct PmTaskSpec {
  std::string id;
  PmBasis basis = PmBasis::EventBased;
  PmDelay delay = PmDelay::Short;
  CascadeSpec cascade;
  PmPolarity polarity = PmPolarity::Positive;
};

struct SceneDescriptor {
  int id = 0;
  SceneKind kind = SceneKind::Tutorial;
  std::string title;
  std::vector<PmTaskSpec> pm_tasks;
  bool gated_by_practice = false;
};

/// Table of all scenes, in running order.
const std::vector<SceneDescriptor>& scene_sequence();
const SceneDescriptor& scene(int id);

/// Every PM task in scene order.
std::vector<PmTaskSpec> pm_tasks();

// ---------------------------------------------------------------------------
// Practice gate (scenes 11 and 18)

enum class GateResult { Pass, Retry };

struct PracticeAttemptRecord {
  int targets_hit = 0;
  int distractors_hit = 0;
};

inline constexpr int kPracticeTargets = 3;

/// Pass iff all three practice targets were hit and no distractor was.
GateResult practice_gate(int scene_id, PracticeAttemptRecord attempt);

// ---------------------------------------------------------------------------
// Effects

namespace effect {

struct PromptShown {
  std::string task;
  int depth = 0;
  std::string text;
  std::int64_t at_ms = 0;
  bool operator==(const PromptShown&) const = default;
};
struct SceneTransition {
  int from = 0;
  int to = 0;
  std::int64_t at_ms = 0;
  bool operator==(const SceneTransition&) const = default;
};
struct PracticeRetry {
  int scene = 0;
  int attempt = 0;
  std::int64_t at_ms = 0;
  bool operator==(const PracticeRetry&) const = default;
};
struct SessionComplete {
  std::int64_t at_ms = 0;
  bool operator==(const SessionComplete&) const = default;
};

}  // namespace effect

using Effect = std::variant<effect::PromptShown, effect::SceneTransition, effect::PracticeRetry,
                            effect::SessionComplete>;

std::string describe(const Effect& e);

// ---------------------------------------------------------------------------
// State

/// How a PM task ended. resolved_depth is the prompt depth at which the
/// participant acted (cascade tasks) or said "yes" (NPC tasks); nullopt
/// means the task closed without that happening.
struct PmOutcome {
  bool closed = false;
  std::optional<int> resolved_depth;
  std::optional<ItemCategory> choice;
  bool operator==(const PmOutcome&) const = default;
};

/// Per-scene scratch state; reset on every scene entry.
struct SceneProgress {
  std::set<CookingItem> cooking_placed;
  int notes_intents = 0;
  bool route_submitted = false;
  bool note_open = false;
  bool keys_given = false;
  bool awaiting_item_choice = false;
  bool operator==(const SceneProgress&) const = default;
};

struct SessionState {
  int current_scene = 1;
  std::int64_t sim_clock_ms = 0;
  std::optional<std::int64_t> last_seq;
  std::optional<std::int64_t> scene_entered_ms;
  /// Set once the engine emitted SceneTransition; only exit is accepted then.
  std::optional<int> transition_to;
  bool complete = false;
  std::map<std::string, int> prompt_depth_by_task;
  std::map<int, int> practice_attempts;
  std::map<std::string, PmOutcome> pm_outcomes;
  /// Timer prompts scheduled for the current scene, earliest first.
  std::vector<effect::PromptShown> pending_effects;
  SceneProgress progress;
  bool operator==(const SessionState&) const = default;
};

struct AdvanceResult {
  SessionState state;
  std::vector<Effect> effects;
};

/// Pure transition function. Throws Error{OutOfOrderEvent, WrongSceneEvent,
/// UnexpectedEvent}.
AdvanceResult advance(const SessionState& state, const SessionEvent& event);

struct ReplayResult {
  SessionState final_state;
  std::vector<Effect> effects;
  /// Scene ids in the order they were entered.
  std::vector<int> visited;
};

/// Runs a whole log through advance(). Errors propagate unchanged; a log
/// that never reaches SessionComplete is *not* an error here.
ReplayResult replay(const SessionLog& log);

}  // namespace vreal
