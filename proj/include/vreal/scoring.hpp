#pragma once

// Scoring rules for every task of the battery, and their composition over a
// whole session log.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vreal/scenario.hpp"
#include "vreal/session_log.hpp"

namespace vreal {

// ---------------------------------------------------------------------------
// Recognition (scenes 3 and 14)

struct RecognitionCatalog {
  std::vector<std::string> targets;                   // 10
  std::vector<std::string> qualitative_distractors;   // 5
  std::vector<std::string> quantitative_distractors;  // 5
  std::vector<std::string> false_items;               // 10

  /// The shopping-list array used by default.
  static RecognitionCatalog standard();

  /// Throws ConfigError unless the sets are disjoint with sizes 10/5/5/10.
  void validate() const;

  bool operator==(const RecognitionCatalog&) const = default;
};

inline constexpr int kRecognitionMax = 20;
/// The shopping list (and the basket) holds at most this many items.
inline constexpr std::size_t kShoppingListCapacity = 10;

/// 2 per target, 1 per qualitative or quantitative distractor, 0 per false
/// item. Throws UnknownItem for ids outside the catalog and InvalidArgument
/// for more than kShoppingListCapacity items.
int score_recognition(const std::set<std::string>& selected, const RecognitionCatalog& catalog);

// ---------------------------------------------------------------------------
// Planning (scene 3)

inline constexpr int kStreetUnits = 23;
inline constexpr int kIdealRouteUnits = 15;

struct RouteSelection {
  std::set<int> selected_units;
  double completion_time_s = 0.0;
};

struct NormativeTiming {
  double mean_s = 120.0;
  double sd_s = 30.0;
  bool operator==(const NormativeTiming&) const = default;
};

/// |z| cut points for the completion-time modifier: +-1 beyond inner_z,
/// +-2 beyond outer_z.
struct TimeModifierSteps {
  double inner_z = 1.0;
  double outer_z = 2.0;
  bool operator==(const TimeModifierSteps&) const = default;
};

struct PlanningScore {
  int route_score = 0;
  int time_modifier = 0;
  int total = 0;
  double z = 0.0;
  bool operator==(const PlanningScore&) const = default;
};

/// max(0, 15 - |units - 15|)
int planning_route_score(int selected_units);
int planning_time_modifier(double z, const TimeModifierSteps& steps = {});
PlanningScore score_planning(const RouteSelection& route, const NormativeTiming& norms,
                             const TimeModifierSteps& steps = {});

// ---------------------------------------------------------------------------
// Cooking (scene 6)

enum class CookingBand { VeryEarly, Early, SlightlyEarly, OnTime, SlightlyLate, Late, VeryLate };
inline constexpr int kCookingBandCount = 7;
std::string_view to_string(CookingBand b) noexcept;

/// Closed interval in centiseconds; the last band has no upper bound.
struct BandInterval {
  std::int64_t lo_cs = 0;
  std::optional<std::int64_t> hi_cs;
};

const std::array<BandInterval, kCookingBandCount>& cooking_band_table(CookingItem item);

/// Round half-up to whole centiseconds.
std::int64_t to_centiseconds(double t_s);
std::int64_t ms_to_centiseconds(std::int64_t ms);

CookingBand classify_cooking_centis(CookingItem item, std::int64_t t_cs);
CookingBand classify_cooking_time(CookingItem item, double t_s);

/// Midpoint of the OnTime window, in seconds.
double cooking_on_time_midpoint_s(CookingItem item);

using BandPoints = std::array<int, kCookingBandCount>;  // indexed by CookingBand
inline constexpr BandPoints kDefaultBandPoints = {0, 1, 2, 3, 2, 1, 0};

struct CookingTimeline {
  double omelette_removed_s = 0.0;
  double sausages_removed_s = 0.0;
  double kettle_removed_s = 0.0;
};

struct CookingScore {
  std::array<CookingBand, 3> bands{};  // Omelette, Sausages, Kettle
  std::array<int, 3> points{};
  std::array<std::int64_t, 3> time_cs{};
  int total = 0;
  bool operator==(const CookingScore&) const = default;
};

CookingScore score_cooking(const CookingTimeline& timeline, const BandPoints& band_points = kDefaultBandPoints);

// ---------------------------------------------------------------------------
// Prospective memory

/// depth 0 = done before any prompt, 1..3 = after that prompt, 4 = never.
/// Maps to 6, 4, 2, 1, 0.
int score_prompt_cascade(int prompt_depth_when_done);

struct NpcPmOutcome {
  int yes_at_prompt = 0;  // 0 = never affirmed
  std::optional<ItemCategory> item_choice;
};

/// Points by [yes_at_prompt - 1][ItemCategory].
using PositiveMatrix = std::array<std::array<int, 4>, 3>;
PositiveMatrix default_positive_matrix();

int score_npc_pm_positive(const NpcPmOutcome& outcome, const PositiveMatrix& matrix);

/// Deductions by yes_at_prompt (0 = resisted all three prompts).
using NegativeDeductions = std::array<int, 4>;
inline constexpr NegativeDeductions kDefaultNegativeDeductions = {0, -3, -2, -1};
inline constexpr int kMaxDeductionPerScene = 3;

int score_npc_pm_negative(int yes_at_prompt,
                          const NegativeDeductions& deductions = kDefaultNegativeDeductions);

// ---------------------------------------------------------------------------
// Collection (scene 8)

const std::vector<std::string>& collection_targets();

struct Grab {
  enum class Kind { TargetItem, DistractorGrabAttempt };
  Kind kind = Kind::TargetItem;
  std::string id;
};

struct CollectionScore {
  int points = 0;
  int errors = 0;
  bool operator==(const CollectionScore&) const = default;
};

CollectionScore score_collection(const std::vector<Grab>& grabs);

// ---------------------------------------------------------------------------
// Attention (scenes 12 and 19)

/// Stimulus universe for one attention task. ids [0, targets) are targets,
/// then the first distractor type, then the second; within each block even
/// local indices are on the left.
struct StimulusCounts {
  int targets = 16;
  int distractor_a = 8;  // shape distractors (visual) / high pitch (auditory)
  int distractor_b = 8;  // colour distractors (visual) / low pitch (auditory)
  int total() const { return targets + distractor_a + distractor_b; }
  void validate(std::string_view what) const;
  bool operator==(const StimulusCounts&) const = default;
};

struct VisualStimulus {
  VisualKind kind;
  Side side;
};
VisualStimulus visual_stimulus(int id, const StimulusCounts& counts);

struct AuditoryStimulus {
  AuditoryKind kind;
  Side side;
};
AuditoryStimulus auditory_stimulus(int id, const StimulusCounts& counts);

using VisualSpot = payload::PosterSpotted;
using AuditoryResponse = payload::SoundTriggered;

struct VisualScore {
  int points = 0;
  /// spotted[side][kind]
  std::array<std::array<int, 3>, 2> spotted{};
  bool operator==(const VisualScore&) const = default;
};

/// +1 per target, -1 per distractor. Throws DuplicateSpot, and MalformedLog
/// if a spot contradicts the stimulus layout.
VisualScore score_visual_attention(const std::vector<VisualSpot>& spots,
                                   const StimulusCounts& counts = {});

struct AuditoryScore {
  int points = 0;
  std::array<int, 3> detected_by_kind{};   // AuditoryKind
  std::array<int, 2> detected_by_side{};   // stimulus side
  int wrong_controller = 0;
  bool operator==(const AuditoryScore&) const = default;
};

/// Target on the matching controller +2, on the other controller +1; any
/// response to a distractor -1.
AuditoryScore score_auditory_attention(const std::vector<AuditoryResponse>& responses);

// ---------------------------------------------------------------------------
// Configuration and session scorecard

struct ScoringConfig {
  BandPoints cooking_band_points = kDefaultBandPoints;
  PositiveMatrix pm_positive = default_positive_matrix();
  NegativeDeductions pm_negative = kDefaultNegativeDeductions;
  NormativeTiming planning_norms;
  TimeModifierSteps planning_steps;
  StimulusCounts visual;
  StimulusCounts auditory;
  RecognitionCatalog recognition = RecognitionCatalog::standard();
  /// Simulated session length the participant simulator paces itself to.
  double session_duration_s = 3732.0;

  void validate() const;
  bool operator==(const ScoringConfig&) const = default;
};

struct PmTaskScore {
  std::string task;
  int scene = 0;
  PmPolarity polarity = PmPolarity::Positive;
  CascadeTrigger trigger = CascadeTrigger::FinalButton;
  std::optional<int> resolved_depth;
  std::optional<ItemCategory> choice;
  int points = 0;
  bool operator==(const PmTaskScore&) const = default;
};

struct TaskScorecard {
  std::array<bool, 3> pm_notes_intent{};
  int immediate_recognition = 0;
  int planning_units = 0;
  double planning_time_s = 0.0;
  PlanningScore planning;
  CookingScore cooking;
  std::vector<PmTaskScore> pm;  // scene order
  CollectionScore collection;
  VisualScore visual_attention;
  int delayed_recognition = 0;
  AuditoryScore auditory_attention;
  Telemetry telemetry;

  int pm_points(std::string_view task) const;
  int pm_total() const;
  bool operator==(const TaskScorecard&) const = default;
};

/// Replays the log through the scenario engine, then scores every task.
/// Throws IncompleteSession or MalformedLog.
TaskScorecard aggregate_scorecard(const SessionLog& log, const ScoringConfig& config);

}  // namespace vreal
