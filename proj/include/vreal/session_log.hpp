#pragma once

// Append-only session event model, telemetry derivation and the NDJSON log
// format.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vreal {

enum class Side { Left, Right };
enum class CookingItem { Omelette, Sausages, Kettle };
enum class ItemCategory { Correct, SemanticRelative, OtherPmTask, Unrelated };
enum class VisualKind { Target, ShapeDistractor, ColorDistractor };
enum class AuditoryKind { Target, HighPitch, LowPitch };

std::string_view to_string(Side v) noexcept;
std::string_view to_string(CookingItem v) noexcept;
std::string_view to_string(ItemCategory v) noexcept;
std::string_view to_string(VisualKind v) noexcept;
std::string_view to_string(AuditoryKind v) noexcept;

namespace payload {

struct SceneEntered {
  bool operator==(const SceneEntered&) const = default;
};
struct SceneExited {
  bool operator==(const SceneExited&) const = default;
};
struct TutorialCompleted {
  bool operator==(const TutorialCompleted&) const = default;
};
struct PracticeAttempt {
  int targets_hit = 0;
  int distractors_hit = 0;
  bool operator==(const PracticeAttempt&) const = default;
};
/// Immediate-recognition board pick (scene 3).
struct ItemSelected {
  std::string item;
  bool operator==(const ItemSelected&) const = default;
};
struct RouteUnitToggled {
  int unit = 0;
  bool operator==(const RouteUnitToggled&) const = default;
};
/// elapsed_ms is the planning board's own stopwatch.
struct RouteSubmitted {
  std::int64_t elapsed_ms = 0;
  bool operator==(const RouteSubmitted&) const = default;
};
/// on_heat_ms: time the item spent on the heat before reaching the worktop.
struct CookingItemPlaced {
  CookingItem item = CookingItem::Omelette;
  std::int64_t on_heat_ms = 0;
  bool operator==(const CookingItemPlaced&) const = default;
};
struct FinalButtonPressed {
  bool operator==(const FinalButtonPressed&) const = default;
};
struct ExitAttempted {
  bool operator==(const ExitAttempted&) const = default;
};
struct MedicationTaken {
  bool operator==(const MedicationTaken&) const = default;
};
struct PieRemoved {
  bool operator==(const PieRemoved&) const = default;
};
struct NoteOpened {
  bool operator==(const NoteOpened&) const = default;
};
struct NoteClosed {
  bool operator==(const NoteClosed&) const = default;
};
struct NpcPromptAnswered {
  bool yes = false;
  bool operator==(const NpcPromptAnswered&) const = default;
};
struct NpcItemChosen {
  ItemCategory choice = ItemCategory::Correct;
  bool operator==(const NpcItemChosen&) const = default;
};
struct PosterSpotted {
  int stimulus = 0;
  VisualKind kind = VisualKind::Target;
  Side side = Side::Left;
  bool operator==(const PosterSpotted&) const = default;
};
struct SoundTriggered {
  int stimulus = 0;
  AuditoryKind kind = AuditoryKind::Target;
  Side side = Side::Left;
  Side controller = Side::Left;
  bool operator==(const SoundTriggered&) const = default;
};
/// Supermarket pick (scene 14, delayed recognition).
struct ShoppingCollected {
  std::string item;
  bool operator==(const ShoppingCollected&) const = default;
};
struct KeysGiven {
  bool operator==(const KeysGiven&) const = default;
};
/// Snap-drop-zone attach attempt. accepted == false means the item fell.
struct ItemStowed {
  std::string item;
  bool accepted = false;
  bool operator==(const ItemStowed&) const = default;
};
struct NotesIntentAnswered {
  bool yes = false;
  bool operator==(const NotesIntentAnswered&) const = default;
};

}  // namespace payload

// Alternative order matches EventKind.
using EventPayload =
    std::variant<payload::SceneEntered, payload::SceneExited, payload::TutorialCompleted,
                 payload::PracticeAttempt, payload::ItemSelected, payload::RouteUnitToggled,
                 payload::RouteSubmitted, payload::CookingItemPlaced, payload::FinalButtonPressed,
                 payload::ExitAttempted, payload::MedicationTaken, payload::PieRemoved,
                 payload::NoteOpened, payload::NoteClosed, payload::NpcPromptAnswered,
                 payload::NpcItemChosen, payload::PosterSpotted, payload::SoundTriggered,
                 payload::ShoppingCollected, payload::KeysGiven, payload::ItemStowed,
                 payload::NotesIntentAnswered>;

enum class EventKind {
  SceneEntered,
  SceneExited,
  TutorialCompleted,
  PracticeAttempt,
  ItemSelected,
  RouteUnitToggled,
  RouteSubmitted,
  CookingItemPlaced,
  FinalButtonPressed,
  ExitAttempted,
  MedicationTaken,
  PieRemoved,
  NoteOpened,
  NoteClosed,
  NpcPromptAnswered,
  NpcItemChosen,
  PosterSpotted,
  SoundTriggered,
  ShoppingCollected,
  KeysGiven,
  ItemStowed,
  NotesIntentAnswered,
};

inline constexpr int kEventKindCount = 22;

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> event_kind_from_string(std::string_view name) noexcept;

struct SessionEvent {
  std::int64_t seq = 0;
  std::int64_t sim_time_ms = 0;
  int scene = 1;
  EventPayload payload;

  EventKind kind() const noexcept { return static_cast<EventKind>(payload.index()); }

  template <class P>
  const P* as() const noexcept {
    return std::get_if<P>(&payload);
  }

  bool operator==(const SessionEvent&) const = default;
};

inline constexpr int kLogSchemaVersion = 1;

struct LogHeader {
  int version = kLogSchemaVersion;
  std::uint64_t seed = 0;
  std::string config_hash;
  bool operator==(const LogHeader&) const = default;
};

/// Immutable history: append_event returns a new log and never edits an
/// existing record.
struct SessionLog {
  LogHeader header;
  std::vector<SessionEvent> events;
  bool operator==(const SessionLog&) const = default;
};

SessionLog append_event(SessionLog log, SessionEvent event);

std::string serialize_log(const SessionLog& log);
SessionLog deserialize_log(std::string_view bytes);

struct NotesViews {
  int opens = 0;
  double total_open_s = 0.0;
  bool operator==(const NotesViews&) const = default;
};

struct Telemetry {
  std::map<int, double> tutorial_time_s;
  std::map<int, int> practice_attempts;
  std::map<int, NotesViews> notes_views;
  std::map<int, double> scene_time_s;
  std::map<std::string, double> task_time_s;
  std::vector<bool> notes_intent;
  /// Non-fatal irregularities such as a note still open at scene exit.
  std::vector<std::string> warnings;
  bool operator==(const Telemetry&) const = default;
};

Telemetry derive_telemetry(const SessionLog& log);

}  // namespace vreal
