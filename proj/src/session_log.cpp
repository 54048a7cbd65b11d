#include "vreal/session_log.hpp"

#include <array>
#include <nlohmann/json.hpp>

#include "vreal/error.hpp"
#include "vreal/scenario.hpp"

namespace vreal {

namespace {

constexpr std::array<std::string_view, kEventKindCount> kKindNames = {
    "SceneEntered",      "SceneExited",       "TutorialCompleted", "PracticeAttempt",
    "ItemSelected",      "RouteUnitToggled",  "RouteSubmitted",    "CookingItemPlaced",
    "FinalButtonPressed", "ExitAttempted",    "MedicationTaken",   "PieRemoved",
    "NoteOpened",        "NoteClosed",        "NpcPromptAnswered", "NpcItemChosen",
    "PosterSpotted",     "SoundTriggered",    "ShoppingCollected", "KeysGiven",
    "ItemStowed",        "NotesIntentAnswered",
};

static_assert(std::variant_size_v<EventPayload> == kEventKindCount);

constexpr std::string_view kSchemaName = "vreal.session_log";

}  // namespace

std::string_view to_string(Side v) noexcept { return v == Side::Left ? "Left" : "Right"; }

std::string_view to_string(CookingItem v) noexcept {
  switch (v) {
    case CookingItem::Omelette: return "Omelette";
    case CookingItem::Sausages: return "Sausages";
    case CookingItem::Kettle: return "Kettle";
  }
  return "?";
}

std::string_view to_string(ItemCategory v) noexcept {
  switch (v) {
    case ItemCategory::Correct: return "Correct";
    case ItemCategory::SemanticRelative: return "SemanticRelative";
    case ItemCategory::OtherPmTask: return "OtherPmTask";
    case ItemCategory::Unrelated: return "Unrelated";
  }
  return "?";
}

std::string_view to_string(VisualKind v) noexcept {
  switch (v) {
    case VisualKind::Target: return "Target";
    case VisualKind::ShapeDistractor: return "ShapeDistractor";
    case VisualKind::ColorDistractor: return "ColorDistractor";
  }
  return "?";
}

std::string_view to_string(AuditoryKind v) noexcept {
  switch (v) {
    case AuditoryKind::Target: return "Target";
    case AuditoryKind::HighPitch: return "HighPitch";
    case AuditoryKind::LowPitch: return "LowPitch";
  }
  return "?";
}

std::string_view to_string(EventKind kind) noexcept {
  return kKindNames[static_cast<std::size_t>(kind)];
}

std::optional<EventKind> event_kind_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

SessionLog append_event(SessionLog log, SessionEvent event) {
  if (!log.events.empty()) {
    const SessionEvent& last = log.events.back();
    if (event.seq <= last.seq) {
      throw Error(Errc::MonotonicityViolation,
                  "seq " + std::to_string(event.seq) + " does not follow " + std::to_string(last.seq));
    }
    if (event.sim_time_ms < last.sim_time_ms) {
      throw Error(Errc::MonotonicityViolation, "sim_time_ms " + std::to_string(event.sim_time_ms) +
                                                   " precedes " + std::to_string(last.sim_time_ms));
    }
  }
  if (event.seq < 0 || event.sim_time_ms < 0) {
    throw Error(Errc::MonotonicityViolation, "seq and sim_time_ms must be non-negative");
  }
  log.events.push_back(std::move(event));
  return log;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

using ojson = nlohmann::ordered_json;

ojson payload_to_json(const EventPayload& p) {
  ojson j = ojson::object();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, payload::PracticeAttempt>) {
          j["targets_hit"] = v.targets_hit;
          j["distractors_hit"] = v.distractors_hit;
        } else if constexpr (std::is_same_v<T, payload::ItemSelected> ||
                             std::is_same_v<T, payload::ShoppingCollected>) {
          j["item"] = v.item;
        } else if constexpr (std::is_same_v<T, payload::RouteUnitToggled>) {
          j["unit"] = v.unit;
        } else if constexpr (std::is_same_v<T, payload::RouteSubmitted>) {
          j["elapsed_ms"] = v.elapsed_ms;
        } else if constexpr (std::is_same_v<T, payload::CookingItemPlaced>) {
          j["item"] = to_string(v.item);
          j["on_heat_ms"] = v.on_heat_ms;
        } else if constexpr (std::is_same_v<T, payload::NpcPromptAnswered> ||
                             std::is_same_v<T, payload::NotesIntentAnswered>) {
          j["yes"] = v.yes;
        } else if constexpr (std::is_same_v<T, payload::NpcItemChosen>) {
          j["choice"] = to_string(v.choice);
        } else if constexpr (std::is_same_v<T, payload::PosterSpotted>) {
          j["stimulus"] = v.stimulus;
          j["kind"] = to_string(v.kind);
          j["side"] = to_string(v.side);
        } else if constexpr (std::is_same_v<T, payload::SoundTriggered>) {
          j["stimulus"] = v.stimulus;
          j["kind"] = to_string(v.kind);
          j["side"] = to_string(v.side);
          j["controller"] = to_string(v.controller);
        } else if constexpr (std::is_same_v<T, payload::ItemStowed>) {
          j["item"] = v.item;
          j["accepted"] = v.accepted;
        }
      },
      p);
  return j;
}

class LineReader {
 public:
  LineReader(const ojson& obj, std::size_t line) : obj_(obj), line_(line) {}

  const ojson& field(const char* name) const {
    auto it = obj_.find(name);
    if (it == obj_.end()) fail(std::string("missing field \"") + name + "\"");
    return *it;
  }

  std::int64_t integer(const char* name) const {
    const ojson& v = field(name);
    if (!v.is_number_integer()) fail(std::string("field \"") + name + "\" must be an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const char* name) const {
    const ojson& v = field(name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail(std::string("field \"") + name + "\" must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const char* name) const {
    const ojson& v = field(name);
    if (!v.is_boolean()) fail(std::string("field \"") + name + "\" must be a boolean");
    return v.get<bool>();
  }

  std::string string(const char* name) const {
    const ojson& v = field(name);
    if (!v.is_string()) fail(std::string("field \"") + name + "\" must be a string");
    return v.get<std::string>();
  }

  template <class Enum, std::size_t N>
  Enum enumerated(const char* name, const std::array<Enum, N>& values) const {
    const std::string s = string(name);
    for (Enum e : values) {
      if (to_string(e) == s) return e;
    }
    fail(std::string("field \"") + name + "\" has unknown value \"" + s + "\"");
  }

  void exact_keys(std::size_t n) const {
    if (obj_.size() != n) fail("unexpected extra fields");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, 0, what); }

 private:
  const ojson& obj_;
  std::size_t line_;
};

constexpr std::array kSides{Side::Left, Side::Right};
constexpr std::array kCookingItems{CookingItem::Omelette, CookingItem::Sausages, CookingItem::Kettle};
constexpr std::array kCategories{ItemCategory::Correct, ItemCategory::SemanticRelative,
                                 ItemCategory::OtherPmTask, ItemCategory::Unrelated};
constexpr std::array kVisualKinds{VisualKind::Target, VisualKind::ShapeDistractor,
                                  VisualKind::ColorDistractor};
constexpr std::array kAuditoryKinds{AuditoryKind::Target, AuditoryKind::HighPitch,
                                    AuditoryKind::LowPitch};

int narrow_int(const LineReader& r, const char* name) {
  const std::int64_t v = r.integer(name);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    r.fail(std::string("field \"") + name + "\" out of range");
  }
  return static_cast<int>(v);
}

EventPayload payload_from_json(EventKind kind, const ojson& j, std::size_t line) {
  if (!j.is_object()) throw ParseError(line, 0, "payload must be an object");
  const LineReader r(j, line);
  switch (kind) {
    case EventKind::SceneEntered: r.exact_keys(0); return payload::SceneEntered{};
    case EventKind::SceneExited: r.exact_keys(0); return payload::SceneExited{};
    case EventKind::TutorialCompleted: r.exact_keys(0); return payload::TutorialCompleted{};
    case EventKind::PracticeAttempt:
      r.exact_keys(2);
      return payload::PracticeAttempt{narrow_int(r, "targets_hit"), narrow_int(r, "distractors_hit")};
    case EventKind::ItemSelected: r.exact_keys(1); return payload::ItemSelected{r.string("item")};
    case EventKind::RouteUnitToggled:
      r.exact_keys(1);
      return payload::RouteUnitToggled{narrow_int(r, "unit")};
    case EventKind::RouteSubmitted:
      r.exact_keys(1);
      return payload::RouteSubmitted{r.integer("elapsed_ms")};
    case EventKind::CookingItemPlaced:
      r.exact_keys(2);
      return payload::CookingItemPlaced{r.enumerated("item", kCookingItems), r.integer("on_heat_ms")};
    case EventKind::FinalButtonPressed: r.exact_keys(0); return payload::FinalButtonPressed{};
    case EventKind::ExitAttempted: r.exact_keys(0); return payload::ExitAttempted{};
    case EventKind::MedicationTaken: r.exact_keys(0); return payload::MedicationTaken{};
    case EventKind::PieRemoved: r.exact_keys(0); return payload::PieRemoved{};
    case EventKind::NoteOpened: r.exact_keys(0); return payload::NoteOpened{};
    case EventKind::NoteClosed: r.exact_keys(0); return payload::NoteClosed{};
    case EventKind::NpcPromptAnswered: r.exact_keys(1); return payload::NpcPromptAnswered{r.boolean("yes")};
    case EventKind::NpcItemChosen:
      r.exact_keys(1);
      return payload::NpcItemChosen{r.enumerated("choice", kCategories)};
    case EventKind::PosterSpotted:
      r.exact_keys(3);
      return payload::PosterSpotted{narrow_int(r, "stimulus"), r.enumerated("kind", kVisualKinds),
                                    r.enumerated("side", kSides)};
    case EventKind::SoundTriggered:
      r.exact_keys(4);
      return payload::SoundTriggered{narrow_int(r, "stimulus"), r.enumerated("kind", kAuditoryKinds),
                                     r.enumerated("side", kSides), r.enumerated("controller", kSides)};
    case EventKind::ShoppingCollected:
      r.exact_keys(1);
      return payload::ShoppingCollected{r.string("item")};
    case EventKind::KeysGiven: r.exact_keys(0); return payload::KeysGiven{};
    case EventKind::ItemStowed:
      r.exact_keys(2);
      return payload::ItemStowed{r.string("item"), r.boolean("accepted")};
    case EventKind::NotesIntentAnswered:
      r.exact_keys(1);
      return payload::NotesIntentAnswered{r.boolean("yes")};
  }
  throw ParseError(line, 0, "unhandled event kind");
}

ojson parse_line(std::string_view text, std::size_t line) {
  try {
    ojson j = ojson::parse(text.begin(), text.end());
    if (!j.is_object()) throw ParseError(line, 0, "record must be a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    throw ParseError(line, offset, "malformed JSON record");
  }
}

}  // namespace

std::string serialize_log(const SessionLog& log) {
  std::string out;
  ojson header = ojson::object();
  header["schema"] = kSchemaName;
  header["version"] = log.header.version;
  header["seed"] = log.header.seed;
  header["config_hash"] = log.header.config_hash;
  out += header.dump();
  out += '\n';
  for (const auto& e : log.events) {
    ojson j = ojson::object();
    j["seq"] = e.seq;
    j["sim_time_ms"] = e.sim_time_ms;
    j["scene"] = e.scene;
    j["kind"] = to_string(e.kind());
    j["payload"] = payload_to_json(e.payload);
    out += j.dump();
    out += '\n';
  }
  return out;
}

SessionLog deserialize_log(std::string_view bytes) {
  SessionLog log;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < bytes.size()) {
    ++line_no;
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) {
      throw ParseError(line_no, bytes.size() - pos, "truncated record (no line terminator)");
    }
    const std::string_view text = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    if (text.empty()) throw ParseError(line_no, 0, "empty line");

    const ojson j = parse_line(text, line_no);
    const LineReader r(j, line_no);
    if (!have_header) {
      if (r.string("schema") != kSchemaName) r.fail("not a session log");
      const std::int64_t version = r.integer("version");
      if (version != kLogSchemaVersion) {
        throw Error(Errc::SchemaVersionMismatch, "log version " + std::to_string(version) +
                                                     ", expected " +
                                                     std::to_string(kLogSchemaVersion));
      }
      log.header.version = static_cast<int>(version);
      log.header.seed = r.unsigned_integer("seed");
      log.header.config_hash = r.string("config_hash");
      r.exact_keys(4);
      have_header = true;
      continue;
    }

    r.exact_keys(5);
    const std::string kind_name = r.string("kind");
    const auto kind = event_kind_from_string(kind_name);
    if (!kind) r.fail("unknown event kind \"" + kind_name + "\"");
    SessionEvent e;
    e.seq = r.integer("seq");
    e.sim_time_ms = r.integer("sim_time_ms");
    e.scene = narrow_int(r, "scene");
    if (e.scene < 1 || e.scene > kSceneCount) r.fail("scene outside 1..22");
    e.payload = payload_from_json(*kind, r.field("payload"), line_no);
    log = append_event(std::move(log), std::move(e));
  }
  if (!have_header) throw ParseError(1, 0, "missing header record");
  return log;
}

// ---------------------------------------------------------------------------
// Telemetry

namespace {

std::optional<std::string> task_of(const SessionEvent& e) {
  switch (e.kind()) {
    case EventKind::NotesIntentAnswered: return "pm_notes";
    case EventKind::ItemSelected: return "immediate_recognition";
    case EventKind::CookingItemPlaced: return "cooking";
    case EventKind::ItemStowed: return e.scene == 8 ? "collection" : "put_away";
    case EventKind::PosterSpotted: return "visual_attention";
    case EventKind::ShoppingCollected: return "delayed_recognition";
    case EventKind::SoundTriggered: return "auditory_attention";
    case EventKind::MedicationTaken:
    case EventKind::PieRemoved:
    case EventKind::NpcPromptAnswered:
    case EventKind::NpcItemChosen:
    case EventKind::KeysGiven: {
      const auto& tasks = scene(e.scene).pm_tasks;
      if (!tasks.empty()) return tasks.front().id;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

double seconds(std::int64_t ms) { return static_cast<double>(ms) / 1000.0; }

}  // namespace

Telemetry derive_telemetry(const SessionLog& log) {
  Telemetry t;
  t.practice_attempts[11] = 0;
  t.practice_attempts[18] = 0;

  struct TaskWindow {
    std::int64_t start = 0;
    std::int64_t end = 0;
  };
  std::map<std::string, TaskWindow> windows;

  std::optional<std::int64_t> entered_at;
  std::optional<std::int64_t> note_opened_at;
  std::optional<std::string> open_task;
  int current = 0;
  std::int64_t prev_time = 0;

  auto malformed = [](const SessionEvent& e, const std::string& why) {
    return Error(Errc::MalformedLog, "seq " + std::to_string(e.seq) + ": " + why);
  };
  auto close_note = [&](int scene_id, std::int64_t at) {
    NotesViews& v = t.notes_views[scene_id];
    v.total_open_s += seconds(at - *note_opened_at);
    note_opened_at.reset();
  };

  for (const auto& e : log.events) {
    if (e.kind() == EventKind::SceneEntered) {
      if (entered_at) throw malformed(e, "scene entered twice without exit");
      entered_at = e.sim_time_ms;
      current = e.scene;
      if (!scene(e.scene).pm_tasks.empty()) t.notes_views.try_emplace(e.scene);
      open_task.reset();
      prev_time = e.sim_time_ms;
      continue;
    }
    if (!entered_at || e.scene != current) throw malformed(e, "event outside an entered scene");

    // Task windows run from the event preceding a task's first event to its
    // last event.
    if (auto task = task_of(e)) {
      auto [it, inserted] = windows.try_emplace(*task, TaskWindow{prev_time, e.sim_time_ms});
      if (!inserted) it->second.end = e.sim_time_ms;
    }

    switch (e.kind()) {
      case EventKind::SceneExited: {
        if (note_opened_at) {
          t.warnings.push_back("scene " + std::to_string(e.scene) +
                               ": notes still open at exit; closed at exit time");
          close_note(e.scene, e.sim_time_ms);
        }
        const double dur = seconds(e.sim_time_ms - *entered_at);
        t.scene_time_s[e.scene] = dur;
        if (scene(e.scene).kind == SceneKind::Tutorial) t.tutorial_time_s[e.scene] = dur;
        entered_at.reset();
        break;
      }
      case EventKind::PracticeAttempt:
        ++t.practice_attempts[e.scene];
        break;
      case EventKind::NoteOpened:
        if (note_opened_at) throw malformed(e, "notes opened twice");
        note_opened_at = e.sim_time_ms;
        ++t.notes_views[e.scene].opens;
        break;
      case EventKind::NoteClosed:
        if (!note_opened_at) throw malformed(e, "notes closed while not open");
        close_note(e.scene, e.sim_time_ms);
        break;
      case EventKind::NotesIntentAnswered:
        t.notes_intent.push_back(e.as<payload::NotesIntentAnswered>()->yes);
        break;
      case EventKind::RouteSubmitted:
        t.task_time_s["planning"] = seconds(e.as<payload::RouteSubmitted>()->elapsed_ms);
        break;
      default:
        break;
    }
    prev_time = e.sim_time_ms;
  }
  if (note_opened_at && !log.events.empty()) {
    t.warnings.push_back("log ends with notes open; closed at last event time");
    close_note(current, log.events.back().sim_time_ms);
  }

  for (const auto& [task, w] : windows) {
    t.task_time_s.try_emplace(task, seconds(w.end - w.start));
  }
  return t;
}

}  // namespace vreal
