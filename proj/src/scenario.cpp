#include "vreal/scenario.hpp"

#include <algorithm>
#include <sstream>

#include "vreal/error.hpp"

namespace vreal {

std::string_view to_string(SceneKind v) noexcept {
  return v == SceneKind::Tutorial ? "Tutorial" : "Storyline";
}
std::string_view to_string(PmBasis v) noexcept {
  return v == PmBasis::EventBased ? "EventBased" : "TimeBased";
}
std::string_view to_string(PmDelay v) noexcept {
  switch (v) {
    case PmDelay::Short: return "Short";
    case PmDelay::Medium: return "Medium";
    case PmDelay::Long: return "Long";
  }
  return "?";
}
std::string_view to_string(PmPolarity v) noexcept {
  return v == PmPolarity::Positive ? "Positive" : "NegativeFalsePrompt";
}
std::string_view to_string(CascadeTrigger v) noexcept {
  switch (v) {
    case CascadeTrigger::FinalButton: return "FinalButton";
    case CascadeTrigger::ExitAttempt: return "ExitAttempt";
    case CascadeTrigger::NpcDialogue: return "NpcDialogue";
    case CascadeTrigger::Timer: return "Timer";
  }
  return "?";
}

namespace {

const std::vector<std::string> kNpcPrompts = {
    "Do we need to do something else at this time?",
    "Are you sure that we do not have to do something around this time?",
    "I think that we have to do something around this time.",
};

PmTaskSpec npc_task(std::string id, PmBasis basis, PmDelay delay,
                    PmPolarity polarity = PmPolarity::Positive) {
  return PmTaskSpec{std::move(id), basis, delay,
                    CascadeSpec{CascadeTrigger::NpcDialogue, std::nullopt, kNpcPrompts}, polarity};
}

std::vector<SceneDescriptor> build_scenes() {
  using K = SceneKind;
  std::vector<SceneDescriptor> s;
  s.push_back({1, K::Tutorial, "Basic interactions and navigation", {}, false});
  s.push_back({2, K::Tutorial, "Interactive boards (recognition and planning)", {}, false});
  s.push_back({3, K::Storyline,
               "List of prospective memory tasks, shopping list (immediate recognition), and "
               "itinerary (planning)",
               {}, false});
  s.push_back({4, K::Tutorial,
               "List of mechanics for the prospective memory tasks, prompts, and notes", {}, false});
  s.push_back({5, K::Tutorial, "Cooking", {}, false});
  s.push_back({6, K::Storyline,
               "Prepare breakfast (multi-tasking) and take medication (prospective memory, "
               "event-based, short delay)",
               {PmTaskSpec{"medication_breakfast", PmBasis::EventBased, PmDelay::Short,
                           CascadeSpec{CascadeTrigger::FinalButton, std::nullopt,
                                       {"You Have to Do Something Else",
                                        "You Have to Do Something After Having your Breakfast",
                                        "You Have to Take Your Meds"}},
                           PmPolarity::Positive}},
               false});
  s.push_back({7, K::Tutorial, "Tutorial: collect items", {}, false});
  s.push_back({8, K::Storyline,
               "Collect items from the living-room (selective visuospatial attention) and take a "
               "chocolate pie out of the oven (prospective memory, event-based, short delay)",
               {PmTaskSpec{"chocolate_pie", PmBasis::EventBased, PmDelay::Short,
                           CascadeSpec{CascadeTrigger::ExitAttempt, std::nullopt,
                                       {"You Have to Do Something Else",
                                        "You Have to Do Something Before Leaving the Apartment",
                                        "You Have to Take the Pie Out of the Oven"}},
                           PmPolarity::Positive}},
               false});
  s.push_back({9, K::Tutorial, "Interaction with 3D non-player characters", {}, false});
  s.push_back({10, K::Storyline, "Call Rose (prospective memory task, time-based, short delay)",
               {npc_task("call_rose", PmBasis::TimeBased, PmDelay::Short)}, false});
  s.push_back({11, K::Tutorial, "Gaze interaction", {}, true});
  s.push_back({12, K::Storyline,
               "Detect posters on both sides of the road (selective visual attention)", {}, false});
  s.push_back({13, K::Tutorial, "Shopping, how to collect the items from the supermarket", {},
               false});
  s.push_back({14, K::Storyline,
               "Collect the shopping list items from the supermarket (delayed recognition)", {},
               false});
  s.push_back({15, K::Storyline,
               "Go to the bakery to collect the carrot cake (prospective memory task, time-based, "
               "medium delay)",
               {npc_task("carrot_cake", PmBasis::TimeBased, PmDelay::Medium)}, false});
  s.push_back({16, K::Storyline,
               "False prompt before going to the library (prospective memory task, event-based, "
               "medium delay)",
               {npc_task("false_prompt_bakery", PmBasis::EventBased, PmDelay::Medium,
                         PmPolarity::NegativeFalsePrompt)},
               false});
  s.push_back({17, K::Storyline,
               "Return the red book to the library (prospective memory task, event-based, medium "
               "delay)",
               {npc_task("library_book", PmBasis::EventBased, PmDelay::Medium)}, false});
  s.push_back({18, K::Tutorial, "Auditory interaction", {}, true});
  s.push_back({19, K::Storyline,
               "Detect sounds from both sides of the road (selective auditory attention)", {},
               false});
  s.push_back({20, K::Storyline,
               "False prompt before going back home (prospective memory task, time-based, long "
               "delay)",
               {npc_task("false_prompt_petrol", PmBasis::TimeBased, PmDelay::Long,
                         PmPolarity::NegativeFalsePrompt)},
               false});
  s.push_back({21, K::Storyline,
               "When you return home, give the extra pair of keys to Alex (prospective memory "
               "task, event-based, long delay)",
               {npc_task("flat_keys", PmBasis::EventBased, PmDelay::Long)}, false});
  s.push_back({22, K::Storyline,
               "Put away the shopping items and take the medication (prospective memory task, "
               "time-based, long delay)",
               {PmTaskSpec{"medication_afternoon", PmBasis::TimeBased, PmDelay::Long,
                           CascadeSpec{CascadeTrigger::Timer,
                                       std::array<std::int64_t, 3>{70'000, 80'000, 90'000},
                                       {"You Have to Do Something Else",
                                        "You Have to Do Something at 1pm",
                                        "You Have to Take Your Meds"}},
                           PmPolarity::Positive}},
               false});
  return s;
}

}  // namespace

const std::vector<SceneDescriptor>& scene_sequence() {
  static const std::vector<SceneDescriptor> scenes = build_scenes();
  return scenes;
}

const SceneDescriptor& scene(int id) {
  if (id < 1 || id > kSceneCount) {
    throw Error(Errc::InvalidArgument, "scene id " + std::to_string(id) + " outside 1..22");
  }
  return scene_sequence()[static_cast<std::size_t>(id - 1)];
}

std::vector<PmTaskSpec> pm_tasks() {
  std::vector<PmTaskSpec> out;
  for (const auto& s : scene_sequence()) {
    out.insert(out.end(), s.pm_tasks.begin(), s.pm_tasks.end());
  }
  return out;
}

GateResult practice_gate(int scene_id, PracticeAttemptRecord attempt) {
  if (scene_id != 11 && scene_id != 18) {
    throw Error(Errc::NotAGatedScene, "scene " + std::to_string(scene_id) + " has no practice gate");
  }
  if (attempt.targets_hit < 0 || attempt.targets_hit > kPracticeTargets ||
      attempt.distractors_hit < 0) {
    throw Error(Errc::InvalidArgument, "practice attempt counts out of range");
  }
  return attempt.targets_hit == kPracticeTargets && attempt.distractors_hit == 0 ? GateResult::Pass
                                                                                 : GateResult::Retry;
}

std::string describe(const Effect& e) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, effect::PromptShown>) {
          os << "PromptShown{" << v.task << ", depth " << v.depth << ", \"" << v.text << "\", t="
             << v.at_ms << "}";
        } else if constexpr (std::is_same_v<T, effect::SceneTransition>) {
          os << "SceneTransition{" << v.from << " -> " << v.to << ", t=" << v.at_ms << "}";
        } else if constexpr (std::is_same_v<T, effect::PracticeRetry>) {
          os << "PracticeRetry{scene " << v.scene << ", attempt " << v.attempt << ", t=" << v.at_ms
             << "}";
        } else {
          os << "SessionComplete{t=" << v.at_ms << "}";
        }
      },
      e);
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

bool is_pm_scene(int id) { return !scene(id).pm_tasks.empty(); }

[[noreturn]] void unexpected(const SessionEvent& e, const std::string& why) {
  throw Error(Errc::UnexpectedEvent, std::string(to_string(e.kind())) + " in scene " +
                                         std::to_string(e.scene) + " (seq " +
                                         std::to_string(e.seq) + "): " + why);
}

/// Mutable working copy used while computing one transition.
class Step {
 public:
  Step(const SessionState& s, const SessionEvent& e) : st_(s), ev_(e) {}

  AdvanceResult run() {
    check_ordering();
    st_.sim_clock_ms = ev_.sim_time_ms;
    st_.last_seq = ev_.seq;

    if (!st_.scene_entered_ms) {
      if (ev_.kind() != EventKind::SceneEntered) unexpected(ev_, "scene not entered yet");
      enter();
      return finish();
    }

    fire_due_timers();

    if (st_.transition_to) {
      handle_finished_scene();
      return finish();
    }

    switch (ev_.kind()) {
      case EventKind::SceneEntered: unexpected(ev_, "scene already entered");
      case EventKind::SceneExited: unexpected(ev_, "scene has not finished");
      case EventKind::NoteOpened:
        if (!is_pm_scene(ev_.scene)) unexpected(ev_, "notes are available only in PM scenes");
        if (st_.progress.note_open) unexpected(ev_, "notes already open");
        st_.progress.note_open = true;
        return finish();
      case EventKind::NoteClosed:
        if (!st_.progress.note_open) unexpected(ev_, "notes are not open");
        st_.progress.note_open = false;
        return finish();
      default:
        break;
    }

    dispatch_scene();
    return finish();
  }

 private:
  void check_ordering() const {
    if (st_.last_seq && ev_.seq <= *st_.last_seq) {
      throw Error(Errc::OutOfOrderEvent, "seq " + std::to_string(ev_.seq) + " after " +
                                             std::to_string(*st_.last_seq));
    }
    if (ev_.sim_time_ms < st_.sim_clock_ms) {
      throw Error(Errc::OutOfOrderEvent, "time " + std::to_string(ev_.sim_time_ms) +
                                             " ms before clock " +
                                             std::to_string(st_.sim_clock_ms) + " ms");
    }
    if (st_.complete && !st_.transition_to && !st_.scene_entered_ms) {
      throw Error(Errc::UnexpectedEvent, "session already closed");
    }
    if (ev_.scene != st_.current_scene) {
      throw Error(Errc::WrongSceneEvent, "event for scene " + std::to_string(ev_.scene) +
                                             " while in scene " +
                                             std::to_string(st_.current_scene));
    }
  }

  AdvanceResult finish() { return AdvanceResult{std::move(st_), std::move(fx_)}; }

  const PmTaskSpec* task() const {
    const auto& tasks = scene(ev_.scene).pm_tasks;
    return tasks.empty() ? nullptr : &tasks.front();
  }

  PmOutcome& outcome() { return st_.pm_outcomes[task()->id]; }
  int& depth() { return st_.prompt_depth_by_task[task()->id]; }

  void prompt(int new_depth, std::int64_t at_ms) {
    const PmTaskSpec* t = task();
    depth() = new_depth;
    fx_.push_back(effect::PromptShown{t->id, new_depth,
                                      t->cascade.prompt_texts.at(static_cast<std::size_t>(new_depth - 1)),
                                      at_ms});
  }

  void transition() {
    const int from = ev_.scene;
    if (from == kSceneCount) {
      st_.complete = true;
      st_.transition_to = kSceneCount + 1;
      fx_.push_back(effect::SessionComplete{ev_.sim_time_ms});
      return;
    }
    st_.transition_to = from + 1;
    fx_.push_back(effect::SceneTransition{from, from + 1, ev_.sim_time_ms});
  }

  void enter() {
    st_.scene_entered_ms = ev_.sim_time_ms;
    st_.progress = SceneProgress{};
    st_.pending_effects.clear();
    const PmTaskSpec* t = task();
    if (!t) return;
    st_.prompt_depth_by_task[t->id] = 0;
    st_.pm_outcomes[t->id] = PmOutcome{};
    if (t->cascade.trigger == CascadeTrigger::NpcDialogue) {
      prompt(1, ev_.sim_time_ms);
    } else if (t->cascade.trigger == CascadeTrigger::Timer) {
      const auto& offsets = *t->cascade.timer_offsets_ms;
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        st_.pending_effects.push_back(effect::PromptShown{
            t->id, static_cast<int>(i) + 1, t->cascade.prompt_texts.at(i), ev_.sim_time_ms + offsets[i]});
      }
    }
  }

  // A timer prompt is shown at its scheduled instant, so an event stamped at
  // exactly that instant already sees it.
  void fire_due_timers() {
    auto& pending = st_.pending_effects;
    while (!pending.empty() && pending.front().at_ms <= ev_.sim_time_ms) {
      effect::PromptShown p = pending.front();
      pending.erase(pending.begin());
      if (outcome().closed) continue;
      depth() = p.depth;
      fx_.push_back(std::move(p));
    }
  }

  void handle_finished_scene() {
    switch (ev_.kind()) {
      case EventKind::SceneExited:
        // An open note is closed implicitly; telemetry reports it.
        st_.pending_effects.clear();
        st_.progress = SceneProgress{};
        st_.scene_entered_ms.reset();
        if (*st_.transition_to <= kSceneCount) st_.current_scene = *st_.transition_to;
        st_.transition_to.reset();
        return;
      case EventKind::NoteClosed:
        if (!st_.progress.note_open) unexpected(ev_, "notes are not open");
        st_.progress.note_open = false;
        return;
      case EventKind::KeysGiven:
        if (ev_.scene != 21) unexpected(ev_, "keys can only be handed over in scene 21");
        if (st_.progress.keys_given) unexpected(ev_, "keys already handed over");
        if (outcome().choice != ItemCategory::Correct) unexpected(ev_, "keys were not chosen");
        st_.progress.keys_given = true;
        return;
      default:
        unexpected(ev_, "scene already finished; expected SceneExited");
    }
  }

  void dispatch_scene() {
    const SceneDescriptor& sd = scene(ev_.scene);
    if (sd.gated_by_practice) return practice_scene();
    if (sd.kind == SceneKind::Tutorial) {
      if (ev_.kind() != EventKind::TutorialCompleted) unexpected(ev_, "tutorial expects completion");
      return transition();
    }
    switch (ev_.scene) {
      case 3: return bedroom();
      case 6: return kitchen();
      case 8: return living_room();
      case 12: return attention_ride<payload::PosterSpotted>();
      case 14: return supermarket();
      case 19: return attention_ride<payload::SoundTriggered>();
      case 22: return back_home();
      default: break;
    }
    const PmTaskSpec* t = task();
    if (t && t->cascade.trigger == CascadeTrigger::NpcDialogue) return npc_dialogue(*t);
    unexpected(ev_, "no handler");
  }

  void practice_scene() {
    const auto* a = ev_.as<payload::PracticeAttempt>();
    if (!a) unexpected(ev_, "gated tutorial expects PracticeAttempt");
    const int attempt = ++st_.practice_attempts[ev_.scene];
    if (practice_gate(ev_.scene, {a->targets_hit, a->distractors_hit}) == GateResult::Pass) {
      transition();
    } else {
      fx_.push_back(effect::PracticeRetry{ev_.scene, attempt, ev_.sim_time_ms});
    }
  }

  void bedroom() {
    auto& p = st_.progress;
    switch (ev_.kind()) {
      case EventKind::NotesIntentAnswered:
        if (p.notes_intents >= 3) unexpected(ev_, "only three notes prompts are asked");
        ++p.notes_intents;
        return;
      case EventKind::ItemSelected:
        return;
      case EventKind::RouteUnitToggled: {
        const int unit = ev_.as<payload::RouteUnitToggled>()->unit;
        if (unit < 1 || unit > 23) unexpected(ev_, "street unit outside 1..23");
        if (p.route_submitted) unexpected(ev_, "route already submitted");
        return;
      }
      case EventKind::RouteSubmitted:
        if (p.route_submitted) unexpected(ev_, "route already submitted");
        if (ev_.as<payload::RouteSubmitted>()->elapsed_ms <= 0) {
          unexpected(ev_, "planning time must be positive");
        }
        p.route_submitted = true;
        return;
      case EventKind::FinalButtonPressed:
        if (!p.route_submitted) unexpected(ev_, "route not submitted");
        return transition();
      default:
        unexpected(ev_, "not part of the bedroom tasks");
    }
  }

  // Shared cascade for the trigger-driven PM tasks (final button / exit).
  void cascade_action() {
    PmOutcome& o = outcome();
    if (o.closed) unexpected(ev_, "PM action already performed");
    o.closed = true;
    o.resolved_depth = depth();
  }

  void cascade_trigger() {
    PmOutcome& o = outcome();
    if (o.closed) return transition();
    if (depth() < 3) return prompt(depth() + 1, ev_.sim_time_ms);
    o.closed = true;
    transition();
  }

  void kitchen() {
    switch (ev_.kind()) {
      case EventKind::CookingItemPlaced: {
        const auto* c = ev_.as<payload::CookingItemPlaced>();
        if (c->on_heat_ms < 0) unexpected(ev_, "negative cooking time");
        if (!st_.progress.cooking_placed.insert(c->item).second) {
          unexpected(ev_, "item already on the worktop");
        }
        return;
      }
      case EventKind::MedicationTaken:
        return cascade_action();
      case EventKind::FinalButtonPressed:
        if (st_.progress.cooking_placed.size() != 3) unexpected(ev_, "breakfast not finished");
        return cascade_trigger();
      default:
        unexpected(ev_, "not part of the kitchen tasks");
    }
  }

  void living_room() {
    switch (ev_.kind()) {
      case EventKind::ItemStowed:
        return;
      case EventKind::PieRemoved:
        return cascade_action();
      case EventKind::ExitAttempted:
        return cascade_trigger();
      default:
        unexpected(ev_, "not part of the living-room tasks");
    }
  }

  template <class Response>
  void attention_ride() {
    if (ev_.as<Response>()) return;
    if (ev_.kind() == EventKind::FinalButtonPressed) return transition();
    unexpected(ev_, "not part of the attention task");
  }

  void supermarket() {
    if (ev_.kind() == EventKind::ShoppingCollected) return;
    if (ev_.kind() == EventKind::FinalButtonPressed) return transition();
    unexpected(ev_, "not part of the supermarket task");
  }

  void back_home() {
    switch (ev_.kind()) {
      case EventKind::ItemStowed:
        return;
      case EventKind::MedicationTaken:
        return cascade_action();
      case EventKind::FinalButtonPressed:
        outcome().closed = true;
        st_.pending_effects.clear();
        return transition();
      default:
        unexpected(ev_, "not part of the final scene");
    }
  }

  void npc_dialogue(const PmTaskSpec& t) {
    PmOutcome& o = outcome();
    auto& p = st_.progress;
    if (const auto* answer = ev_.as<payload::NpcPromptAnswered>()) {
      if (o.closed || p.awaiting_item_choice) unexpected(ev_, "no question pending");
      if (answer->yes) {
        o.resolved_depth = depth();
        if (t.polarity == PmPolarity::NegativeFalsePrompt) {
          o.closed = true;
          return transition();
        }
        p.awaiting_item_choice = true;
        return;
      }
      if (depth() < 3) return prompt(depth() + 1, ev_.sim_time_ms);
      o.closed = true;
      return transition();
    }
    if (const auto* chosen = ev_.as<payload::NpcItemChosen>()) {
      if (!p.awaiting_item_choice) unexpected(ev_, "item board not shown");
      p.awaiting_item_choice = false;
      o.choice = chosen->choice;
      o.closed = true;
      return transition();
    }
    unexpected(ev_, "not part of the NPC dialogue");
  }

  SessionState st_;
  const SessionEvent& ev_;
  std::vector<Effect> fx_;
};

}  // namespace

AdvanceResult advance(const SessionState& state, const SessionEvent& event) {
  return Step(state, event).run();
}

ReplayResult replay(const SessionLog& log) {
  ReplayResult r;
  for (const auto& e : log.events) {
    if (e.kind() == EventKind::SceneEntered) r.visited.push_back(e.scene);
    AdvanceResult step = advance(r.final_state, e);
    r.final_state = std::move(step.state);
    r.effects.insert(r.effects.end(), std::make_move_iterator(step.effects.begin()),
                     std::make_move_iterator(step.effects.end()));
  }
  return r;
}

}  // namespace vreal
