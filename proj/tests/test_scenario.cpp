#include <doctest.h>

#include <algorithm>
#include <set>

#include "test_support.hpp"
#include "vreal/participant_sim.hpp"
#include "vreal/scenario.hpp"

using namespace vreal;
using vreal::testing::Driver;
using vreal::testing::effects_of;
using vreal::testing::error_code_of;

TEST_CASE("scene table follows the battery running order") {
  const auto& scenes = scene_sequence();
  REQUIRE(scenes.size() == 22);
  for (int i = 0; i < 22; ++i) CHECK(scenes[static_cast<std::size_t>(i)].id == i + 1);

  CHECK(scenes[0].kind == SceneKind::Tutorial);
  CHECK(scenes[0].title == "Basic interactions and navigation");
  CHECK(scenes[21].kind == SceneKind::Storyline);
  REQUIRE(scenes[21].pm_tasks.size() == 1);
  CHECK(scenes[21].pm_tasks[0].basis == PmBasis::TimeBased);
  CHECK(scenes[21].pm_tasks[0].delay == PmDelay::Long);

  const std::set<int> tutorials = {1, 2, 4, 5, 7, 9, 11, 13, 18};
  int storyline = 0;
  for (const auto& s : scenes) {
    CHECK(s.kind == (tutorials.count(s.id) ? SceneKind::Tutorial : SceneKind::Storyline));
    CHECK(s.gated_by_practice == (s.id == 11 || s.id == 18));
    storyline += s.kind == SceneKind::Storyline;
  }
  CHECK(storyline == 13);
}

TEST_CASE("PM annotations match the scenario table") {
  struct Expect {
    int scene;
    PmBasis basis;
    PmDelay delay;
    PmPolarity polarity;
  };
  const std::vector<Expect> expected = {
      {6, PmBasis::EventBased, PmDelay::Short, PmPolarity::Positive},
      {8, PmBasis::EventBased, PmDelay::Short, PmPolarity::Positive},
      {10, PmBasis::TimeBased, PmDelay::Short, PmPolarity::Positive},
      {15, PmBasis::TimeBased, PmDelay::Medium, PmPolarity::Positive},
      {16, PmBasis::EventBased, PmDelay::Medium, PmPolarity::NegativeFalsePrompt},
      {17, PmBasis::EventBased, PmDelay::Medium, PmPolarity::Positive},
      {20, PmBasis::TimeBased, PmDelay::Long, PmPolarity::NegativeFalsePrompt},
      {21, PmBasis::EventBased, PmDelay::Long, PmPolarity::Positive},
      {22, PmBasis::TimeBased, PmDelay::Long, PmPolarity::Positive},
  };
  const auto tasks = pm_tasks();
  REQUIRE(tasks.size() == expected.size());
  for (const auto& e : expected) {
    CAPTURE(e.scene);
    const auto& sd = scene(e.scene);
    REQUIRE(sd.pm_tasks.size() == 1);
    CHECK(sd.pm_tasks[0].basis == e.basis);
    CHECK(sd.pm_tasks[0].delay == e.delay);
    CHECK(sd.pm_tasks[0].polarity == e.polarity);
    CHECK(sd.pm_tasks[0].cascade.prompt_texts.size() == 3);
  }
  CHECK(scene(6).pm_tasks[0].cascade.trigger == CascadeTrigger::FinalButton);
  CHECK(scene(8).pm_tasks[0].cascade.trigger == CascadeTrigger::ExitAttempt);
  CHECK(scene(22).pm_tasks[0].cascade.trigger == CascadeTrigger::Timer);
  const auto offsets = scene(22).pm_tasks[0].cascade.timer_offsets_ms;
  REQUIRE(offsets.has_value());
  CHECK(*offsets == std::array<std::int64_t, 3>{70'000, 80'000, 90'000});
  CHECK(scene(6).pm_tasks[0].cascade.prompt_texts[0] == "You Have to Do Something Else");
  CHECK(error_code_of([] { scene(23); }) == Errc::InvalidArgument);
}

TEST_CASE("practice gate needs all three targets and no distractor") {
  CHECK(practice_gate(11, {3, 0}) == GateResult::Pass);
  CHECK(practice_gate(11, {2, 0}) == GateResult::Retry);
  CHECK(practice_gate(18, {3, 1}) == GateResult::Retry);
  for (int targets = 0; targets <= kPracticeTargets; ++targets) {
    for (int distractors = 0; distractors <= 5; ++distractors) {
      const bool pass = targets == 3 && distractors == 0;
      CHECK((practice_gate(18, {targets, distractors}) == GateResult::Pass) == pass);
    }
  }
  CHECK(error_code_of([] { practice_gate(12, {3, 0}); }) == Errc::NotAGatedScene);
  CHECK(error_code_of([] { practice_gate(11, {4, 0}); }) == Errc::InvalidArgument);
}

TEST_CASE("ordering and scene checks") {
  Driver d;
  d.send(0, payload::SceneEntered{});
  SUBCASE("seq must increase") {
    d.seq = 0;
    CHECK(error_code_of([&] { d.send(10, payload::TutorialCompleted{}); }) == Errc::OutOfOrderEvent);
  }
  SUBCASE("time must not run backwards") {
    d.send(500, payload::TutorialCompleted{});
    CHECK(error_code_of([&] { d.send(499, payload::SceneExited{}); }) == Errc::OutOfOrderEvent);
  }
  SUBCASE("events for another scene are rejected") {
    SessionEvent e{d.seq, 10, 2, payload::SceneEntered{}};
    CHECK(error_code_of([&] { advance(d.state, e); }) == Errc::WrongSceneEvent);
  }
  SUBCASE("first event of a scene must be SceneEntered") {
    Driver fresh;
    CHECK(error_code_of([&] { fresh.send(0, payload::TutorialCompleted{}); }) == Errc::UnexpectedEvent);
  }
}

TEST_CASE("tutorial completes and the scene exit advances") {
  Driver d;
  d.send(0, payload::SceneEntered{});
  const auto fx = d.send(60'000, payload::TutorialCompleted{});
  const auto tr = effects_of<effect::SceneTransition>(fx);
  REQUIRE(tr.size() == 1);
  CHECK(tr[0].from == 1);
  CHECK(tr[0].to == 2);
  CHECK(tr[0].at_ms == 60'000);
  CHECK(error_code_of([&] { d.send(61'000, payload::TutorialCompleted{}); }) == Errc::UnexpectedEvent);
  d.send(62'000, payload::SceneExited{});
  CHECK(d.state.current_scene == 2);
  CHECK_FALSE(d.state.scene_entered_ms.has_value());
}

namespace {

Driver kitchen_ready() {
  Driver d = Driver::at_scene(6, 1'000);
  d.send(1'000, payload::SceneEntered{});
  d.send(20'000, payload::CookingItemPlaced{CookingItem::Kettle, 16'000});
  d.send(24'000, payload::CookingItemPlaced{CookingItem::Omelette, 20'000});
  d.send(26'000, payload::CookingItemPlaced{CookingItem::Sausages, 24'000});
  return d;
}

}  // namespace

TEST_CASE("kitchen: final button prompts until the medication is taken") {
  SUBCASE("medication already taken ends the scene") {
    Driver d = kitchen_ready();
    d.send(27'000, payload::MedicationTaken{});
    const auto fx = d.send(28'000, payload::FinalButtonPressed{});
    const auto tr = effects_of<effect::SceneTransition>(fx);
    REQUIRE(tr.size() == 1);
    CHECK(tr[0].to == 7);
    CHECK(d.state.pm_outcomes.at("medication_breakfast").resolved_depth == 0);
  }
  SUBCASE("not taken: first prompt") {
    Driver d = kitchen_ready();
    const auto fx = d.send(28'000, payload::FinalButtonPressed{});
    const auto prompts = effects_of<effect::PromptShown>(fx);
    REQUIRE(prompts.size() == 1);
    CHECK(prompts[0].depth == 1);
    CHECK(prompts[0].text == "You Have to Do Something Else");
    d.send(29'000, payload::MedicationTaken{});
    CHECK(d.state.pm_outcomes.at("medication_breakfast").resolved_depth == 1);
  }
  SUBCASE("never taken: three prompts, then the scene closes") {
    Driver d = kitchen_ready();
    std::vector<int> depths;
    bool ended = false;
    for (int press = 0; press < 4; ++press) {
      const auto fx = d.send(30'000 + press, payload::FinalButtonPressed{});
      for (const auto& p : effects_of<effect::PromptShown>(fx)) depths.push_back(p.depth);
      ended = !effects_of<effect::SceneTransition>(fx).empty();
    }
    CHECK(depths == std::vector<int>{1, 2, 3});
    CHECK(ended);
    const auto& o = d.state.pm_outcomes.at("medication_breakfast");
    CHECK(o.closed);
    CHECK_FALSE(o.resolved_depth.has_value());
  }
  SUBCASE("the final button needs breakfast done") {
    Driver d = Driver::at_scene(6);
    d.send(0, payload::SceneEntered{});
    d.send(100, payload::CookingItemPlaced{CookingItem::Kettle, 1});
    CHECK(error_code_of([&] { d.send(200, payload::FinalButtonPressed{}); }) == Errc::UnexpectedEvent);
  }
  SUBCASE("taking the medication twice is rejected") {
    Driver d = kitchen_ready();
    d.send(27'000, payload::MedicationTaken{});
    CHECK(error_code_of([&] { d.send(27'500, payload::MedicationTaken{}); }) == Errc::UnexpectedEvent);
  }
}

TEST_CASE("living room: exit attempts drive the pie cascade") {
  Driver d = Driver::at_scene(8, 0);
  d.send(0, payload::SceneEntered{});
  d.send(5'000, payload::ItemStowed{"red book", true});
  auto fx = d.send(6'000, payload::ExitAttempted{});
  REQUIRE(effects_of<effect::PromptShown>(fx).size() == 1);
  fx = d.send(7'000, payload::ExitAttempted{});
  CHECK(effects_of<effect::PromptShown>(fx).at(0).depth == 2);
  d.send(8'000, payload::PieRemoved{});
  fx = d.send(9'000, payload::ExitAttempted{});
  CHECK(effects_of<effect::SceneTransition>(fx).size() == 1);
  CHECK(d.state.pm_outcomes.at("chocolate_pie").resolved_depth == 2);
}

TEST_CASE("final scene: timer prompts at 70, 80 and 90 s after entry") {
  const std::int64_t t0 = 3'000'000;
  Driver d = Driver::at_scene(22, t0);
  d.send(t0, payload::SceneEntered{});
  auto fx = d.send(t0 + 69'999, payload::ItemStowed{"6 eggs", true});
  CHECK(effects_of<effect::PromptShown>(fx).empty());

  fx = d.send(t0 + 70'000, payload::ItemStowed{"orange juice", true});
  auto prompts = effects_of<effect::PromptShown>(fx);
  REQUIRE(prompts.size() == 1);
  CHECK(prompts[0].depth == 1);
  CHECK(prompts[0].at_ms == t0 + 70'000);

  SUBCASE("a late event sees every prompt that came due") {
    fx = d.send(t0 + 95'000, payload::ItemStowed{"rice", true});
    prompts = effects_of<effect::PromptShown>(fx);
    REQUIRE(prompts.size() == 2);
    CHECK(prompts[0].depth == 2);
    CHECK(prompts[1].depth == 3);
    CHECK(prompts[1].at_ms == t0 + 90'000);
  }
  SUBCASE("acting between prompts records the depth reached") {
    d.send(t0 + 85'000, payload::MedicationTaken{});
    CHECK(d.state.pm_outcomes.at("medication_afternoon").resolved_depth == 2);
    fx = d.send(t0 + 100'000, payload::FinalButtonPressed{});
    CHECK(effects_of<effect::PromptShown>(fx).empty());
    REQUIRE(effects_of<effect::SessionComplete>(fx).size() == 1);
    CHECK(d.state.complete);
  }
}

TEST_CASE("NPC dialogue: prompt on entry, then answers") {
  SUBCASE("three refusals close the task") {
    Driver d = Driver::at_scene(10);
    auto fx = d.send(0, payload::SceneEntered{});
    auto prompts = effects_of<effect::PromptShown>(fx);
    REQUIRE(prompts.size() == 1);
    CHECK(prompts[0].text == "Do we need to do something else at this time?");
    d.send(1'000, payload::NpcPromptAnswered{false});
    d.send(2'000, payload::NpcPromptAnswered{false});
    fx = d.send(3'000, payload::NpcPromptAnswered{false});
    CHECK(effects_of<effect::SceneTransition>(fx).size() == 1);
    CHECK_FALSE(d.state.pm_outcomes.at("call_rose").resolved_depth.has_value());
  }
  SUBCASE("yes opens the item board") {
    Driver d = Driver::at_scene(15);
    d.send(0, payload::SceneEntered{});
    d.send(1'000, payload::NpcPromptAnswered{false});
    auto fx = d.send(2'000, payload::NpcPromptAnswered{true});
    CHECK(effects_of<effect::SceneTransition>(fx).empty());
    fx = d.send(3'000, payload::NpcItemChosen{ItemCategory::SemanticRelative});
    CHECK(effects_of<effect::SceneTransition>(fx).size() == 1);
    const auto& o = d.state.pm_outcomes.at("carrot_cake");
    CHECK(o.resolved_depth == 2);
    CHECK(o.choice == ItemCategory::SemanticRelative);
  }
  SUBCASE("affirming a false prompt ends the scene") {
    Driver d = Driver::at_scene(20);
    d.send(0, payload::SceneEntered{});
    const auto fx = d.send(1'000, payload::NpcPromptAnswered{true});
    CHECK(effects_of<effect::SceneTransition>(fx).size() == 1);
    CHECK(d.state.pm_outcomes.at("false_prompt_petrol").resolved_depth == 1);
  }
  SUBCASE("keys are handed over only after the correct choice") {
    Driver d = Driver::at_scene(21);
    d.send(0, payload::SceneEntered{});
    d.send(1'000, payload::NpcPromptAnswered{true});
    d.send(2'000, payload::NpcItemChosen{ItemCategory::Correct});
    d.send(3'000, payload::KeysGiven{});
    CHECK(error_code_of([&] { d.send(4'000, payload::KeysGiven{}); }) == Errc::UnexpectedEvent);
  }
}

TEST_CASE("practice scenes retry until the gate passes") {
  Driver d = Driver::at_scene(11);
  d.send(0, payload::SceneEntered{});
  auto fx = d.send(10'000, payload::PracticeAttempt{2, 0});
  auto retries = effects_of<effect::PracticeRetry>(fx);
  REQUIRE(retries.size() == 1);
  CHECK(retries[0].attempt == 1);
  fx = d.send(20'000, payload::PracticeAttempt{3, 1});
  CHECK(effects_of<effect::PracticeRetry>(fx).at(0).attempt == 2);
  fx = d.send(30'000, payload::PracticeAttempt{3, 0});
  CHECK(effects_of<effect::SceneTransition>(fx).size() == 1);
  CHECK(d.state.practice_attempts.at(11) == 3);
  CHECK(error_code_of([&] { d.send(31'000, payload::PracticeAttempt{3, 0}); }) == Errc::UnexpectedEvent);
}

TEST_CASE("notes are only available in PM scenes") {
  Driver tut;
  tut.send(0, payload::SceneEntered{});
  CHECK(error_code_of([&] { tut.send(1, payload::NoteOpened{}); }) == Errc::UnexpectedEvent);

  Driver pm = Driver::at_scene(16);
  pm.send(0, payload::SceneEntered{});
  pm.send(1, payload::NoteOpened{});
  CHECK(error_code_of([&] { pm.send(2, payload::NoteOpened{}); }) == Errc::UnexpectedEvent);
  pm.send(3, payload::NoteClosed{});
  CHECK(error_code_of([&] { pm.send(4, payload::NoteClosed{}); }) == Errc::UnexpectedEvent);
}

TEST_CASE("advance is pure") {
  Driver d = kitchen_ready();
  const SessionState before = d.state;
  const SessionEvent e{d.seq, 40'000, 6, payload::FinalButtonPressed{}};
  const AdvanceResult r1 = advance(before, e);
  const AdvanceResult r2 = advance(before, e);
  CHECK(r1.state == r2.state);
  CHECK(r1.effects == r2.effects);
  CHECK(before == d.state);
}

TEST_CASE("replayed simulations obey the scene and prompt invariants") {
  const ScoringConfig config;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CAPTURE(seed);
    ParticipantProfile p;
    p.pm_hit_prob = {0.3, 0.3, 0.3};
    p.attention_hit_prob = 0.6;
    const SessionLog log = simulate_session(p, seed, config);
    const ReplayResult r = replay(log);
    CHECK(r.final_state.complete);

    std::vector<int> expected(22);
    for (int i = 0; i < 22; ++i) expected[static_cast<std::size_t>(i)] = i + 1;
    CHECK(r.visited == expected);

    std::map<std::string, std::vector<int>> depths;
    for (const auto& e : effects_of<effect::PromptShown>(r.effects)) depths[e.task].push_back(e.depth);
    for (const auto& [task, ds] : depths) {
      CAPTURE(task);
      for (std::size_t i = 0; i < ds.size(); ++i) CHECK(ds[i] == static_cast<int>(i) + 1);
      CHECK(ds.size() <= 3);
    }

    // Scene 12 is only entered after the scene 11 gate passed (and 19 after 18).
    bool passed_11 = false, passed_18 = false;
    for (const auto& e : log.events) {
      if (const auto* a = e.as<payload::PracticeAttempt>()) {
        const bool pass = a->targets_hit == 3 && a->distractors_hit == 0;
        if (e.scene == 11) passed_11 = passed_11 || pass;
        if (e.scene == 18) passed_18 = passed_18 || pass;
      }
      if (e.kind() == EventKind::SceneEntered && e.scene == 12) CHECK(passed_11);
      if (e.kind() == EventKind::SceneEntered && e.scene == 19) CHECK(passed_18);
    }

    // Replaying twice yields the identical effect stream.
    CHECK(replay(log).effects == r.effects);
  }
}
