#include "vreal/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vreal/error.hpp"

namespace vreal {

// ---------------------------------------------------------------------------
// Recognition

RecognitionCatalog RecognitionCatalog::standard() {
  return RecognitionCatalog{
      {"semi-skimmed milk", "1 kg potatoes", "cheddar cheese", "6 eggs", "orange juice",
       "500 g pasta", "250 g cherry tomatoes", "ground coffee", "250 g butter", "chicken breast"},
      {"skimmed milk", "red leicester cheese", "apple juice", "instant coffee", "turkey breast"},
      {"2 kg potatoes", "12 eggs", "1 kg pasta", "500 g cherry tomatoes", "500 g butter"},
      {"bread", "bananas", "rice", "yoghurt", "cereal", "apples", "onions", "tea bags", "sugar",
       "biscuits"},
  };
}

void RecognitionCatalog::validate() const {
  if (targets.size() != 10 || qualitative_distractors.size() != 5 ||
      quantitative_distractors.size() != 5 || false_items.size() != 10) {
    throw Error(Errc::ConfigError, "recognition catalog must hold 10/5/5/10 items");
  }
  std::set<std::string> all;
  for (const auto* group : {&targets, &qualitative_distractors, &quantitative_distractors, &false_items}) {
    for (const auto& id : *group) {
      if (!all.insert(id).second) {
        throw Error(Errc::ConfigError, "recognition item \"" + id + "\" appears twice");
      }
    }
  }
}

int score_recognition(const std::set<std::string>& selected, const RecognitionCatalog& catalog) {
  auto contains = [](const std::vector<std::string>& v, const std::string& id) {
    return std::find(v.begin(), v.end(), id) != v.end();
  };
  if (selected.size() > kShoppingListCapacity) {
    throw Error(Errc::InvalidArgument, std::to_string(selected.size()) +
                                           " items selected; the list holds at most 10");
  }
  int score = 0;
  for (const auto& id : selected) {
    if (contains(catalog.targets, id)) {
      score += 2;
    } else if (contains(catalog.qualitative_distractors, id) ||
               contains(catalog.quantitative_distractors, id)) {
      score += 1;
    } else if (!contains(catalog.false_items, id)) {
      throw Error(Errc::UnknownItem, "\"" + id + "\" is not in the recognition catalog");
    }
  }
  return score;
}

// ---------------------------------------------------------------------------
// Planning

int planning_route_score(int selected_units) {
  return std::max(0, kIdealRouteUnits - std::abs(selected_units - kIdealRouteUnits));
}

int planning_time_modifier(double z, const TimeModifierSteps& steps) {
  if (z <= -steps.outer_z) return 2;
  if (z <= -steps.inner_z) return 1;
  if (z < steps.inner_z) return 0;
  if (z < steps.outer_z) return -1;
  return -2;
}

PlanningScore score_planning(const RouteSelection& route, const NormativeTiming& norms,
                             const TimeModifierSteps& steps) {
  if (!(norms.sd_s > 0.0)) throw Error(Errc::InvalidArgument, "normative sd must be positive");
  if (!(route.completion_time_s > 0.0)) {
    throw Error(Errc::InvalidArgument, "planning completion time must be positive");
  }
  for (int unit : route.selected_units) {
    if (unit < 1 || unit > kStreetUnits) {
      throw Error(Errc::InvalidArgument, "street unit " + std::to_string(unit) + " outside 1..23");
    }
  }
  PlanningScore s;
  s.route_score = planning_route_score(static_cast<int>(route.selected_units.size()));
  s.z = (route.completion_time_s - norms.mean_s) / norms.sd_s;
  s.time_modifier = planning_time_modifier(s.z, steps);
  s.total = s.route_score + s.time_modifier;
  return s;
}

// ---------------------------------------------------------------------------
// Cooking

std::string_view to_string(CookingBand b) noexcept {
  switch (b) {
    case CookingBand::VeryEarly: return "VeryEarly";
    case CookingBand::Early: return "Early";
    case CookingBand::SlightlyEarly: return "SlightlyEarly";
    case CookingBand::OnTime: return "OnTime";
    case CookingBand::SlightlyLate: return "SlightlyLate";
    case CookingBand::Late: return "Late";
    case CookingBand::VeryLate: return "VeryLate";
  }
  return "?";
}

namespace {

using BandTable = std::array<BandInterval, kCookingBandCount>;

// Printed windows in centiseconds; "> x secs" starts one centisecond after x.
const BandTable kOmelette = {{{0, 1399}, {1400, 1599}, {1600, 1799}, {1800, 2200},
                              {2201, 2399}, {2400, 2600}, {2601, std::nullopt}}};
const BandTable kSausages = {{{0, 1799}, {1800, 1999}, {2000, 2199}, {2200, 2600},
                              {2601, 2799}, {2800, 3000}, {3001, std::nullopt}}};
const BandTable kKettle = {{{0, 1099}, {1100, 1299}, {1300, 1499}, {1500, 1700},
                            {1701, 1899}, {1900, 2100}, {2101, std::nullopt}}};

}  // namespace

const std::array<BandInterval, kCookingBandCount>& cooking_band_table(CookingItem item) {
  switch (item) {
    case CookingItem::Omelette: return kOmelette;
    case CookingItem::Sausages: return kSausages;
    case CookingItem::Kettle: return kKettle;
  }
  return kOmelette;
}

std::int64_t to_centiseconds(double t_s) {
  if (!(t_s >= 0.0) || !std::isfinite(t_s)) {
    throw Error(Errc::InvalidArgument, "cooking time must be finite and non-negative");
  }
  // The small epsilon keeps printed two-decimal values (e.g. 22.005) on the
  // half-up side despite binary representation error.
  return static_cast<std::int64_t>(std::floor(t_s * 100.0 + 0.5 + 1e-9));
}

std::int64_t ms_to_centiseconds(std::int64_t ms) {
  if (ms < 0) throw Error(Errc::InvalidArgument, "cooking time must be non-negative");
  return (ms + 5) / 10;
}

CookingBand classify_cooking_centis(CookingItem item, std::int64_t t_cs) {
  if (t_cs < 0) throw Error(Errc::InvalidArgument, "cooking time must be non-negative");
  const auto& table = cooking_band_table(item);
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (t_cs >= table[i].lo_cs && (!table[i].hi_cs || t_cs <= *table[i].hi_cs)) {
      return static_cast<CookingBand>(i);
    }
  }
  throw Error(Errc::InvalidArgument, "cooking band table has a gap");  // unreachable for valid tables
}

CookingBand classify_cooking_time(CookingItem item, double t_s) {
  return classify_cooking_centis(item, to_centiseconds(t_s));
}

double cooking_on_time_midpoint_s(CookingItem item) {
  const auto& on_time = cooking_band_table(item)[static_cast<std::size_t>(CookingBand::OnTime)];
  return static_cast<double>(on_time.lo_cs + *on_time.hi_cs) / 200.0;
}

CookingScore score_cooking(const CookingTimeline& timeline, const BandPoints& band_points) {
  const std::array<std::pair<CookingItem, double>, 3> items = {{
      {CookingItem::Omelette, timeline.omelette_removed_s},
      {CookingItem::Sausages, timeline.sausages_removed_s},
      {CookingItem::Kettle, timeline.kettle_removed_s},
  }};
  CookingScore s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    s.time_cs[i] = to_centiseconds(items[i].second);
    s.bands[i] = classify_cooking_centis(items[i].first, s.time_cs[i]);
    s.points[i] = band_points[static_cast<std::size_t>(s.bands[i])];
    s.total += s.points[i];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Prospective memory

int score_prompt_cascade(int prompt_depth_when_done) {
  static constexpr std::array<int, 5> kPoints = {6, 4, 2, 1, 0};
  if (prompt_depth_when_done < 0 || prompt_depth_when_done > 4) {
    throw Error(Errc::InvalidArgument, "prompt depth must be 0..4");
  }
  return kPoints[static_cast<std::size_t>(prompt_depth_when_done)];
}

PositiveMatrix default_positive_matrix() {
  PositiveMatrix m{};
  constexpr std::array<int, 3> base = {6, 4, 2};
  for (std::size_t d = 0; d < base.size(); ++d) {
    const int b = base[d];
    m[d][static_cast<std::size_t>(ItemCategory::Correct)] = b;
    m[d][static_cast<std::size_t>(ItemCategory::SemanticRelative)] = (b + 1) / 2;
    m[d][static_cast<std::size_t>(ItemCategory::OtherPmTask)] = 1;
    m[d][static_cast<std::size_t>(ItemCategory::Unrelated)] = 0;
  }
  return m;
}

int score_npc_pm_positive(const NpcPmOutcome& outcome, const PositiveMatrix& matrix) {
  if (outcome.yes_at_prompt < 0 || outcome.yes_at_prompt > 3) {
    throw Error(Errc::InvalidArgument, "yes_at_prompt must be 0..3");
  }
  if ((outcome.yes_at_prompt == 0) != !outcome.item_choice) {
    throw Error(Errc::InvalidArgument, "an item choice exists exactly when a prompt was affirmed");
  }
  if (outcome.yes_at_prompt == 0) return 0;
  return matrix[static_cast<std::size_t>(outcome.yes_at_prompt - 1)]
               [static_cast<std::size_t>(*outcome.item_choice)];
}

int score_npc_pm_negative(int yes_at_prompt, const NegativeDeductions& deductions) {
  if (yes_at_prompt < 0 || yes_at_prompt > 3) {
    throw Error(Errc::InvalidArgument, "yes_at_prompt must be 0..3");
  }
  return deductions[static_cast<std::size_t>(yes_at_prompt)];
}

// ---------------------------------------------------------------------------
// Collection

const std::vector<std::string>& collection_targets() {
  static const std::vector<std::string> items = {"red book",     "£20",        "smartphone",
                                                 "library card", "flat keys",  "car keys"};
  return items;
}

CollectionScore score_collection(const std::vector<Grab>& grabs) {
  const auto& targets = collection_targets();
  std::set<std::string> collected;
  CollectionScore s;
  for (const auto& g : grabs) {
    if (g.kind == Grab::Kind::DistractorGrabAttempt) {
      ++s.errors;
      continue;
    }
    if (std::find(targets.begin(), targets.end(), g.id) == targets.end()) {
      throw Error(Errc::UnknownItem, "\"" + g.id + "\" is not a collection target");
    }
    collected.insert(g.id);
  }
  s.points = static_cast<int>(collected.size());
  return s;
}

// ---------------------------------------------------------------------------
// Attention

void StimulusCounts::validate(std::string_view what) const {
  for (int n : {targets, distractor_a, distractor_b}) {
    if (n < 0 || n % 2 != 0) {
      throw Error(Errc::ConfigError,
                  std::string(what) + " stimulus counts must be non-negative and even");
    }
  }
}

namespace {

struct Placement {
  int block;  // 0 = target, 1 = distractor_a, 2 = distractor_b
  Side side;
};

Placement place(int id, const StimulusCounts& c) {
  if (id < 0 || id >= c.total()) {
    throw Error(Errc::MalformedLog, "stimulus " + std::to_string(id) + " outside the layout");
  }
  int local = id;
  int block = 0;
  for (int size : {c.targets, c.distractor_a}) {
    if (local < size) break;
    local -= size;
    ++block;
  }
  return {block, local % 2 == 0 ? Side::Left : Side::Right};
}

}  // namespace

VisualStimulus visual_stimulus(int id, const StimulusCounts& counts) {
  const Placement p = place(id, counts);
  return {static_cast<VisualKind>(p.block), p.side};
}

AuditoryStimulus auditory_stimulus(int id, const StimulusCounts& counts) {
  const Placement p = place(id, counts);
  return {static_cast<AuditoryKind>(p.block), p.side};
}

VisualScore score_visual_attention(const std::vector<VisualSpot>& spots, const StimulusCounts& counts) {
  VisualScore s;
  std::set<int> seen;
  for (const auto& spot : spots) {
    const VisualStimulus expected = visual_stimulus(spot.stimulus, counts);
    if (expected.kind != spot.kind || expected.side != spot.side) {
      throw Error(Errc::MalformedLog,
                  "poster " + std::to_string(spot.stimulus) + " does not match the layout");
    }
    if (!seen.insert(spot.stimulus).second) {
      throw Error(Errc::DuplicateSpot, "poster " + std::to_string(spot.stimulus) + " spotted twice");
    }
    s.points += spot.kind == VisualKind::Target ? 1 : -1;
    ++s.spotted[static_cast<std::size_t>(spot.side)][static_cast<std::size_t>(spot.kind)];
  }
  return s;
}

AuditoryScore score_auditory_attention(const std::vector<AuditoryResponse>& responses) {
  AuditoryScore s;
  for (const auto& r : responses) {
    ++s.detected_by_kind[static_cast<std::size_t>(r.kind)];
    ++s.detected_by_side[static_cast<std::size_t>(r.side)];
    if (r.kind != AuditoryKind::Target) {
      s.points -= 1;
    } else if (r.controller == r.side) {
      s.points += 2;
    } else {
      s.points += 1;
      ++s.wrong_controller;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Config

void ScoringConfig::validate() const {
  recognition.validate();
  visual.validate("visual");
  auditory.validate("auditory");
  if (!(planning_norms.sd_s > 0.0) || !(planning_norms.mean_s > 0.0)) {
    throw Error(Errc::ConfigError, "planning norms need positive mean and sd");
  }
  if (!(planning_steps.inner_z > 0.0) || !(planning_steps.outer_z > planning_steps.inner_z)) {
    throw Error(Errc::ConfigError, "planning z steps must satisfy 0 < inner < outer");
  }
  for (int d : pm_negative) {
    if (d > 0 || d < -kMaxDeductionPerScene) {
      throw Error(Errc::ConfigError, "false-prompt deductions must lie in [-3, 0]");
    }
  }
  if (!(session_duration_s > 0.0)) throw Error(Errc::ConfigError, "session duration must be positive");
}

// ---------------------------------------------------------------------------
// Scorecard

int TaskScorecard::pm_points(std::string_view task) const {
  for (const auto& p : pm) {
    if (p.task == task) return p.points;
  }
  throw Error(Errc::InvalidArgument, "no PM task named " + std::string(task));
}

int TaskScorecard::pm_total() const {
  return std::accumulate(pm.begin(), pm.end(), 0,
                         [](int acc, const PmTaskScore& p) { return acc + p.points; });
}

namespace {

template <class P>
std::vector<P> collect(const SessionLog& log, int scene_id) {
  std::vector<P> out;
  for (const auto& e : log.events) {
    if (e.scene != scene_id) continue;
    if (const P* p = e.as<P>()) out.push_back(*p);
  }
  return out;
}

}  // namespace

TaskScorecard aggregate_scorecard(const SessionLog& log, const ScoringConfig& config) {
  ReplayResult rr;
  try {
    rr = replay(log);
  } catch (const Error& e) {
    throw Error(Errc::MalformedLog, std::string("replay rejected the log: ") + e.what());
  }
  if (!rr.final_state.complete) {
    throw Error(Errc::IncompleteSession, "log ends in scene " +
                                             std::to_string(rr.final_state.current_scene) +
                                             " before the final button of scene 22");
  }

  TaskScorecard card;
  try {
    const auto intents = collect<payload::NotesIntentAnswered>(log, 3);
    for (std::size_t i = 0; i < intents.size() && i < 3; ++i) card.pm_notes_intent[i] = intents[i].yes;

    std::set<std::string> picked;
    for (const auto& s : collect<payload::ItemSelected>(log, 3)) picked.insert(s.item);
    card.immediate_recognition = score_recognition(picked, config.recognition);

    RouteSelection route;
    for (const auto& t : collect<payload::RouteUnitToggled>(log, 3)) {
      if (!route.selected_units.insert(t.unit).second) route.selected_units.erase(t.unit);
    }
    const auto submitted = collect<payload::RouteSubmitted>(log, 3);
    route.completion_time_s = static_cast<double>(submitted.at(0).elapsed_ms) / 1000.0;
    card.planning_units = static_cast<int>(route.selected_units.size());
    card.planning_time_s = route.completion_time_s;
    card.planning = score_planning(route, config.planning_norms, config.planning_steps);

    CookingScore& cooking = card.cooking;
    for (const auto& c : collect<payload::CookingItemPlaced>(log, 6)) {
      const auto i = static_cast<std::size_t>(c.item);
      cooking.time_cs[i] = ms_to_centiseconds(c.on_heat_ms);
      cooking.bands[i] = classify_cooking_centis(c.item, cooking.time_cs[i]);
      cooking.points[i] = config.cooking_band_points[static_cast<std::size_t>(cooking.bands[i])];
    }
    cooking.total = cooking.points[0] + cooking.points[1] + cooking.points[2];

    for (const auto& spec : pm_tasks()) {
      const PmOutcome& o = rr.final_state.pm_outcomes.at(spec.id);
      PmTaskScore p;
      p.task = spec.id;
      p.polarity = spec.polarity;
      p.trigger = spec.cascade.trigger;
      p.resolved_depth = o.resolved_depth;
      p.choice = o.choice;
      for (const auto& sd : scene_sequence()) {
        if (!sd.pm_tasks.empty() && sd.pm_tasks.front().id == spec.id) p.scene = sd.id;
      }
      if (spec.polarity == PmPolarity::NegativeFalsePrompt) {
        p.points = score_npc_pm_negative(o.resolved_depth.value_or(0), config.pm_negative);
      } else if (spec.cascade.trigger == CascadeTrigger::NpcDialogue) {
        p.points = score_npc_pm_positive({o.resolved_depth.value_or(0), o.choice}, config.pm_positive);
      } else {
        p.points = score_prompt_cascade(o.resolved_depth.value_or(4));
      }
      card.pm.push_back(std::move(p));
    }

    std::vector<Grab> grabs;
    for (const auto& s : collect<payload::ItemStowed>(log, 8)) {
      grabs.push_back({s.accepted ? Grab::Kind::TargetItem : Grab::Kind::DistractorGrabAttempt, s.item});
    }
    card.collection = score_collection(grabs);

    card.visual_attention =
        score_visual_attention(collect<payload::PosterSpotted>(log, 12), config.visual);

    std::set<std::string> bought;
    for (const auto& s : collect<payload::ShoppingCollected>(log, 14)) bought.insert(s.item);
    card.delayed_recognition = score_recognition(bought, config.recognition);

    const auto sounds = collect<payload::SoundTriggered>(log, 19);
    for (const auto& s : sounds) {
      const AuditoryStimulus expected = auditory_stimulus(s.stimulus, config.auditory);
      if (expected.kind != s.kind || expected.side != s.side) {
        throw Error(Errc::MalformedLog,
                    "sound " + std::to_string(s.stimulus) + " does not match the layout");
      }
    }
    card.auditory_attention = score_auditory_attention(sounds);

    card.telemetry = derive_telemetry(log);
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedLog) throw;
    throw Error(Errc::MalformedLog, e.what());
  }
  return card;
}

}  // namespace vreal
