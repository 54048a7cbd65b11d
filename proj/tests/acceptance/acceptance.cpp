// Acceptance suite: one PASS/FAIL line per criterion, with its runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "vreal/bayes.hpp"
#include "vreal/participant_sim.hpp"
#include "vreal/report.hpp"
#include "vreal/scoring.hpp"
#include "vreal/session_log.hpp"
#include "vreal/vrnq.hpp"

using namespace vreal;

namespace {

/// Collects failed expectations for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 5) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<void(Check&)> body;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// 1 ---------------------------------------------------------------------------

void planning_example(Check& c) {
  auto units = [](int n) {
    RouteSelection r;
    for (int u = 1; u <= n; ++u) r.selected_units.insert(u);
    r.completion_time_s = NormativeTiming{}.mean_s;
    return r;
  };
  for (int n : {18, 12}) {
    const PlanningScore s = score_planning(units(n), NormativeTiming{});
    c.expect(s.route_score == 12, std::to_string(n) + " units gave route_score " + std::to_string(s.route_score));
    c.expect(planning_route_score(n) == 12, "planning_route_score(" + std::to_string(n) + ")");
  }
}

// 2 ---------------------------------------------------------------------------

void recognition_bounds(Check& c) {
  const auto cat = RecognitionCatalog::standard();
  const std::set<std::string> targets(cat.targets.begin(), cat.targets.end());
  c.expect(score_recognition(targets, cat) == 20, "all targets");

  std::vector<std::string> pool;
  std::vector<int> worth;
  for (const auto& [group, points] : {std::pair{&cat.targets, 2}, std::pair{&cat.qualitative_distractors, 1},
                                      std::pair{&cat.quantitative_distractors, 1}, std::pair{&cat.false_items, 0}}) {
    for (const auto& item : *group) {
      pool.push_back(item);
      worth.push_back(points);
    }
  }
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(0, kShoppingListCapacity);
  for (int trial = 0; trial < 10'000; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t k = size(rng);
    std::set<std::string> sel;
    int expected = 0;
    for (std::size_t i = 0; i < k; ++i) {
      sel.insert(pool[order[i]]);
      expected += worth[order[i]];
    }
    const int got = score_recognition(sel, cat);
    c.expect(got >= 0 && got <= kRecognitionMax, "score out of range: " + std::to_string(got));
    c.expect(got == expected, "trial " + std::to_string(trial) + " scored " + std::to_string(got));
    if (k < kShoppingListCapacity) {
      sel.insert(pool[order[k]]);
      c.expect(score_recognition(sel, cat) - got == worth[order[k]], "delta for " + pool[order[k]]);
    }
  }
}

// 3 ---------------------------------------------------------------------------

void cooking_conformance(Check& c) {
  struct Probe {
    CookingItem item;
    double t;
    CookingBand band;
  };
  using B = CookingBand;
  const CookingItem O = CookingItem::Omelette, S = CookingItem::Sausages, K = CookingItem::Kettle;
  // The printed lower endpoint of every band.
  const std::vector<Probe> probes = {
      {O, 0.00, B::VeryEarly}, {O, 14.00, B::Early}, {O, 16.00, B::SlightlyEarly}, {O, 18.00, B::OnTime},
      {O, 22.01, B::SlightlyLate}, {O, 24.00, B::Late}, {O, 26.01, B::VeryLate},
      {S, 0.00, B::VeryEarly}, {S, 18.00, B::Early}, {S, 20.00, B::SlightlyEarly}, {S, 22.00, B::OnTime},
      {S, 26.01, B::SlightlyLate}, {S, 28.00, B::Late}, {S, 30.01, B::VeryLate},
      {K, 0.00, B::VeryEarly}, {K, 11.00, B::Early}, {K, 13.00, B::SlightlyEarly}, {K, 15.00, B::OnTime},
      {K, 17.01, B::SlightlyLate}, {K, 19.00, B::Late}, {K, 21.01, B::VeryLate},
  };
  c.expect(probes.size() == 21, "probe count");
  for (const auto& p : probes) {
    const B got = classify_cooking_time(p.item, p.t);
    c.expect(got == p.band, std::string(to_string(p.item)) + " " + fmt(p.t) + " -> " + std::string(to_string(got)));
  }

  int swept = 0;
  for (CookingItem item : {O, S, K}) {
    const auto& table = cooking_band_table(item);
    for (std::int64_t cs = 0; cs <= 6000; ++cs, ++swept) {
      int containing = 0;
      for (const auto& band : table) {
        if (cs >= band.lo_cs && (!band.hi_cs || cs <= *band.hi_cs)) ++containing;
      }
      c.expect(containing == 1, std::string(to_string(item)) + " " + std::to_string(cs) + " cs lies in " +
                                    std::to_string(containing) + " bands");
      const auto& iv = table[static_cast<std::size_t>(classify_cooking_centis(item, cs))];
      c.expect(cs >= iv.lo_cs && (!iv.hi_cs || cs <= *iv.hi_cs), "classifier disagrees with table");
    }
  }
  c.expect(swept == 18'003, "sweep size " + std::to_string(swept));
}

// 4 ---------------------------------------------------------------------------

void cascade_oracles(Check& c) {
  const int cascade[] = {6, 4, 2, 1, 0};
  for (int d = 0; d <= 4; ++d) c.expect(score_prompt_cascade(d) == cascade[d], "cascade depth " + std::to_string(d));

  const PositiveMatrix m = default_positive_matrix();
  const int base[] = {6, 4, 2};
  c.expect(score_npc_pm_positive({0, std::nullopt}, m) == 0, "positive never affirmed");
  for (int yes = 1; yes <= 3; ++yes) {
    const int b = base[yes - 1];
    const int oracle[] = {b, static_cast<int>(std::ceil(b / 2.0)), 1, 0};
    for (int cat = 0; cat < 4; ++cat) {
      c.expect(score_npc_pm_positive({yes, static_cast<ItemCategory>(cat)}, m) == oracle[cat],
               "positive yes=" + std::to_string(yes) + " category=" + std::to_string(cat));
    }
  }

  const int negative[] = {0, -3, -2, -1};
  for (int yes = 0; yes <= 3; ++yes) {
    const int got = score_npc_pm_negative(yes);
    c.expect(got == negative[yes], "negative yes=" + std::to_string(yes));
    c.expect(got >= -kMaxDeductionPerScene, "per-scene deduction above 3");
    for (int other = 0; other <= 3; ++other) {
      c.expect(got + score_npc_pm_negative(other) >= -6, "total deduction above 6");
    }
  }

  // The same bounds hold on scorecards from sessions that affirm false prompts.
  ParticipantProfile gullible;
  gullible.false_prompt_yes_prob = 1.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TaskScorecard card = aggregate_scorecard(simulate_session(gullible, seed, {}), {});
    int deducted = 0;
    for (const auto& p : card.pm) {
      if (p.polarity != PmPolarity::NegativeFalsePrompt) continue;
      c.expect(p.points >= -3, "simulated per-scene deduction");
      deducted += p.points;
    }
    c.expect(deducted == -6, "seed " + std::to_string(seed) + " deducted " + std::to_string(deducted));
  }
}

// 5 ---------------------------------------------------------------------------

void attention_scoring(Check& c) {
  const StimulusCounts counts;
  std::vector<VisualSpot> targets;
  for (int id = 0; id < counts.total(); ++id) {
    const VisualStimulus s = visual_stimulus(id, counts);
    if (s.kind == VisualKind::Target) targets.push_back({id, s.kind, s.side});
  }
  c.expect(score_visual_attention(targets).points == 16, "visual all targets");

  int cases = 0;
  for (int id = 0; id < counts.total(); ++id) {
    const AuditoryStimulus s = auditory_stimulus(id, counts);
    for (Side controller : {Side::Left, Side::Right}) {
      const int expected = s.kind != AuditoryKind::Target ? -1 : s.side == controller ? 2 : 1;
      const int got = score_auditory_attention({{id, s.kind, s.side, controller}}).points;
      c.expect(got == expected, "auditory stimulus " + std::to_string(id));
      ++cases;
    }
  }
  c.expect(cases == 64, "auditory cross product size");
}

// 6 ---------------------------------------------------------------------------

void vrnq_gating(Check& c) {
  auto agg = [](std::array<double, 4> sub, double total) {
    CohortAggregate a;
    for (std::size_t d = 0; d < 4; ++d) a.sub[d].median = sub[d];
    a.total.median = total;
    return a;
  };
  auto all_pass = [](const CutoffVerdict& v) { return std::all_of(v.pass.begin(), v.pass.end(), [](bool p) { return p; }); };
  auto none_pass = [](const CutoffVerdict& v) { return std::none_of(v.pass.begin(), v.pass.end(), [](bool p) { return p; }); };
  const auto tier = CutoffTier::Parsimonious;

  const CutoffVerdict alpha = check_cutoffs(agg({25, 23.5, 24, 25.5}, 100), tier);
  c.expect(!alpha.overall && none_pass(alpha), "alpha");
  const CutoffVerdict beta = check_cutoffs(agg({28, 29, 26, 26}, 109.5), tier);
  c.expect(!beta.overall && none_pass(beta), "beta");
  const CutoffVerdict all = check_cutoffs(agg({31, 32, 32, 33}, 128), tier);
  c.expect(all.overall && all_pass(all), "final, all participants");
  const CutoffVerdict gamers = check_cutoffs(agg({32.5, 32, 32.5, 33}, 129.5), tier);
  c.expect(gamers.overall && all_pass(gamers), "final, gamers");
  const CutoffVerdict non_gamers = check_cutoffs(agg({31, 31, 32, 33}, 128), tier);
  c.expect(non_gamers.overall && all_pass(non_gamers), "final, non-gamers");
}

// 7 ---------------------------------------------------------------------------

/// Midpoint rule over theta in (0, pi/2) with delta = r tan(theta), which
/// turns the half-Cauchy prior into the constant weight 2/pi. Nodes whose
/// noncentrality exceeds t + 40 contribute nothing at double precision.
double grid_bf10(double t, int n, double r, int nodes) {
  const double pi = boost::math::constants::pi<double>();
  const double df = n - 1;
  const double null_pdf = boost::math::pdf(boost::math::students_t_distribution<double>(df), t);
  const double h = (pi / 2.0) / nodes;
  double sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double ncp = r * std::tan((i + 0.5) * h) * std::sqrt(static_cast<double>(n));
    if (ncp > t + 40.0) break;
    sum += boost::math::pdf(boost::math::non_central_t_distribution<double>(df, ncp), t) / null_pdf;
  }
  return 2.0 / pi * sum * h;
}

void bayes_oracle(Check& c) {
  for (int n : {12, 25}) {
    for (double t : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
      const double got = bf10_directional(t, n);
      const double want = grid_bf10(t, n, kDefaultPriorScale, 20'000);
      c.expect(std::fabs(got - want) <= 0.02 * want,
               "n=" + std::to_string(n) + " t=" + fmt(t) + ": " + fmt(got) + " vs " + fmt(want));
    }
    double prev = 0.0;
    for (double t = -3.0; t <= 8.0; t += 0.1) {
      const double bf = bf10_directional(t, n);
      c.expect(bf > prev, "not increasing at n=" + std::to_string(n) + " t=" + fmt(t));
      prev = bf;
    }
  }

  using E = EvidenceBand;
  c.expect(classify_evidence(1.0) == E::None, "1");
  c.expect(classify_evidence(std::nextafter(1.0, 2.0)) == E::Anecdotal, "just above 1");
  c.expect(classify_evidence(std::nextafter(3.0, 0.0)) == E::Anecdotal, "just below 3");
  c.expect(classify_evidence(3.0) == E::Moderate, "3");
  c.expect(classify_evidence(10.0) == E::Strong, "10");
  c.expect(classify_evidence(30.0) == E::VeryStrong, "30");
  c.expect(classify_evidence(100.0) == E::Extreme, "100");

  c.expect(classify_evidence(101.651) == E::Extreme && format_bf_cell(101.651) == "101.651***", "101.651");
  c.expect(format_bf_cell(17.597) == "17.597*", "17.597");
  c.expect(format_bf_cell(57974.267) == "57974.267***", "57974.267");
  c.expect(parse_bf_cell("101.651***").value == 101.651, "parse 101.651***");
}

// 8 ---------------------------------------------------------------------------

void end_to_end(Check& c) {
  const ScoringConfig config;
  const ParticipantProfile profile;
  for (std::uint64_t seed : {1ull, 42ull, 2024ull}) {
    const auto started = std::chrono::steady_clock::now();
    const SessionLog a = simulate_session(profile, seed, config);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    c.expect(wall < 1.0, "seed " + std::to_string(seed) + " took " + fmt(wall) + " s");

    const SessionLog b = simulate_session(profile, seed, config);
    c.expect(serialize_log(a) == serialize_log(b), "logs differ for seed " + std::to_string(seed));

    const auto recorded = simulate_cohort({profile}, {seed}, config, 1).front();
    const TaskScorecard rescored = aggregate_scorecard(deserialize_log(serialize_log(a)), config);
    c.expect(rescored == recorded.scorecard, "rescored card differs for seed " + std::to_string(seed));
    c.expect(export_report(rescored, rescored.telemetry) ==
                 export_report(recorded.scorecard, recorded.scorecard.telemetry),
             "reports differ for seed " + std::to_string(seed));
  }

  double minutes = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    minutes += static_cast<double>(simulate_session(profile, seed, config).events.back().sim_time_ms) / 60'000.0;
  }
  minutes /= 20.0;
  c.expect(std::fabs(minutes - 62.2) <= 1.0, "mean session clock " + fmt(minutes) + " min");
}

// 9 ---------------------------------------------------------------------------

void simulator_monotonicity(Check& c) {
  const ScoringConfig config;
  double prev = -1e9;
  for (double hit : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    ParticipantProfile p;
    p.pm_hit_prob = {hit, hit, hit};
    std::vector<ParticipantProfile> profiles(200, p);
    std::vector<std::uint64_t> seeds(200);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i;
    double sum = 0.0;
    for (const auto& s : simulate_cohort(profiles, seeds, config)) sum += s.scorecard.pm_total();
    const double mean = sum / 200.0;
    c.expect(mean >= prev, "mean PM " + fmt(mean) + " at hit " + fmt(hit) + " below " + fmt(prev));
    prev = mean;
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "planning worked example", 0.001, planning_example},
      {2, "recognition bounds", 1.0, recognition_bounds},
      {3, "cooking band conformance", 1.0, cooking_conformance},
      {4, "cascade oracles", 1.0, cascade_oracles},
      {5, "attention scoring", 1.0, attention_scoring},
      {6, "VRNQ gating replication", 1.0, vrnq_gating},
      {7, "Bayes factor oracle", 10.0, bayes_oracle},
      {8, "end-to-end determinism", 5.0, end_to_end},
      {9, "simulator monotonicity", 30.0, simulator_monotonicity},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto started = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (elapsed > cr.limit_s) check.failures.push_back("runtime " + fmt(elapsed) + " s over " + fmt(cr.limit_s) + " s");

    const bool ok = check.failures.empty();
    if (!ok) ++failed;
    std::printf("%s  %d  %-26s %10.3f ms  (limit %g s)\n", ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(),
                elapsed * 1e3, cr.limit_s);
    for (const auto& f : check.failures) std::printf("        %s\n", f.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
