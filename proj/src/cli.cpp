#include "vreal/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vreal/bayes.hpp"
#include "vreal/config_io.hpp"
#include "vreal/error.hpp"
#include "vreal/participant_sim.hpp"
#include "vreal/report.hpp"
#include "vreal/scoring.hpp"
#include "vreal/session_log.hpp"
#include "vreal/vrnq.hpp"

namespace vreal::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

/// Input-specific failure: carries the exit code the command maps it to.
struct CommandError {
  int code;
  std::string message;
};

struct Common {
  std::vector<std::string> argv;
  std::string format = "text";
  std::string manifest_path;
  bool json() const { return format == "json"; }
};

class Manifest {
 public:
  Manifest(std::string command, const Common& common) {
    doc_["tool"] = "vreal";
    doc_["tool_version"] = kToolVersion;
    doc_["command"] = std::move(command);
    doc_["argv"] = common.argv;
  }

  ordered_json& operator[](const char* key) { return doc_[key]; }

  void input(const fs::path& p, const std::string& bytes) {
    doc_["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_hex(bytes)}});
  }

  void output(const fs::path& p, const std::string& bytes) {
    write_text_file(p, bytes);
    doc_["outputs"].push_back({{"path", p.string()}, {"sha256", sha256_hex(bytes)}});
  }

  void write(const fs::path& p) const { write_text_file(p, doc_.dump(2) + "\n"); }

 private:
  ordered_json doc_ = ordered_json::object();
};

ScoringConfig load_config(const std::string& path, Manifest& m) {
  ScoringConfig config;
  if (!path.empty()) {
    const std::string text = read_text_file(path);
    m.input(path, text);
    try {
      config = scoring_config_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::ConfigError, path + ": " + e.what());
    }
  }
  m["config_hash"] = config_hash(config);
  m["config"] = ordered_json::parse(to_json(config).dump());
  return config;
}

ParticipantProfile load_profile(const std::string& path, Manifest& m) {
  ParticipantProfile profile;
  if (!path.empty()) {
    const std::string text = read_text_file(path);
    m.input(path, text);
    try {
      profile = profile_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::ConfigError, path + ": " + e.what());
    }
  }
  m["profile"] = ordered_json::parse(to_json(profile).dump());
  return profile;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

std::string numbered(const char* stem, std::size_t i, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu%s", stem, i + 1, ext);
  return buf;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string profile;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t cohort = 0;
  unsigned threads = 0;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  Manifest m(a.cohort ? "simulate --cohort" : "simulate", c);
  const ScoringConfig config = load_config(a.config, m);
  const ParticipantProfile profile = load_profile(a.profile, m);
  const fs::path dir(a.out);
  ensure_directory(dir);

  if (a.cohort == 0) {
    m["seeds"] = ordered_json::array({a.seed});
    const SessionLog log = simulate_session(profile, a.seed, config);
    const TaskScorecard card = aggregate_scorecard(log, config);
    const std::string report = export_report(card, card.telemetry);
    m.output(dir / "session.ndjson", serialize_log(log));
    m.output(dir / "report.txt", report);
    m.write(c.manifest_path.empty() ? dir / "manifest.json" : fs::path(c.manifest_path));
    out << (c.json() ? scorecard_json(card) + "\n" : report);
    return kOk;
  }

  std::vector<std::uint64_t> seeds(a.cohort);
  for (std::size_t i = 0; i < a.cohort; ++i) seeds[i] = a.seed + i;
  m["seeds"] = seeds;
  const std::vector<ParticipantProfile> profiles(a.cohort, profile);
  const auto sessions = simulate_cohort(profiles, seeds, config, a.threads);

  std::ostringstream csv;
  csv << "session,seed,immediate_recognition,planning_total,cooking_total,pm_total,collection,"
         "collection_errors,visual_attention,delayed_recognition,auditory_attention\n";
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const TaskScorecard& card = sessions[i].scorecard;
    m.output(dir / numbered("session", i, ".ndjson"), serialize_log(sessions[i].log));
    m.output(dir / numbered("report", i, ".txt"), export_report(card, card.telemetry));
    csv << i + 1 << ',' << seeds[i] << ',' << card.immediate_recognition << ',' << card.planning.total
        << ',' << card.cooking.total << ',' << card.pm_total() << ',' << card.collection.points << ','
        << card.collection.errors << ',' << card.visual_attention.points << ','
        << card.delayed_recognition << ',' << card.auditory_attention.points << '\n';
    rows.push_back({{"session", i + 1},
                    {"seed", seeds[i]},
                    {"scorecard", ordered_json::parse(scorecard_json(card, -1))}});
  }
  m.output(dir / "cohort.csv", csv.str());
  m.write(c.manifest_path.empty() ? dir / "manifest.json" : fs::path(c.manifest_path));
  out << (c.json() ? rows.dump(2) + "\n" : csv.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
  std::string log;
  std::string config;
  std::string out;
};

int cmd_score(const ScoreArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  Manifest m("score", c);
  const ScoringConfig config = load_config(a.config, m);
  const std::string bytes = read_text_file(a.log);
  m.input(a.log, bytes);

  TaskScorecard card;
  try {
    const SessionLog log = deserialize_log(bytes);
    const std::string effective = config_hash(config);
    if (!log.header.config_hash.empty() && log.header.config_hash != effective) {
      err << "note: log was recorded under config " << log.header.config_hash
          << "; scoring with config " << effective << "\n";
    }
    m["seeds"] = ordered_json::array({log.header.seed});
    card = aggregate_scorecard(log, config);
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::ParseError:
      case Errc::SchemaVersionMismatch:
      case Errc::MonotonicityViolation:
      case Errc::MalformedLog:
      case Errc::IncompleteSession:
        throw CommandError{kBadLog, a.log + ": " + e.what()};
      default:
        throw;
    }
  }
  const std::string report = export_report(card, card.telemetry);
  if (!a.out.empty()) {
    m.output(a.out, report);
    m.write(c.manifest_path.empty() ? fs::path(a.out + ".manifest.json") : fs::path(c.manifest_path));
  } else if (!c.manifest_path.empty()) {
    m.write(c.manifest_path);
  }
  out << (c.json() ? scorecard_json(card) + "\n" : report);
  return kOk;
}

// ---------------------------------------------------------------------------
// vrnq

const std::array<const char*, kVrnqDomainCount> kDomainLabels = {
    "User Experience", "Game Mechanics", "In-Game Assistance", "VRISE"};

std::vector<VrnqResponseSet> load_cohort(const std::string& path, Manifest& m) {
  const std::string text = read_text_file(path);
  m.input(path, text);
  try {
    return parse_vrnq_csv(text);
  } catch (const Error& e) {
    throw CommandError{kBadCsv, path + ": " + e.what()};
  }
}

DomainMap load_domains(const std::string& path, Manifest& m) {
  const std::string text = read_text_file(path);
  m.input(path, text);
  try {
    const DomainMap map = DomainMap::from_json(nlohmann::json::parse(text));
    m["domains"] = ordered_json::parse(map.to_json().dump());
    return map;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ConfigError, path + ": " + e.what());
  }
}

std::vector<VrnqScores> score_all(const std::vector<VrnqResponseSet>& sets, const DomainMap& map,
                                  const std::string& path) {
  std::vector<VrnqScores> out;
  for (const auto& r : sets) out.push_back(score_vrnq(r, map));
  if (out.empty()) throw CommandError{kBadCsv, path + ": no respondents"};
  return out;
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct VrnqArgs {
  std::string domains;
  std::string out;
  // score
  std::string csv;
  std::string tier = "parsimonious";
  // compare
  std::string csv_a;
  std::string csv_b;
  std::string label_a = "A";
  std::string label_b = "B";
  std::string direction = "less";
  double prior_scale = kDefaultPriorScale;
  std::string table_csv;
};

void finish(Manifest& m, const Common& c, const std::string& out_path, const std::string& text) {
  if (!out_path.empty()) {
    m.output(out_path, text);
    m.write(c.manifest_path.empty() ? fs::path(out_path + ".manifest.json") : fs::path(c.manifest_path));
  } else if (!c.manifest_path.empty()) {
    m.write(c.manifest_path);
  }
}

int cmd_vrnq_score(const VrnqArgs& a, const Common& c, std::ostream& out) {
  Manifest m("vrnq score", c);
  const CutoffTier tier = a.tier == "minimum" ? CutoffTier::Minimum : CutoffTier::Parsimonious;
  m["tier"] = std::string(to_string(tier));
  const DomainMap map = load_domains(a.domains, m);
  const auto sets = load_cohort(a.csv, m);
  const auto scores = score_all(sets, map, a.csv);
  const CohortAggregate agg = aggregate_scores(scores);
  const CutoffVerdict verdict = check_cutoffs(agg, tier);
  const CutoffThresholds th = cutoff_thresholds(tier);

  std::string text;
  if (c.json()) {
    ordered_json j;
    ordered_json people = ordered_json::array();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      ordered_json row = {{"participant_id", sets[i].participant_id}};
      for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
        row[std::string(to_string(static_cast<VrnqDomain>(d)))] = scores[i].sub[d];
      }
      row["total"] = scores[i].total;
      if (sets[i].feedback) row["feedback"] = *sets[i].feedback;
      people.push_back(std::move(row));
    }
    j["participants"] = people;
    ordered_json aggregate;
    for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
      aggregate[std::string(to_string(static_cast<VrnqDomain>(d)))] = {
          {"median", agg.sub[d].median}, {"mad", agg.sub[d].mad}, {"n", agg.sub[d].n}};
    }
    aggregate["total"] = {{"median", agg.total.median}, {"mad", agg.total.mad}, {"n", agg.total.n}};
    j["aggregate"] = aggregate;
    ordered_json pass;
    for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
      pass[std::string(to_string(static_cast<VrnqDomain>(d)))] = static_cast<bool>(verdict.pass[d]);
    }
    pass["total"] = static_cast<bool>(verdict.pass[kVrnqDomainCount]);
    j["verdict"] = {{"tier", std::string(to_string(tier))}, {"pass", pass}, {"overall", verdict.overall}};
    text = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "participant_id,UserExperience,GameMechanics,InGameAssistance,VRISE,total\n";
    for (std::size_t i = 0; i < sets.size(); ++i) {
      os << sets[i].participant_id;
      for (int s : scores[i].sub) os << ',' << s;
      os << ',' << scores[i].total << '\n';
    }
    os << "\nScore                N   Median (MAD)   Cut-off   Verdict\n";
    auto line = [&](const std::string& name, const ScoreSummary& s, double cut, bool ok) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%-20s %-3d %-14s >= %-6s %s\n", name.c_str(), s.n,
                    (number(s.median) + " (" + number(s.mad) + ")").c_str(), number(cut).c_str(),
                    ok ? "pass" : "fail");
      os << buf;
    };
    line("Total VRNQ", agg.total, th.total, verdict.pass[kVrnqDomainCount]);
    for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
      line(kDomainLabels[d], agg.sub[d], th.sub_score, verdict.pass[d]);
    }
    os << "overall (" << to_string(tier) << "): " << (verdict.overall ? "PASS" : "FAIL") << '\n';
    text = os.str();
  }
  finish(m, c, a.out, text);
  out << text;
  return kOk;
}

int cmd_vrnq_compare(const VrnqArgs& a, const Common& c, std::ostream& out) {
  Manifest m("vrnq compare", c);
  const Direction direction = direction_from_string(a.direction);
  m["direction"] = std::string(to_string(direction));
  m["prior_scale"] = a.prior_scale;
  m["prior"] = "Cauchy(0, prior_scale) on the standardized effect size";
  const DomainMap map = load_domains(a.domains, m);
  const auto sets_a = load_cohort(a.csv_a, m);
  const auto sets_b = load_cohort(a.csv_b, m);
  const auto scores_a = score_all(sets_a, map, a.csv_a);
  const auto scores_b = score_all(sets_b, map, a.csv_b);

  std::map<std::string, std::size_t> index_b;
  for (std::size_t i = 0; i < sets_b.size(); ++i) {
    if (!index_b.emplace(sets_b[i].participant_id, i).second) {
      throw CommandError{kBadCsv, a.csv_b + ": duplicate participant " + sets_b[i].participant_id};
    }
  }
  if (sets_a.size() != sets_b.size()) {
    throw CommandError{kBadCsv, "cohorts differ in size (" + std::to_string(sets_a.size()) + " vs " +
                                    std::to_string(sets_b.size()) + ")"};
  }
  // Pairs follow the row order of the first cohort.
  std::array<PairedSample, kVrnqDomainCount + 1> samples;
  for (std::size_t i = 0; i < sets_a.size(); ++i) {
    auto it = index_b.find(sets_a[i].participant_id);
    if (it == index_b.end()) {
      throw CommandError{kBadCsv, a.csv_b + ": no row for participant " + sets_a[i].participant_id};
    }
    const VrnqScores& sa = scores_a[i];
    const VrnqScores& sb = scores_b[it->second];
    samples[0].a.push_back(sa.total);
    samples[0].b.push_back(sb.total);
    for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
      samples[d + 1].a.push_back(sa.sub[d]);
      samples[d + 1].b.push_back(sb.sub[d]);
    }
  }

  std::vector<BayesComparison> rows;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const std::string score = k == 0 ? "Total VRNQ" : kDomainLabels[k - 1];
    rows.push_back(compare_paired(score + " - " + a.label_a, score + " - " + a.label_b, samples[k],
                                  direction, a.prior_scale));
  }

  std::string text;
  if (c.json()) {
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json row = {{"hypothesis", r.hypothesis()},
                          {"direction", std::string(to_string(r.direction))},
                          {"prior_scale", r.prior_scale},
                          {"df", r.df}};
      if (r.degenerate) {
        row["error"] = "DegenerateSample";
        row["message"] = *r.degenerate;
      } else {
        row["t"] = r.t;
        row["p"] = r.p;
        row["bf10"] = r.bf10;
        row["bf10_rel_error"] = r.bf10_rel_error;
        row["band"] = std::string(to_string(r.band));
        row["p_cell"] = format_p_value(r.p);
        row["bf10_cell"] = format_bf_cell(r.bf10);
      }
      j.push_back(std::move(row));
    }
    text = j.dump(2) + "\n";
  } else {
    text = comparison_table_text(rows);
  }
  if (!a.table_csv.empty()) m.output(a.table_csv, comparison_table_csv(rows));
  finish(m, c, a.out, text);
  out << text;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate, score and evaluate VR-EAL sessions", "vreal"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  common.argv = args;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--manifest", common.manifest_path, "Where to write the run manifest");
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a session (or a cohort) and score it");
  simulate->add_option("--profile", sim.profile, "Participant profile (JSON)");
  simulate->add_option("--config", sim.config, "Scoring config (JSON)");
  simulate->add_option("--seed", sim.seed, "Seed")->required();
  simulate->add_option("--out", sim.out, "Output directory")->required();
  simulate->add_option("--cohort", sim.cohort, "Number of sessions (seeds seed, seed+1, ...)")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--threads", sim.threads, "Worker threads for --cohort (0 = all cores)");
  add_common(simulate);

  ScoreArgs sc;
  auto* score = app.add_subcommand("score", "Replay and score a session log");
  score->add_option("log", sc.log, "Session log (NDJSON)")->required();
  score->add_option("--config", sc.config, "Scoring config (JSON)");
  score->add_option("--out", sc.out, "Write the report here");
  add_common(score);

  VrnqArgs vq;
  auto* vrnq = app.add_subcommand("vrnq", "VRNQ scoring and version comparison");
  vrnq->require_subcommand(1);
  auto* vscore = vrnq->add_subcommand("score", "Score a cohort and check the cut-offs");
  vscore->add_option("csv", vq.csv, "Cohort CSV")->required();
  vscore->add_option("--domains", vq.domains, "Item-to-domain map (JSON)")->required();
  vscore->add_option("--tier", vq.tier, "Cut-off tier")
      ->check(CLI::IsMember({"minimum", "parsimonious"}));
  vscore->add_option("--out", vq.out, "Also write the output here");
  add_common(vscore);

  auto* vcompare = vrnq->add_subcommand("compare", "Paired comparison of two cohorts");
  vcompare->add_option("csv_a", vq.csv_a, "First cohort CSV")->required();
  vcompare->add_option("csv_b", vq.csv_b, "Second cohort CSV")->required();
  vcompare->add_option("--domains", vq.domains, "Item-to-domain map (JSON)")->required();
  vcompare->add_option("--direction", vq.direction, "H1 direction for A relative to B")
      ->check(CLI::IsMember({"less", "greater", "two-sided"}));
  vcompare->add_option("--prior-scale", vq.prior_scale, "Cauchy prior scale")
      ->check(CLI::PositiveNumber);
  vcompare->add_option("--label-a", vq.label_a, "Label for the first cohort");
  vcompare->add_option("--label-b", vq.label_b, "Label for the second cohort");
  vcompare->add_option("--csv", vq.table_csv, "Write the table as CSV here");
  vcompare->add_option("--out", vq.out, "Also write the output here");
  add_common(vcompare);

  std::vector<std::string> argv_store{"vreal"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, common, out);
    if (score->parsed()) return cmd_score(sc, common, out, err);
    if (vscore->parsed()) return cmd_vrnq_score(vq, common, out);
    if (vcompare->parsed()) return cmd_vrnq_compare(vq, common, out);
  } catch (const CommandError& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::ConfigError:
      case Errc::InvalidDomainMap:
      case Errc::InvalidArgument:
        return kConfigError;
      default:
        return kFailure;
    }
  }
  return kFailure;
}

}  // namespace vreal::cli
