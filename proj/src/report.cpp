#include "vreal/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace vreal {

namespace {

class Lines {
 public:
  void add(const std::string& label, const std::string& value) {
    text_ += label;
    text_ += ": ";
    text_ += value;
    text_ += '\n';
  }
  void add(const std::string& label, int value) { add(label, std::to_string(value)); }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

std::string signed_int(int v) { return (v > 0 ? "+" : "") + std::to_string(v); }

std::string out_of(int v, int max) { return std::to_string(v) + "/" + std::to_string(max); }

std::string depth_text(const std::optional<int>& d) { return d ? std::to_string(*d) : "none"; }

}  // namespace

std::string format_seconds(double s) {
  if (std::fabs(s) < 0.005) s = 0.0;  // never print "-0.00"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", s);
  return buf;
}

std::string export_report(const TaskScorecard& c, const Telemetry& t) {
  Lines out;
  out.add("report_version", 1);

  std::string intents;
  for (std::size_t i = 0; i < c.pm_notes_intent.size(); ++i) {
    if (i) intents += ",";
    intents += c.pm_notes_intent[i] ? "yes" : "no";
  }
  out.add("pm_notes_intent", intents);

  out.add("immediate_recognition", out_of(c.immediate_recognition, kRecognitionMax));
  out.add("planning_units", c.planning_units);
  out.add("planning_route", out_of(c.planning.route_score, kIdealRouteUnits));
  out.add("planning_time_s", format_seconds(c.planning_time_s));
  out.add("planning_time_modifier", signed_int(c.planning.time_modifier));
  out.add("planning_total", c.planning.total);

  for (int i = 0; i < 3; ++i) {
    const auto k = static_cast<std::size_t>(i);
    std::string name(to_string(static_cast<CookingItem>(i)));
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.add("cooking_" + name,
            std::string(to_string(c.cooking.bands[k])) + " " + std::to_string(c.cooking.points[k]) +
                " (" + format_seconds(static_cast<double>(c.cooking.time_cs[k]) / 100.0) + " s)");
  }
  out.add("cooking_total", c.cooking.total);

  for (const auto& p : c.pm) {
    std::string detail = "depth " + depth_text(p.resolved_depth);
    if (p.choice) detail += ", choice " + std::string(to_string(*p.choice));
    out.add("pm_" + p.task, signed_int(p.points) + " (" + detail + ")");
  }
  out.add("pm_total", c.pm_total());

  out.add("collection", c.collection.points);
  out.add("collection_errors", c.collection.errors);

  out.add("visual_attention", c.visual_attention.points);
  for (int side = 0; side < 2; ++side) {
    const auto& s = c.visual_attention.spotted[static_cast<std::size_t>(side)];
    out.add(std::string("visual_spotted_") + (side == 0 ? "left" : "right"),
            "targets " + std::to_string(s[0]) + ", shape " + std::to_string(s[1]) + ", colour " +
                std::to_string(s[2]));
  }

  out.add("delayed_recognition", out_of(c.delayed_recognition, kRecognitionMax));

  const AuditoryScore& a = c.auditory_attention;
  out.add("auditory_attention", a.points);
  out.add("auditory_detected", "targets " + std::to_string(a.detected_by_kind[0]) + ", high " +
                                   std::to_string(a.detected_by_kind[1]) + ", low " +
                                   std::to_string(a.detected_by_kind[2]));
  out.add("auditory_detected_by_side", "left " + std::to_string(a.detected_by_side[0]) + ", right " +
                                           std::to_string(a.detected_by_side[1]));
  out.add("auditory_wrong_controller", a.wrong_controller);

  for (const auto& [scene, s] : t.tutorial_time_s) {
    out.add("tutorial_time_s." + std::to_string(scene), format_seconds(s));
  }
  for (const auto& [scene, n] : t.practice_attempts) {
    out.add("practice_attempts." + std::to_string(scene), n);
  }
  for (const auto& [scene, v] : t.notes_views) {
    out.add("notes_views." + std::to_string(scene),
            "opens " + std::to_string(v.opens) + ", open " + format_seconds(v.total_open_s) + " s");
  }
  for (const auto& [scene, s] : t.scene_time_s) {
    out.add("scene_time_s." + std::to_string(scene), format_seconds(s));
  }
  for (const auto& [task, s] : t.task_time_s) out.add("task_time_s." + task, format_seconds(s));
  for (const auto& w : t.warnings) out.add("warning", w);
  return out.take();
}

std::string scorecard_json(const TaskScorecard& c, int indent) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["pm_notes_intent"] = c.pm_notes_intent;
  j["immediate_recognition"] = c.immediate_recognition;
  j["planning"] = {{"units", c.planning_units},
                   {"time_s", c.planning_time_s},
                   {"route_score", c.planning.route_score},
                   {"time_modifier", c.planning.time_modifier},
                   {"z", c.planning.z},
                   {"total", c.planning.total}};
  ordered_json cooking = ordered_json::array();
  for (int i = 0; i < 3; ++i) {
    const auto k = static_cast<std::size_t>(i);
    cooking.push_back({{"item", std::string(to_string(static_cast<CookingItem>(i)))},
                       {"band", std::string(to_string(c.cooking.bands[k]))},
                       {"time_cs", c.cooking.time_cs[k]},
                       {"points", c.cooking.points[k]}});
  }
  j["cooking"] = {{"items", cooking}, {"total", c.cooking.total}};
  ordered_json pm = ordered_json::array();
  for (const auto& p : c.pm) {
    ordered_json row = {{"task", p.task},
                        {"scene", p.scene},
                        {"polarity", std::string(to_string(p.polarity))},
                        {"trigger", std::string(to_string(p.trigger))}};
    row["resolved_depth"] = p.resolved_depth ? ordered_json(*p.resolved_depth) : ordered_json(nullptr);
    row["choice"] = p.choice ? ordered_json(std::string(to_string(*p.choice))) : ordered_json(nullptr);
    row["points"] = p.points;
    pm.push_back(std::move(row));
  }
  j["pm"] = pm;
  j["pm_total"] = c.pm_total();
  j["collection"] = {{"points", c.collection.points}, {"errors", c.collection.errors}};
  j["visual_attention"] = {{"points", c.visual_attention.points},
                           {"spotted_left", c.visual_attention.spotted[0]},
                           {"spotted_right", c.visual_attention.spotted[1]}};
  j["delayed_recognition"] = c.delayed_recognition;
  j["auditory_attention"] = {{"points", c.auditory_attention.points},
                             {"detected_by_kind", c.auditory_attention.detected_by_kind},
                             {"detected_by_side", c.auditory_attention.detected_by_side},
                             {"wrong_controller", c.auditory_attention.wrong_controller}};
  const Telemetry& t = c.telemetry;
  ordered_json tel;
  auto keyed = [](const auto& m) {
    ordered_json o = ordered_json::object();
    for (const auto& [k, v] : m) {
      if constexpr (std::is_same_v<std::decay_t<decltype(k)>, int>) {
        o[std::to_string(k)] = v;
      } else {
        o[k] = v;
      }
    }
    return o;
  };
  tel["tutorial_time_s"] = keyed(t.tutorial_time_s);
  tel["practice_attempts"] = keyed(t.practice_attempts);
  ordered_json notes = ordered_json::object();
  for (const auto& [scene, v] : t.notes_views) {
    notes[std::to_string(scene)] = {{"opens", v.opens}, {"total_open_s", v.total_open_s}};
  }
  tel["notes_views"] = notes;
  tel["scene_time_s"] = keyed(t.scene_time_s);
  tel["task_time_s"] = keyed(t.task_time_s);
  tel["warnings"] = t.warnings;
  j["telemetry"] = tel;
  return j.dump(indent);
}

}  // namespace vreal
