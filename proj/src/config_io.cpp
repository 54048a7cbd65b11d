#include "vreal/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "vreal/error.hpp"

namespace vreal {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(Errc::ConfigError, where + ": " + what);
}

/// Reads fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& doc, std::string where) : doc_(doc), where_(std::move(where)) {
    if (!doc_.is_object()) config_error(where_, "expected an object");
  }

  ~ObjectReader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : doc_.items()) {
      if (!seen_.count(key)) config_error(where_, "unknown key \"" + key + "\"");
    }
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = doc_.find(key);
    return it == doc_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) config_error(path(key), "expected a number");
      out = v->get<double>();
    }
  }

  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) out = as_int(*v, path(key));
  }

  template <std::size_t N>
  void numbers(const std::string& key, std::array<double, N>& out) {
    if (const json* v = find(key)) {
      check_array(*v, N, path(key));
      for (std::size_t i = 0; i < N; ++i) {
        if (!(*v)[i].is_number()) config_error(path(key), "expected numbers");
        out[i] = (*v)[i].get<double>();
      }
    }
  }

  template <std::size_t N>
  void integers(const std::string& key, std::array<int, N>& out) {
    if (const json* v = find(key)) {
      check_array(*v, N, path(key));
      for (std::size_t i = 0; i < N; ++i) out[i] = as_int((*v)[i], path(key));
    }
  }

  void strings(const std::string& key, std::vector<std::string>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) config_error(path(key), "expected an array of strings");
      out.clear();
      for (const auto& s : *v) {
        if (!s.is_string()) config_error(path(key), "expected an array of strings");
        out.push_back(s.get<std::string>());
      }
    }
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  static int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) config_error(where, "expected an integer");
    return v.get<int>();
  }

  static void check_array(const json& v, std::size_t n, const std::string& where) {
    if (!v.is_array() || v.size() != n) {
      config_error(where, "expected an array of " + std::to_string(n));
    }
  }

 private:
  const json& doc_;
  std::string where_;
  std::set<std::string> seen_;
};

json counts_json(const StimulusCounts& c) {
  return {{"targets", c.targets}, {"distractor_a", c.distractor_a}, {"distractor_b", c.distractor_b}};
}

void read_counts(ObjectReader& parent, const std::string& key, StimulusCounts& c) {
  if (const json* v = parent.find(key)) {
    ObjectReader r(*v, parent.path(key));
    r.integer("targets", c.targets);
    r.integer("distractor_a", c.distractor_a);
    r.integer("distractor_b", c.distractor_b);
  }
}

}  // namespace

json to_json(const ScoringConfig& c) {
  json bands = json::object();
  for (int b = 0; b < kCookingBandCount; ++b) {
    bands[std::string(to_string(static_cast<CookingBand>(b)))] = c.cooking_band_points[static_cast<std::size_t>(b)];
  }
  return json{
      {"cooking_band_points", bands},
      {"pm_positive", c.pm_positive},
      {"pm_negative", c.pm_negative},
      {"planning_norms", {{"mean_s", c.planning_norms.mean_s}, {"sd_s", c.planning_norms.sd_s}}},
      {"planning_steps", {{"inner_z", c.planning_steps.inner_z}, {"outer_z", c.planning_steps.outer_z}}},
      {"visual", counts_json(c.visual)},
      {"auditory", counts_json(c.auditory)},
      {"recognition",
       {{"targets", c.recognition.targets},
        {"qualitative_distractors", c.recognition.qualitative_distractors},
        {"quantitative_distractors", c.recognition.quantitative_distractors},
        {"false_items", c.recognition.false_items}}},
      {"session_duration_s", c.session_duration_s},
  };
}

ScoringConfig scoring_config_from_json(const json& doc) {
  ScoringConfig c;
  {
    ObjectReader r(doc, "config");
    if (const json* bands = r.find("cooking_band_points")) {
      ObjectReader br(*bands, r.path("cooking_band_points"));
      for (int b = 0; b < kCookingBandCount; ++b) {
        br.integer(std::string(to_string(static_cast<CookingBand>(b))),
                   c.cooking_band_points[static_cast<std::size_t>(b)]);
      }
    }
    if (const json* m = r.find("pm_positive")) {
      ObjectReader::check_array(*m, 3, r.path("pm_positive"));
      for (std::size_t i = 0; i < 3; ++i) {
        ObjectReader::check_array((*m)[i], 4, r.path("pm_positive"));
        for (std::size_t j = 0; j < 4; ++j) {
          c.pm_positive[i][j] = ObjectReader::as_int((*m)[i][j], r.path("pm_positive"));
        }
      }
    }
    r.integers("pm_negative", c.pm_negative);
    if (const json* v = r.find("planning_norms")) {
      ObjectReader nr(*v, r.path("planning_norms"));
      nr.number("mean_s", c.planning_norms.mean_s);
      nr.number("sd_s", c.planning_norms.sd_s);
    }
    if (const json* v = r.find("planning_steps")) {
      ObjectReader sr(*v, r.path("planning_steps"));
      sr.number("inner_z", c.planning_steps.inner_z);
      sr.number("outer_z", c.planning_steps.outer_z);
    }
    read_counts(r, "visual", c.visual);
    read_counts(r, "auditory", c.auditory);
    if (const json* v = r.find("recognition")) {
      ObjectReader rr(*v, r.path("recognition"));
      rr.strings("targets", c.recognition.targets);
      rr.strings("qualitative_distractors", c.recognition.qualitative_distractors);
      rr.strings("quantitative_distractors", c.recognition.quantitative_distractors);
      rr.strings("false_items", c.recognition.false_items);
    }
    r.number("session_duration_s", c.session_duration_s);
  }
  c.validate();
  return c;
}

json to_json(const ParticipantProfile& p) {
  return json{
      {"pm_hit_prob", p.pm_hit_prob},
      {"prompt_yield_probs", p.prompt_yield_probs},
      {"false_prompt_yes_prob", p.false_prompt_yes_prob},
      {"item_choice_weights", p.item_choice_weights},
      {"recognition_target_prob", p.recognition_target_prob},
      {"recognition_distractor_prob", p.recognition_distractor_prob},
      {"planning_extra_units", p.planning_extra_units},
      {"cooking_timing_sd_s", p.cooking_timing_sd_s},
      {"attention_hit_prob", p.attention_hit_prob},
      {"attention_false_alarm_prob", p.attention_false_alarm_prob},
      {"wrong_controller_prob", p.wrong_controller_prob},
      {"notes_use_prob", p.notes_use_prob},
      {"latency_mean_ms", p.latency_mean_ms},
      {"latency_sd_ms", p.latency_sd_ms},
  };
}

ParticipantProfile profile_from_json(const json& doc) {
  ParticipantProfile p;
  {
    ObjectReader r(doc, "profile");
    r.numbers("pm_hit_prob", p.pm_hit_prob);
    r.numbers("prompt_yield_probs", p.prompt_yield_probs);
    r.number("false_prompt_yes_prob", p.false_prompt_yes_prob);
    r.numbers("item_choice_weights", p.item_choice_weights);
    r.number("recognition_target_prob", p.recognition_target_prob);
    r.number("recognition_distractor_prob", p.recognition_distractor_prob);
    r.number("planning_extra_units", p.planning_extra_units);
    r.number("cooking_timing_sd_s", p.cooking_timing_sd_s);
    r.number("attention_hit_prob", p.attention_hit_prob);
    r.number("attention_false_alarm_prob", p.attention_false_alarm_prob);
    r.number("wrong_controller_prob", p.wrong_controller_prob);
    r.number("notes_use_prob", p.notes_use_prob);
    r.number("latency_mean_ms", p.latency_mean_ms);
    r.number("latency_sd_ms", p.latency_sd_ms);
  }
  p.validate();
  return p;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string config_hash(const ScoringConfig& config) { return sha256_hex(to_json(config).dump()); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("error writing " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ConfigError, path.string() + ": " + e.what());
  }
}

}  // namespace vreal
