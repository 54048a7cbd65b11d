#include "vreal/vrnq.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "vreal/error.hpp"

namespace vreal {

std::string_view to_string(VrnqDomain d) noexcept {
  switch (d) {
    case VrnqDomain::UserExperience: return "UserExperience";
    case VrnqDomain::GameMechanics: return "GameMechanics";
    case VrnqDomain::InGameAssistance: return "InGameAssistance";
    case VrnqDomain::Vrise: return "VRISE";
  }
  return "?";
}

std::string_view to_string(CutoffTier t) noexcept {
  return t == CutoffTier::Minimum ? "minimum" : "parsimonious";
}

void VrnqResponseSet::validate() const {
  if (items.size() != static_cast<std::size_t>(kVrnqItemCount)) {
    throw Error(Errc::WrongItemCount, "participant " + participant_id + " has " +
                                          std::to_string(items.size()) + " items, expected 20");
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] < kLikertMin || items[i] > kLikertMax) {
      throw Error(Errc::ItemOutOfRange, "participant " + participant_id + " q" +
                                            std::to_string(i + 1) + " = " +
                                            std::to_string(items[i]) + " outside 1..7");
    }
  }
}

void DomainMap::validate() const {
  std::array<bool, kVrnqItemCount + 1> used{};
  for (const auto& group : items) {
    for (int q : group) {
      if (q < 1 || q > kVrnqItemCount) {
        throw Error(Errc::InvalidDomainMap, "item " + std::to_string(q) + " outside 1..20");
      }
      if (used[static_cast<std::size_t>(q)]) {
        throw Error(Errc::InvalidDomainMap, "item " + std::to_string(q) + " assigned twice");
      }
      used[static_cast<std::size_t>(q)] = true;
    }
  }
}

DomainMap DomainMap::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.size() != kVrnqDomainCount) {
    throw Error(Errc::InvalidDomainMap, "expected an object with exactly the four domains");
  }
  DomainMap m;
  for (int d = 0; d < kVrnqDomainCount; ++d) {
    const std::string key(to_string(static_cast<VrnqDomain>(d)));
    auto it = doc.find(key);
    if (it == doc.end()) throw Error(Errc::InvalidDomainMap, "missing domain " + key);
    if (!it->is_array() || it->size() != kVrnqItemsPerDomain) {
      throw Error(Errc::InvalidDomainMap, key + " must list exactly 5 items");
    }
    for (std::size_t i = 0; i < kVrnqItemsPerDomain; ++i) {
      if (!(*it)[i].is_number_integer()) throw Error(Errc::InvalidDomainMap, key + " items must be integers");
      m.items[static_cast<std::size_t>(d)][i] = (*it)[i].get<int>();
    }
  }
  m.validate();
  return m;
}

nlohmann::json DomainMap::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (int d = 0; d < kVrnqDomainCount; ++d) {
    j[std::string(to_string(static_cast<VrnqDomain>(d)))] = items[static_cast<std::size_t>(d)];
  }
  return j;
}

VrnqScores score_vrnq(const VrnqResponseSet& r, const DomainMap& map) {
  r.validate();
  map.validate();
  VrnqScores s;
  for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
    for (int q : map.items[d]) s.sub[d] += r.items[static_cast<std::size_t>(q - 1)];
    s.total += s.sub[d];
  }
  return s;
}

double median(std::vector<double> xs) {
  if (xs.empty()) throw Error(Errc::EmptyCohort, "median of an empty sample");
  const std::size_t n = xs.size();
  const auto mid = xs.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(xs.begin(), mid);
  return lower + (upper - lower) / 2.0;
}

double median_absolute_deviation(const std::vector<double>& xs) {
  const double m = median(xs);
  std::vector<double> dev;
  dev.reserve(xs.size());
  for (double x : xs) dev.push_back(std::fabs(x - m));
  return median(std::move(dev));
}

namespace {

ScoreSummary summarize(const std::vector<double>& xs) {
  return ScoreSummary{median(xs), median_absolute_deviation(xs), static_cast<int>(xs.size())};
}

}  // namespace

CohortAggregate aggregate_scores(const std::vector<VrnqScores>& scores) {
  if (scores.empty()) throw Error(Errc::EmptyCohort, "cohort has no respondents");
  CohortAggregate agg;
  std::vector<double> xs(scores.size());
  for (std::size_t d = 0; d < kVrnqDomainCount; ++d) {
    for (std::size_t i = 0; i < scores.size(); ++i) xs[i] = scores[i].sub[d];
    agg.sub[d] = summarize(xs);
  }
  for (std::size_t i = 0; i < scores.size(); ++i) xs[i] = scores[i].total;
  agg.total = summarize(xs);
  return agg;
}

CohortAggregate aggregate_cohort(const std::vector<VrnqResponseSet>& sets, const DomainMap& map) {
  std::vector<VrnqScores> scores;
  scores.reserve(sets.size());
  for (const auto& r : sets) scores.push_back(score_vrnq(r, map));
  return aggregate_scores(scores);
}

CutoffThresholds cutoff_thresholds(CutoffTier tier) noexcept {
  return tier == CutoffTier::Minimum ? CutoffThresholds{25.0, 100.0} : CutoffThresholds{30.0, 120.0};
}

CutoffVerdict check_cutoffs(const CohortAggregate& agg, CutoffTier tier) {
  const CutoffThresholds th = cutoff_thresholds(tier);
  CutoffVerdict v;
  v.tier = tier;
  for (std::size_t d = 0; d < kVrnqDomainCount; ++d) v.pass[d] = agg.sub[d].median >= th.sub_score;
  v.pass[kVrnqDomainCount] = agg.total.median >= th.total;
  v.overall = std::all_of(v.pass.begin(), v.pass.end(), [](bool p) { return p; });
  return v;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<Record> split_records(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::vector<Record> out;
  std::size_t line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError(line, i - line_start, what);
  };

  while (i < text.size()) {
    Record rec;
    rec.line = line;
    for (;;) {
      std::string field;
      if (i < text.size() && text[i] == '"') {
        ++i;
        for (;;) {
          if (i >= text.size()) fail("unterminated quoted field");
          const char c = text[i];
          if (c == '"') {
            if (i + 1 < text.size() && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (c == '\n') {
            ++line;
            line_start = i + 1;
          }
          field += c;
          ++i;
        }
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          fail("unexpected character after closing quote");
        }
      } else {
        while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          if (text[i] == '"') fail("quote inside unquoted field");
          field += text[i++];
        }
      }
      rec.fields.push_back(std::move(field));
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      break;
    }
    if (i < text.size() && text[i] == '\r') {
      if (i + 1 >= text.size() || text[i + 1] != '\n') fail("bare carriage return");
      ++i;
    }
    if (i < text.size()) {
      ++i;  // '\n'
      ++line;
      line_start = i;
    }
    if (rec.fields.size() == 1 && rec.fields[0].empty()) {
      throw ParseError(rec.line, 0, "empty line");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<VrnqResponseSet> parse_vrnq_csv(std::string_view text) {
  const std::vector<Record> records = split_records(text);
  if (records.empty()) throw ParseError(1, 0, "missing header");

  const auto& header = records.front().fields;
  std::vector<std::string> expected{"participant_id"};
  for (int q = 1; q <= kVrnqItemCount; ++q) expected.push_back("q" + std::to_string(q));
  const bool has_feedback = header.size() == expected.size() + 1 && header.back() == "feedback";
  if (!std::equal(expected.begin(), expected.end(), header.begin(),
                  header.begin() + static_cast<std::ptrdiff_t>(std::min(header.size(), expected.size()))) ||
      header.size() < expected.size() || (header.size() > expected.size() && !has_feedback)) {
    throw ParseError(1, 0, "header must be participant_id,q1,...,q20 with an optional feedback column");
  }

  std::vector<VrnqResponseSet> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& rec = records[r];
    const std::string where = "line " + std::to_string(rec.line);
    if (rec.fields.size() != header.size()) {
      throw Error(Errc::WrongItemCount, where + ": " + std::to_string(rec.fields.size()) +
                                            " fields, header has " + std::to_string(header.size()));
    }
    VrnqResponseSet set;
    set.participant_id = rec.fields[0];
    if (set.participant_id.empty()) throw ParseError(rec.line, 0, "empty participant_id");
    for (int q = 1; q <= kVrnqItemCount; ++q) {
      const std::string& f = rec.fields[static_cast<std::size_t>(q)];
      int value = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(rec.line, 0, "q" + std::to_string(q) + " is not an integer: \"" + f + "\"");
      }
      if (value < kLikertMin || value > kLikertMax) {
        throw Error(Errc::ItemOutOfRange, where + ": participant " + set.participant_id + " q" +
                                              std::to_string(q) + " = " + std::to_string(value) +
                                              " outside 1..7");
      }
      set.items.push_back(value);
    }
    if (has_feedback && !rec.fields.back().empty()) set.feedback = rec.fields.back();
    out.push_back(std::move(set));
  }
  return out;
}

}  // namespace vreal
