#pragma once

// VRNQ responses, domain scoring, cohort median/MAD summaries and cut-off
// gates.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vreal {

enum class VrnqDomain { UserExperience, GameMechanics, InGameAssistance, Vrise };
inline constexpr int kVrnqDomainCount = 4;
inline constexpr int kVrnqItemCount = 20;
inline constexpr int kVrnqItemsPerDomain = 5;
inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 7;

std::string_view to_string(VrnqDomain d) noexcept;

struct VrnqResponseSet {
  std::string participant_id;
  std::vector<int> items;  // q1..q20
  /// Free-text comments, kept verbatim and never scored.
  std::optional<std::string> feedback;

  /// Throws WrongItemCount or ItemOutOfRange.
  void validate() const;
  bool operator==(const VrnqResponseSet&) const = default;
};

/// Which questionnaire items (1-based) belong to each domain.
struct DomainMap {
  std::array<std::array<int, kVrnqItemsPerDomain>, kVrnqDomainCount> items{};

  /// Throws InvalidDomainMap unless the groups partition 1..20.
  void validate() const;

  /// {"UserExperience": [..5 item numbers..], "GameMechanics": [...],
  ///  "InGameAssistance": [...], "VRISE": [...]}
  static DomainMap from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  bool operator==(const DomainMap&) const = default;
};

struct VrnqScores {
  std::array<int, kVrnqDomainCount> sub{};
  int total = 0;
  bool operator==(const VrnqScores&) const = default;
};

VrnqScores score_vrnq(const VrnqResponseSet& r, const DomainMap& map);

/// Sample median; even n takes the midpoint of the two central values.
double median(std::vector<double> xs);
/// Median of absolute deviations from the median.
double median_absolute_deviation(const std::vector<double>& xs);

struct ScoreSummary {
  double median = 0.0;
  double mad = 0.0;
  int n = 0;
  bool operator==(const ScoreSummary&) const = default;
};

struct CohortAggregate {
  std::array<ScoreSummary, kVrnqDomainCount> sub{};
  ScoreSummary total;
  bool operator==(const CohortAggregate&) const = default;
};

/// Throws EmptyCohort.
CohortAggregate aggregate_scores(const std::vector<VrnqScores>& scores);
CohortAggregate aggregate_cohort(const std::vector<VrnqResponseSet>& sets, const DomainMap& map);

enum class CutoffTier { Minimum, Parsimonious };
std::string_view to_string(CutoffTier t) noexcept;

struct CutoffThresholds {
  double sub_score;
  double total;
};
CutoffThresholds cutoff_thresholds(CutoffTier tier) noexcept;

struct CutoffVerdict {
  CutoffTier tier = CutoffTier::Parsimonious;
  /// Four domains in VrnqDomain order, then the total.
  std::array<bool, kVrnqDomainCount + 1> pass{};
  bool overall = false;
  bool operator==(const CutoffVerdict&) const = default;
};

/// A score passes when its median reaches the threshold (inclusive).
CutoffVerdict check_cutoffs(const CohortAggregate& agg, CutoffTier tier);

/// Parses `participant_id,q1,...,q20[,feedback]` with RFC 4180 quoting.
/// Structural problems throw ParseError (1-based line); item values throw
/// WrongItemCount / ItemOutOfRange naming the line.
std::vector<VrnqResponseSet> parse_vrnq_csv(std::string_view text);

}  // namespace vreal
