#pragma once

// Paired-sample t test and the directional JZS-style Bayes factor with a
// Cauchy prior on the standardized effect size.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vreal {

/// ALess: H1 says a < b (mean of b - a is positive).
enum class Direction { ALess, AGreater, TwoSided };
std::string_view to_string(Direction d) noexcept;
/// "less", "greater", "two-sided"; throws InvalidArgument.
Direction direction_from_string(std::string_view s);

inline constexpr double kDefaultPriorScale = 0.707;

struct PairedSample {
  std::vector<double> a;
  std::vector<double> b;

  /// Throws LengthMismatch, or InvalidArgument when n < 2 or a value is not finite.
  void validate() const;
};

struct TTest {
  double t = 0.0;
  int df = 0;
  double p = 0.0;  // tail matching the direction; both tails for TwoSided
};

/// Throws DegenerateSample when the differences have zero variance.
TTest paired_t(const PairedSample& s, Direction direction);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
/// P(T >= t) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);
double student_t_cdf(double t, double df);

struct BayesFactor {
  double bf10 = 0.0;
  /// Estimated relative error of bf10 from the quadrature.
  double rel_error = 0.0;
};

/// Integrates the noncentral-t likelihood ratio against a Cauchy(0, scale)
/// prior restricted to the direction's half-line (both halves, averaged, for
/// TwoSided). Throws IntegrationFailure if the requested 1e-6 relative error
/// is not reached, InvalidArgument for n < 2 or a non-positive scale.
BayesFactor bayes_factor(double t, int n, double prior_scale, Direction direction);
double bf10_directional(double t, int n, double prior_scale = kDefaultPriorScale,
                        Direction direction = Direction::ALess);

/// f(t | delta) / f(t | 0) for the paired design with n pairs.
double likelihood_ratio(double t, int n, double delta);

// ---------------------------------------------------------------------------
// Evidence bands and table formatting

enum class EvidenceBand { None, Anecdotal, Moderate, Strong, VeryStrong, Extreme };
std::string_view to_string(EvidenceBand b) noexcept;

/// <=1 None, (1,3) Anecdotal, [3,10) Moderate, [10,30) Strong,
/// [30,100) VeryStrong, >=100 Extreme. Throws InvalidArgument unless bf10 > 0.
EvidenceBand classify_evidence(double bf10);

/// "*" above 10, "**" above 30, "***" above 100 (strict).
std::string evidence_stars(double bf10);

/// Three decimals followed by the stars, e.g. "101.651***".
std::string format_bf_cell(double bf10);

struct BfCell {
  double value = 0.0;
  int stars = 0;
};
/// Inverse of format_bf_cell; throws InvalidArgument on malformed text.
BfCell parse_bf_cell(std::string_view text);

/// "p < .001" below one in a thousand, else "p = .098" style.
std::string format_p_value(double p);

struct BayesComparison {
  std::string label_a;
  std::string label_b;
  Direction direction = Direction::ALess;
  double prior_scale = kDefaultPriorScale;
  double t = 0.0;
  int df = 0;
  double p = 0.0;
  double bf10 = 0.0;
  double bf10_rel_error = 0.0;
  EvidenceBand band = EvidenceBand::None;
  /// Set instead of the numbers when the differences have zero variance.
  std::optional<std::string> degenerate;

  std::string hypothesis() const;
};

/// Never throws DegenerateSample; that case is recorded in `degenerate`.
BayesComparison compare_paired(std::string label_a, std::string label_b, const PairedSample& s,
                               Direction direction = Direction::ALess,
                               double prior_scale = kDefaultPriorScale);

std::string comparison_table_text(const std::vector<BayesComparison>& rows);
std::string comparison_table_csv(const std::vector<BayesComparison>& rows);

}  // namespace vreal
