#include "vreal/bayes.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include "quadrature.hpp"
#include "vreal/error.hpp"

namespace vreal {

std::string_view to_string(Direction d) noexcept {
  switch (d) {
    case Direction::ALess: return "less";
    case Direction::AGreater: return "greater";
    case Direction::TwoSided: return "two-sided";
  }
  return "?";
}

Direction direction_from_string(std::string_view s) {
  if (s == "less") return Direction::ALess;
  if (s == "greater") return Direction::AGreater;
  if (s == "two-sided") return Direction::TwoSided;
  throw Error(Errc::InvalidArgument, "direction must be less, greater or two-sided, got \"" +
                                         std::string(s) + "\"");
}

void PairedSample::validate() const {
  if (a.size() != b.size()) {
    throw Error(Errc::LengthMismatch, "paired samples of length " + std::to_string(a.size()) +
                                          " and " + std::to_string(b.size()));
  }
  if (a.size() < 2) throw Error(Errc::InvalidArgument, "a paired sample needs n >= 2");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw Error(Errc::InvalidArgument, "non-finite score at pair " + std::to_string(i + 1));
    }
  }
}

// ---------------------------------------------------------------------------
// Student t tail

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error(Errc::IntegrationFailure, "incomplete beta continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(Errc::InvalidArgument, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(Errc::InvalidArgument, "incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw Error(Errc::InvalidArgument, "degrees of freedom must be positive");
  if (std::isnan(t)) throw Error(Errc::InvalidArgument, "t is NaN");
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t >= 0.0 ? tail : 1.0 - tail;
}

double student_t_cdf(double t, double df) { return student_t_sf(-t, df); }

TTest paired_t(const PairedSample& s, Direction direction) {
  s.validate();
  const std::size_t n = s.a.size();
  std::vector<double> d(n);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = s.b[i] - s.a[i];
    scale = std::max({scale, std::fabs(s.a[i]), std::fabs(s.b[i])});
  }
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  double max_dev = 0.0;
  for (double x : d) {
    ss += (x - mean) * (x - mean);
    max_dev = std::max(max_dev, std::fabs(x - mean));
  }
  // Deviations at rounding level are treated as exact ties.
  if (max_dev <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    throw Error(Errc::DegenerateSample, "the paired differences have zero variance");
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  TTest r;
  r.df = static_cast<int>(n) - 1;
  r.t = mean * std::sqrt(static_cast<double>(n)) / sd;
  switch (direction) {
    case Direction::ALess: r.p = student_t_sf(r.t, r.df); break;
    case Direction::AGreater: r.p = student_t_sf(-r.t, r.df); break;
    case Direction::TwoSided: r.p = std::min(1.0, 2.0 * student_t_sf(std::fabs(r.t), r.df)); break;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Bayes factor

namespace {

constexpr double kInnerRelTol = 1e-12;
constexpr double kOuterRelTol = 1e-9;
constexpr double kRequiredRelError = 1e-6;

/// log of  integral_0^inf x^nu exp(-(x - a)^2 / 2) dx.
double log_moment_integral(double nu, double a) {
  const double root = std::sqrt(a * a + 4.0 * nu);
  const double peak = a >= 0.0 ? 0.5 * (a + root) : 2.0 * nu / (root - a);
  const double h_peak = nu * std::log(peak) - 0.5 * (peak - a) * (peak - a);
  // Log-integrand relative to the peak, arranged so no large terms cancel.
  auto h = [&](double x) {
    return nu * std::log(x / peak) - 0.5 * (x - peak) * (x + peak - 2.0 * a);
  };

  // The log-integrand is concave, so stepping out from the peak until it has
  // dropped by 800 brackets all but exp(-800) of the mass. The first step is
  // the curvature width at the peak.
  constexpr double kDrop = -800.0;
  const double width = 1.0 / std::sqrt(nu / (peak * peak) + 1.0);
  double step = width;
  while (h(peak + step) > kDrop) step *= 2.0;
  const double hi = peak + step;
  step = width;
  while (peak - step > 0.0 && h(peak - step) > kDrop) step *= 2.0;
  const double lo = std::max(0.0, peak - step);

  auto f = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(h(x));
  };
  const detail::QuadResult q = detail::integrate_adaptive(f, lo, hi, kInnerRelTol, 0.0);
  if (!q.converged || !(q.value > 0.0)) {
    throw Error(Errc::IntegrationFailure, "moment integral did not converge (a = " +
                                              std::to_string(a) + ", relative error " +
                                              std::to_string(q.abs_error / q.value) + ")");
  }
  return h_peak + std::log(q.value);
}

double log_likelihood_ratio(double t, int n, double delta) {
  const double nu = n - 1.0;
  const double mu = delta * std::sqrt(static_cast<double>(n));
  const double w = t * t + nu;
  const double a = mu * t / std::sqrt(w);
  const double log_i0 = 0.5 * (nu - 1.0) * std::numbers::ln2 + std::lgamma(0.5 * (nu + 1.0));
  return -nu * mu * mu / (2.0 * w) + log_moment_integral(nu, a) - log_i0;
}

/// Half-Cauchy on delta > 0 via delta = r tan(theta), which turns the prior
/// into the uniform density 2/pi on (0, pi/2).
BayesFactor positive_half(double t, int n, double r) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  auto log_integrand = [&](double theta) { return log_likelihood_ratio(t, n, r * std::tan(theta)); };

  double shift = -std::numeric_limits<double>::infinity();
  constexpr int kProbe = 64;
  for (int i = 1; i < kProbe; ++i) shift = std::max(shift, log_integrand(kHalfPi * i / kProbe));

  auto f = [&](double theta) {
    if (theta <= 0.0) return std::exp(-shift);
    if (theta >= kHalfPi) return 0.0;
    return std::exp(log_integrand(theta) - shift);
  };
  const detail::QuadResult q = detail::integrate_adaptive(f, 0.0, kHalfPi, kOuterRelTol, 0.0);
  const double rel = q.value > 0.0 ? q.abs_error / q.value + kInnerRelTol : 1.0;
  if (!q.converged || !(q.value > 0.0) || rel > kRequiredRelError) {
    throw Error(Errc::IntegrationFailure, "Bayes factor integral for t = " + std::to_string(t) +
                                              ", n = " + std::to_string(n) +
                                              " reached relative error " + std::to_string(rel));
  }
  return BayesFactor{std::exp(shift + std::log(q.value)) * 2.0 / std::numbers::pi, rel};
}

}  // namespace

double likelihood_ratio(double t, int n, double delta) {
  if (n < 2) throw Error(Errc::InvalidArgument, "n must be at least 2");
  return std::exp(log_likelihood_ratio(t, n, delta));
}

BayesFactor bayes_factor(double t, int n, double prior_scale, Direction direction) {
  if (n < 2) throw Error(Errc::InvalidArgument, "n must be at least 2");
  if (!(prior_scale > 0.0) || !std::isfinite(prior_scale)) {
    throw Error(Errc::InvalidArgument, "prior scale must be positive");
  }
  if (!std::isfinite(t)) throw Error(Errc::InvalidArgument, "t must be finite");
  switch (direction) {
    case Direction::ALess: return positive_half(t, n, prior_scale);
    case Direction::AGreater: return positive_half(-t, n, prior_scale);
    case Direction::TwoSided: {
      const BayesFactor up = positive_half(t, n, prior_scale);
      const BayesFactor down = positive_half(-t, n, prior_scale);
      const double bf = 0.5 * (up.bf10 + down.bf10);
      return BayesFactor{bf, (up.bf10 * up.rel_error + down.bf10 * down.rel_error) / (2.0 * bf)};
    }
  }
  throw Error(Errc::InvalidArgument, "unknown direction");
}

double bf10_directional(double t, int n, double prior_scale, Direction direction) {
  return bayes_factor(t, n, prior_scale, direction).bf10;
}

// ---------------------------------------------------------------------------
// Bands and formatting

std::string_view to_string(EvidenceBand b) noexcept {
  switch (b) {
    case EvidenceBand::None: return "None";
    case EvidenceBand::Anecdotal: return "Anecdotal";
    case EvidenceBand::Moderate: return "Moderate";
    case EvidenceBand::Strong: return "Strong";
    case EvidenceBand::VeryStrong: return "VeryStrong";
    case EvidenceBand::Extreme: return "Extreme";
  }
  return "?";
}

EvidenceBand classify_evidence(double bf10) {
  if (!(bf10 > 0.0)) throw Error(Errc::InvalidArgument, "BF10 must be positive");
  if (bf10 <= 1.0) return EvidenceBand::None;
  if (bf10 < 3.0) return EvidenceBand::Anecdotal;
  if (bf10 < 10.0) return EvidenceBand::Moderate;
  if (bf10 < 30.0) return EvidenceBand::Strong;
  if (bf10 < 100.0) return EvidenceBand::VeryStrong;
  return EvidenceBand::Extreme;
}

std::string evidence_stars(double bf10) {
  if (bf10 > 100.0) return "***";
  if (bf10 > 30.0) return "**";
  if (bf10 > 10.0) return "*";
  return "";
}

std::string format_bf_cell(double bf10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", bf10);
  return buf + evidence_stars(bf10);
}

BfCell parse_bf_cell(std::string_view text) {
  static const std::regex pattern(R"(^(\d+(?:\.\d+)?)(\*{0,3})$)");
  std::cmatch m;
  if (!std::regex_match(text.begin(), text.end(), m, pattern)) {
    throw Error(Errc::InvalidArgument, "not a BF10 cell: \"" + std::string(text) + "\"");
  }
  return BfCell{std::stod(m[1].str()), static_cast<int>(m[2].length())};
}

std::string format_p_value(double p) {
  if (p < 0.001) return "p < .001";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", p);
  std::string s = buf;
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  return "p = " + s;
}

std::string BayesComparison::hypothesis() const {
  const char* op = direction == Direction::ALess ? "<" : direction == Direction::AGreater ? ">" : "≠";
  return label_a + " " + op + " " + label_b;
}

BayesComparison compare_paired(std::string label_a, std::string label_b, const PairedSample& s,
                               Direction direction, double prior_scale) {
  BayesComparison c;
  c.label_a = std::move(label_a);
  c.label_b = std::move(label_b);
  c.direction = direction;
  c.prior_scale = prior_scale;
  try {
    const TTest tt = paired_t(s, direction);
    c.t = tt.t;
    c.df = tt.df;
    c.p = tt.p;
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateSample) throw;
    c.df = static_cast<int>(s.a.size()) - 1;
    c.degenerate = e.what();
    return c;
  }
  const BayesFactor bf = bayes_factor(c.t, c.df + 1, prior_scale, direction);
  c.bf10 = bf.bf10;
  c.bf10_rel_error = bf.rel_error;
  c.band = classify_evidence(c.bf10);
  return c;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  // Width counts code points so the UTF-8 "not equal" sign lines up.
  std::size_t cps = 0;
  for (unsigned char ch : s) cps += (ch & 0xC0) != 0x80;
  return s + std::string(width > cps ? width - cps : 0, ' ');
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string fixed(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

std::string comparison_table_text(const std::vector<BayesComparison>& rows) {
  std::vector<std::array<std::string, 4>> cells;
  cells.push_back({"Alternative Hypothesis (H1)", "p-value", "BF10", "band"});
  for (const auto& r : rows) {
    if (r.degenerate) {
      cells.push_back({r.hypothesis(), "-", "-", "DegenerateSample"});
    } else {
      cells.push_back({r.hypothesis(), format_p_value(r.p), format_bf_cell(r.bf10),
                       std::string(to_string(r.band))});
    }
  }
  std::array<std::size_t, 4> width{};
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < 4; ++i) {
      std::size_t cps = 0;
      for (unsigned char ch : row[i]) cps += (ch & 0xC0) != 0x80;
      width[i] = std::max(width[i], cps);
    }
  }
  std::ostringstream os;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t i = 0; i < 4; ++i) line += i + 1 < 4 ? pad(row[i], width[i] + 2) : row[i];
    os << line << '\n';
  }
  if (!rows.empty()) {
    os << "prior: Cauchy(0, " << fixed(rows.front().prior_scale, "%g")
       << ") on effect size; direction: " << to_string(rows.front().direction)
       << "; * BF10 > 10, ** BF10 > 30, *** BF10 > 100\n";
  }
  return os.str();
}

std::string comparison_table_csv(const std::vector<BayesComparison>& rows) {
  std::ostringstream os;
  os << "Hypothesis,p-value,BF10,band,t,df,p,bf10,bf10_rel_error,prior_scale,direction\n";
  for (const auto& r : rows) {
    os << csv_quote(r.hypothesis()) << ',';
    if (r.degenerate) {
      os << "-,-,DegenerateSample,," << r.df << ",,,,";
    } else {
      os << format_p_value(r.p) << ',' << format_bf_cell(r.bf10) << ',' << to_string(r.band) << ','
         << fixed(r.t, "%.17g") << ',' << r.df << ',' << fixed(r.p, "%.17g") << ','
         << fixed(r.bf10, "%.17g") << ',' << fixed(r.bf10_rel_error, "%.3g") << ',';
    }
    os << fixed(r.prior_scale, "%g") << ',' << to_string(r.direction) << '\n';
  }
  return os.str();
}

}  // namespace vreal
