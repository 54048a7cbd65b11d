#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace vreal::detail {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace gk15 {

inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace gk15

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15_segment(F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double kronrod = fc * gk15::kKronrodWeights[7];
  double gauss = fc * gk15::kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * gk15::kNodes[j];
    const double sum = f(mid - dx) + f(mid + dx);
    kronrod += gk15::kKronrodWeights[j] * sum;
    if (j % 2 == 1) gauss += gk15::kGaussWeights[j / 2] * sum;
  }
  return Segment{a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

/// Bisects the segment with the largest error estimate until the summed
/// estimate is within max(abs_tol, rel_tol * |value|) or max_intervals is hit.
template <class F>
QuadResult integrate_adaptive(F f, double a, double b, double rel_tol, double abs_tol,
                              int max_intervals = 4000) {
  std::vector<Segment> heap{gk15_segment(f, a, b)};
  auto tolerance = [&](double value) { return std::max(abs_tol, rel_tol * std::fabs(value)); };
  // Exact totals over the current segments; the running totals below drift.
  auto resum = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    for (const Segment& s : heap) {
      value += s.value;
      error += s.error;
    }
  };
  double value = heap.front().value;
  double error = heap.front().error;
  int count = 1;
  while (count < max_intervals) {
    if (error <= tolerance(value)) {
      resum(value, error);
      if (error <= tolerance(value)) break;
    }
    std::pop_heap(heap.begin(), heap.end());
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gk15_segment(f, worst.a, mid);
    const Segment right = gk15_segment(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end());
    ++count;
  }
  resum(value, error);
  return QuadResult{value, error, count, error <= tolerance(value)};
}

}  // namespace vreal::detail
