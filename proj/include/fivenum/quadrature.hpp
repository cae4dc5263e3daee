#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration on a finite interval.
// Error estimation follows QUADPACK's QK15 heuristic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace fivenum {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t initial_intervals = 1;
  std::size_t max_intervals = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  double abs_sum = std::fabs(kronrod);
  std::array<double, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(centre - dx);
    f2[j] = f(centre + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::fabs(fc - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

  const double result = kronrod * half;
  asc *= std::fabs(half);
  abs_sum *= std::fabs(half);
  double err = std::fabs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * abs_sum, err);
  return {a, b, result, err};
}

}  // namespace detail

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadOptions& opt = {}) {
  using detail::Segment;
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  const std::size_t pieces = std::max<std::size_t>(1, opt.initial_intervals);
  std::vector<Segment> heap;
  heap.reserve(std::max(opt.max_intervals, pieces) + 1);
  auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };

  double total = 0.0, total_err = 0.0;
  const double width = (b - a) / static_cast<double>(pieces);
  for (std::size_t k = 0; k < pieces; ++k) {
    const double lo = a + width * static_cast<double>(k);
    const double hi = k + 1 == pieces ? b : lo + width;
    heap.push_back(detail::gauss_kronrod_15(f, lo, hi));
    total += heap.back().value;
    total_err += heap.back().error;
  }
  std::make_heap(heap.begin(), heap.end(), by_error);
  out.evaluations = 15 * pieces;

  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)); };
  while (total_err > target() && heap.size() < opt.max_intervals) {
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval cannot be split further in double precision.
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    const Segment left = detail::gauss_kronrod_15(f, worst.a, mid);
    const Segment right = detail::gauss_kronrod_15(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
  }

  // Re-sum from the segments to shed drift from the running updates.
  double sum = 0.0, comp = 0.0, err = 0.0;
  for (const auto& s : heap) {
    const double y = s.value - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    err += s.error;
  }
  out.value = sum;
  out.abs_error = err;
  out.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(sum));
  return out;
}

}  // namespace fivenum
