#include "fivenum/weights.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "fivenum/error.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/normal.hpp"

namespace fivenum {

namespace {

// Seed and size of the Monte Carlo fallback for exact_J.
constexpr std::uint64_t kFallbackSeed = 20200101;
constexpr std::int64_t kFallbackReps = 1'000'000;

}  // namespace

double approx_J(double n) { return 0.07 * std::pow(n, 0.6); }

double approx_weight(double n) { return 1.0 / (1.0 + approx_J(n)); }

ShortcutCoefficients shortcut_coefficients(std::int64_t n) {
  if (n < 2) throw DomainError("shortcut_coefficients: n must be >= 2");
  const double x = static_cast<double>(n);
  const double p = std::pow(x, 0.6);
  const double z1 = std_normal_quantile((x - 0.375) / (x + 0.25));
  const double z2 = std_normal_quantile((0.75 * x - 0.125) / (x + 0.25));
  return {(2.0 + 0.14 * p) * z1, (2.0 + 2.0 / (0.07 * p)) * z2};
}

double exact_J(const OrderStatMoments& m) {
  const double x = xi(m.n), e = eta(m.n);
  const double cross = m.cov_range_iqr() / (x * e);
  return (m.var_range() / (x * x) - cross) / (m.var_iqr() / (e * e) - cross);
}

double exact_J(std::int64_t n, const MomentOptions& opt) {
  quartile_step(n);
  try {
    return exact_J(summary_moments(n, opt));
  } catch (const NumericError&) {
    return exact_J(mc_oracle(n, kFallbackReps, kFallbackSeed));
  }
}

double exact_optimal_weight(std::int64_t n, const MomentOptions& opt) {
  return 1.0 / (1.0 + exact_J(n, opt));
}

std::vector<WeightTableRow> generate_table(std::int64_t q_max, const TableOptions& opt) {
  if (q_max < 1) throw DomainError("generate_table: Q_max must be >= 1");
  std::vector<WeightTableRow> rows;
  rows.reserve(static_cast<std::size_t>(q_max));
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const std::int64_t n = 4 * q + 1;
    const ShortcutCoefficients t = shortcut_coefficients(n);
    WeightTableRow row{q, n, t.theta1, t.theta2, std::nullopt, approx_weight(static_cast<double>(n)),
                       std::nullopt};
    if (opt.exact) {
      row.J = exact_J(n, opt.moments);
      row.w_exact = 1.0 / (1.0 + *row.J);
    }
    rows.push_back(row);
  }
  return rows;
}

double round_half_away(double x, int decimals) {
  if (!std::isfinite(x)) return x;
  // Shortest round-trip decimal form, then round its digit string.
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(x), std::chars_format::fixed);
  std::string s(buf, res.ptr);
  const auto dot = s.find('.');
  if (dot == std::string::npos || s.size() - dot - 1 <= static_cast<std::size_t>(decimals))
    return x;
  const bool up = s[dot + 1 + static_cast<std::size_t>(decimals)] >= '5';
  const double scale = std::pow(10.0, decimals);
  double mag = std::stod(s.substr(0, dot + 1 + static_cast<std::size_t>(decimals)));
  if (up) mag = (std::round(mag * scale) + 1.0) / scale;
  return std::copysign(mag, x);
}

std::string table_csv(std::span<const WeightTableRow> rows) {
  std::string out = "Q,n,theta1,theta2,w_exact,w_approx\n";
  char buf[160];
  for (const auto& r : rows) {
    char exact[40] = "";
    if (r.w_exact) std::snprintf(exact, sizeof exact, "%.6g", *r.w_exact);
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.3f,%.3f,%s,%.6g\n", static_cast<long long>(r.q),
                  static_cast<long long>(r.n), round_half_away(r.theta1, 3),
                  round_half_away(r.theta2, 3), exact, r.w_approx);
    out += buf;
  }
  return out;
}

}  // namespace fivenum
