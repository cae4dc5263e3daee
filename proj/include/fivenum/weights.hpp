#pragma once

// Optimal weight between the range and quartile SD estimators,
// w_opt(n) = 1 / (1 + J(n)), its closed-form approximation and the shortcut
// denominators theta1, theta2.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fivenum/order_stats.hpp"

namespace fivenum {

/// 0.07 n^0.6.
double approx_J(double n);

/// 1 / (1 + 0.07 n^0.6).
double approx_weight(double n);

struct ShortcutCoefficients {
  double theta1;  // (2 + 0.14 n^0.6) Phi^{-1}((n - 0.375) / (n + 0.25))
  double theta2;  // (2 + 2 / (0.07 n^0.6)) Phi^{-1}((0.75 n - 0.125) / (n + 0.25))
};

/// Requires n >= 2.
ShortcutCoefficients shortcut_coefficients(std::int64_t n);

/// J(n) from a moment block:
///   [Var(R)/xi^2 - Cov(R, I)/(xi eta)] / [Var(I)/eta^2 - Cov(R, I)/(xi eta)]
/// with R = Z_(n) - Z_(1) and I = Z_(3Q+1) - Z_(Q+1).
double exact_J(const OrderStatMoments& m);

/// J(n) from quadrature moments (n = 4Q+1). When the quadrature fails to
/// converge the Monte Carlo oracle (1e6 replications, fixed seed) is used.
double exact_J(std::int64_t n, const MomentOptions& opt = {});

/// 1 / (1 + exact_J(n)).
double exact_optimal_weight(std::int64_t n, const MomentOptions& opt = {});

struct WeightTableRow {
  std::int64_t q;
  std::int64_t n;  // 4Q+1
  double theta1;
  double theta2;
  std::optional<double> w_exact;  // present when requested
  double w_approx;
  std::optional<double> J;  // exact J, present with w_exact
};

struct TableOptions {
  bool exact = false;  // also compute exact weights (quadrature)
  MomentOptions moments{};
};

std::vector<WeightTableRow> generate_table(std::int64_t q_max, const TableOptions& opt = {});

/// Rounds half away from zero to `decimals` places, judged on the decimal
/// expansion of x (so 2.0245 -> 2.025 even though its binary value is below).
double round_half_away(double x, int decimals);

/// CSV with header `Q,n,theta1,theta2,w_exact,w_approx`. Thetas are printed
/// to 3 decimals (half away from zero), weights to 6 significant digits;
/// w_exact is blank when absent.
std::string table_csv(std::span<const WeightTableRow> rows);

}  // namespace fivenum
