#pragma once

// Least-squares fit of J(n) ~ c1 n^c2 + c0 with 0 < c2 < 1 (a concave,
// increasing curve).

#include <span>
#include <string>

namespace fivenum {

struct PowerSample {
  double n;
  double J;
};

struct PowerLawFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c0 = 0.0;
  double residual_norm = 0.0;  // Euclidean norm of J_k - fitted(n_k)
  int iterations = 0;
  // True when the power term could not be fitted inside the constraint and
  // the result is the constant-only fit c0 = mean(J), c1 = c2 = 0.
  bool constant_only = false;
  std::string warning;
};

/// Log-log regression (c0 = 0) for the starting point, then damped
/// Gauss-Newton on all three coefficients. Throws FitError for fewer than
/// three distinct n, non-positive n or non-finite values.
PowerLawFit fit_power_law(std::span<const PowerSample> samples);

}  // namespace fivenum
