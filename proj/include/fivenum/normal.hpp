#pragma once

// Standard normal distribution: CDF, density, quantile and log tail.

namespace fivenum {

class Probability {
 public:
  // Throws DomainError unless 0 <= value <= 1.
  explicit Probability(double value);

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

/// Phi(x). Throws DomainError for non-finite x.
double std_normal_cdf(double x);

/// 1 - Phi(x), computed without cancellation.
double std_normal_upper_tail(double x);

/// phi(x). Throws DomainError for non-finite x.
double std_normal_pdf(double x);

/// Phi^{-1}(p) for 0 < p < 1: AS241 followed by one Halley step.
/// Throws DomainError for p outside the open unit interval.
double std_normal_quantile(double p);

/// Wichura's AS241 (PPND16) without refinement. This is the scalar reference
/// for the vectorised inverse-CDF sampler; callers guarantee 0 < p < 1.
double as241_quantile(double p) noexcept;

/// ln(1 - Phi(x)). Finite for every finite x; stays accurate where 1 - Phi(x)
/// underflows in direct arithmetic.
double log_tail(double x);

/// ln Phi(x) = log_tail(-x).
double log_cdf(double x);

}  // namespace fivenum
