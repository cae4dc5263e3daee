#include "fivenum/normal.hpp"

#include <cmath>
#include <string>

#include "fivenum/error.hpp"

namespace fivenum {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362105;
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;

void require_finite(double x, const char* fn) {
  if (!std::isfinite(x)) throw DomainError(std::string(fn) + ": non-finite argument");
}

// Upper tail for x > 30 from the asymptotic series of Mills' ratio; the
// truncation error after the x^-10 term is below 1e-14 relative there.
double log_tail_asymptotic(double x) {
  const double r = 1.0 / (x * x);
  const double series =
      r * (-1.0 + r * (3.0 + r * (-15.0 + r * (105.0 + r * (-945.0 + r * 10395.0)))));
  return -0.5 * x * x - kLogSqrt2Pi - std::log(x) + std::log1p(series);
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw DomainError("probability outside [0, 1]");
}

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_upper_tail(double x) {
  require_finite(x, "std_normal_upper_tail");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_normal_pdf(double x) {
  require_finite(x, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double as241_quantile(double p) noexcept {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1)");
  // Work in the lower half so the residual Phi(x) - p keeps relative accuracy;
  // 1 - p is exact for p >= 0.5.
  const bool upper = p > 0.5;
  const double lower_p = upper ? 1.0 - p : p;
  double x = as241_quantile(lower_p);
  const double density = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  if (density > 0.0 && std::isnormal(density)) {
    const double residual = 0.5 * std::erfc(-x * kInvSqrt2) - lower_p;
    const double u = residual / density;
    x -= u / (1.0 + 0.5 * x * u);
  }
  return upper ? -x : x;
}

double log_tail(double x) {
  require_finite(x, "log_tail");
  if (x < 0.0) return std::log1p(-0.5 * std::erfc(-x * kInvSqrt2));
  if (x > 30.0) return log_tail_asymptotic(x);
  return std::log(0.5 * std::erfc(x * kInvSqrt2));
}

double log_cdf(double x) { return log_tail(-x); }

}  // namespace fivenum
