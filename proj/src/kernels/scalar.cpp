#include "kernels_impl.hpp"

#include "fivenum/normal.hpp"

namespace fivenum::kernels::scalar {

void normal_quantiles(const double* u, double* z, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) z[i] = as241_quantile(u[i]);
}

void sd_estimates(const double* a, const double* q1, const double* q3, const double* b,
                  std::size_t count, const SdCoefficients& c, double* range, double* iqr,
                  double* average, double* optimal) {
  for (std::size_t i = 0; i < count; ++i) {
    const double spread = b[i] - a[i];
    const double inner = q3[i] - q1[i];
    const double s1 = spread / c.xi;
    const double s0 = inner / c.eta;
    range[i] = s1;
    iqr[i] = s0;
    average[i] = 0.5 * s1 + 0.5 * s0;
    optimal[i] = spread / c.theta1 + inner / c.theta2;
  }
}

double squared_error_sum(const double* x, std::size_t count, double target) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = count - count % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const double d = x[i + k] - target;
      lane[k] = lane[k] + d * d;
    }
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = body; i < count; ++i) {
    const double d = x[i] - target;
    total = total + d * d;
  }
  return total;
}

double sum(const double* x, std::size_t count) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t body = count - count % 4;
  for (std::size_t i = 0; i < body; i += 4)
    for (std::size_t k = 0; k < 4; ++k) lane[k] = lane[k] + x[i + k];
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (std::size_t i = body; i < count; ++i) total = total + x[i];
  return total;
}

}  // namespace fivenum::kernels::scalar
