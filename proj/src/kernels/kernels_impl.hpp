#pragma once

#include <cstddef>

#include "fivenum/kernels.hpp"

namespace fivenum::kernels {

namespace scalar {
void normal_quantiles(const double* u, double* z, std::size_t count);
void sd_estimates(const double* a, const double* q1, const double* q3, const double* b,
                  std::size_t count, const SdCoefficients& c, double* range, double* iqr,
                  double* average, double* optimal);
double squared_error_sum(const double* x, std::size_t count, double target);
double sum(const double* x, std::size_t count);
}  // namespace scalar

namespace avx2 {
void normal_quantiles(const double* u, double* z, std::size_t count);
void sd_estimates(const double* a, const double* q1, const double* q3, const double* b,
                  std::size_t count, const SdCoefficients& c, double* range, double* iqr,
                  double* average, double* optimal);
double squared_error_sum(const double* x, std::size_t count, double target);
double sum(const double* x, std::size_t count);
}  // namespace avx2

}  // namespace fivenum::kernels
