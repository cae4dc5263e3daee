// Built with -mavx2 (no FMA: results must match the scalar reference bit for
// bit). Only intrinsics and plain loops live here.

#include <immintrin.h>

#include "fivenum/normal.hpp"
#include "kernels_impl.hpp"

namespace fivenum::kernels::avx2 {

namespace {

inline __m256d horner(__m256d r, const double* c, int degree) {
  __m256d acc = _mm256_set1_pd(c[degree]);
  for (int k = degree - 1; k >= 0; --k)
    acc = _mm256_add_pd(_mm256_mul_pd(acc, r), _mm256_set1_pd(c[k]));
  return acc;
}

// AS241 central-region coefficients, lowest order first.
constexpr double kNum[8] = {3.3871328727963666080e+0, 1.3314166789178437745e+2,
                            1.9715909503065514427e+3, 1.3731693765509461125e+4,
                            4.5921953931549871457e+4, 6.7265770927008700853e+4,
                            3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kDen[8] = {1.0,
                            4.2313330701600911252e+1,
                            6.8718700749205790830e+2,
                            5.3941960214247511077e+3,
                            2.1213794301586595867e+4,
                            3.9307895800092710610e+4,
                            2.8729085735721942674e+4,
                            5.2264952788528545610e+3};

inline double lane_sum(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

}  // namespace

void normal_quantiles(const double* u, double* z, std::size_t count) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d split = _mm256_set1_pd(0.425);
  const __m256d c1 = _mm256_set1_pd(0.180625);
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d p = _mm256_loadu_pd(u + i);
    const __m256d q = _mm256_sub_pd(p, half);
    const __m256d central = _mm256_cmp_pd(_mm256_andnot_pd(sign, q), split, _CMP_LE_OQ);
    const __m256d r = _mm256_sub_pd(c1, _mm256_mul_pd(q, q));
    const __m256d value = _mm256_div_pd(_mm256_mul_pd(q, horner(r, kNum, 7)), horner(r, kDen, 7));
    const int mask = _mm256_movemask_pd(central);
    if (mask == 0xF) {
      _mm256_storeu_pd(z + i, value);
      continue;
    }
    // Copy the inputs first: z may alias u.
    alignas(32) double in[4], out[4];
    _mm256_store_pd(in, p);
    _mm256_store_pd(out, value);
    for (int k = 0; k < 4; ++k)
      if (!(mask & (1 << k))) out[k] = as241_quantile(in[k]);
    _mm256_storeu_pd(z + i, _mm256_load_pd(out));
  }
  for (; i < count; ++i) z[i] = as241_quantile(u[i]);
}

void sd_estimates(const double* a, const double* q1, const double* q3, const double* b,
                  std::size_t count, const SdCoefficients& c, double* range, double* iqr,
                  double* average, double* optimal) {
  const __m256d xi = _mm256_set1_pd(c.xi);
  const __m256d eta = _mm256_set1_pd(c.eta);
  const __m256d t1 = _mm256_set1_pd(c.theta1);
  const __m256d t2 = _mm256_set1_pd(c.theta2);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d spread = _mm256_sub_pd(_mm256_loadu_pd(b + i), _mm256_loadu_pd(a + i));
    const __m256d inner = _mm256_sub_pd(_mm256_loadu_pd(q3 + i), _mm256_loadu_pd(q1 + i));
    const __m256d s1 = _mm256_div_pd(spread, xi);
    const __m256d s0 = _mm256_div_pd(inner, eta);
    _mm256_storeu_pd(range + i, s1);
    _mm256_storeu_pd(iqr + i, s0);
    _mm256_storeu_pd(average + i, _mm256_add_pd(_mm256_mul_pd(half, s1), _mm256_mul_pd(half, s0)));
    _mm256_storeu_pd(optimal + i, _mm256_add_pd(_mm256_div_pd(spread, t1), _mm256_div_pd(inner, t2)));
  }
  if (i < count)
    scalar::sd_estimates(a + i, q1 + i, q3 + i, b + i, count - i, c, range + i, iqr + i,
                         average + i, optimal + i);
}

double squared_error_sum(const double* x, std::size_t count, double target) {
  const __m256d t = _mm256_set1_pd(target);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = count - count % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), t);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = lane_sum(acc);
  for (std::size_t i = body; i < count; ++i) {
    const double d = x[i] - target;
    total = total + d * d;
  }
  return total;
}

double sum(const double* x, std::size_t count) {
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = count - count % 4;
  for (std::size_t i = 0; i < body; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = lane_sum(acc);
  for (std::size_t i = body; i < count; ++i) total = total + x[i];
  return total;
}

}  // namespace fivenum::kernels::avx2
