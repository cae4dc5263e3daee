#pragma once

// Data-parallel inner loops of the simulator, with a scalar reference and an
// AVX2 variant chosen at runtime. Every variant must produce bitwise identical
// output to the scalar reference: elementwise kernels perform the same IEEE
// operations in the same order, and reductions use a fixed 4-lane
// accumulation order (lane k sums elements i = k mod 4 of the leading
// 4*floor(count/4) block, lanes combine as (l0 + l1) + (l2 + l3), the tail is
// then added in index order).

#include <cstddef>
#include <span>
#include <string_view>

namespace fivenum::kernels {

enum class Isa { scalar, avx2 };

// Denominators of the four S3 SD estimators evaluated in bulk:
// range (b-a)/xi, iqr (q3-q1)/eta, their average, and the shortcut
// (b-a)/theta1 + (q3-q1)/theta2.
struct SdCoefficients {
  double xi;
  double eta;
  double theta1;
  double theta2;
};

struct KernelTable {
  Isa isa;
  std::string_view name;
  // z[i] = AS241 quantile of u[i]; u[i] must lie in (0, 1). z may equal u.
  void (*normal_quantiles)(const double* u, double* z, std::size_t count);
  void (*sd_estimates)(const double* a, const double* q1, const double* q3, const double* b,
                       std::size_t count, const SdCoefficients& c, double* range, double* iqr,
                       double* average, double* optimal);
  // sum (x[i] - target)^2
  double (*squared_error_sum)(const double* x, std::size_t count, double target);
  // sum x[i]
  double (*sum)(const double* x, std::size_t count);
};

const KernelTable& scalar_table() noexcept;

/// AVX2 table when the binary carries it and the CPU supports it.
const KernelTable* avx2_table() noexcept;

/// Table used by the library. Chosen once: FIVENUM_KERNELS=scalar|avx2|auto
/// (default auto picks the widest supported ISA).
const KernelTable& active();

/// Sample SD with divisor n-1 built from the table's reductions
/// (two-pass: mean, then centred squares). NaN for fewer than two values.
double sample_sd(const KernelTable& k, std::span<const double> x);

inline void normal_quantiles(std::span<const double> u, std::span<double> z) {
  active().normal_quantiles(u.data(), z.data(), u.size());
}

}  // namespace fivenum::kernels
