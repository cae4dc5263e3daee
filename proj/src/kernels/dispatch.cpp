#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace fivenum::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, "scalar", &scalar::normal_quantiles,
                              &scalar::sd_estimates, &scalar::squared_error_sum, &scalar::sum};

#if defined(FIVENUM_HAVE_AVX2_TU)
constexpr KernelTable kAvx2{Isa::avx2, "avx2", &avx2::normal_quantiles, &avx2::sd_estimates,
                            &avx2::squared_error_sum, &avx2::sum};
#endif

const KernelTable& choose() {
  const char* env = std::getenv("FIVENUM_KERNELS");
  const std::string want = env ? env : "auto";
  if (want == "scalar") return kScalar;
  const KernelTable* wide = avx2_table();
  if (want == "avx2") {
    if (!wide) throw std::runtime_error("FIVENUM_KERNELS=avx2 but AVX2 is unavailable");
    return *wide;
  }
  if (want != "auto" && !want.empty())
    throw std::runtime_error("FIVENUM_KERNELS must be scalar, avx2 or auto");
  return wide ? *wide : kScalar;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(FIVENUM_HAVE_AVX2_TU)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = choose();
  return table;
}

double sample_sd(const KernelTable& k, std::span<const double> x) {
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(x.size());
  const double mean = k.sum(x.data(), x.size()) / n;
  const double ss = k.squared_error_sum(x.data(), x.size(), mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace fivenum::kernels
