#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "fivenum/kernels.hpp"
#include "fivenum/normal.hpp"
#include "fivenum/rng.hpp"

using namespace fivenum;
using kernels::KernelTable;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> uniforms(std::size_t count, std::uint64_t stream) {
  StreamRng rng(42, stream);
  std::vector<double> u(count);
  rng.fill_uniform(u);
  // Exercise the tail branches and the extremes of the open interval.
  const double edge[] = {1e-300, 1e-20, 0.02425, 0.975, 0.97575, 1 - 1e-16, 0x1.0p-53, 0.5};
  for (std::size_t k = 0; k < std::size(edge) && k < count; ++k) u[k * 7 % count] = edge[k];
  return u;
}

const KernelTable* simd() { return kernels::avx2_table(); }

}  // namespace

TEST_CASE("scalar quantile kernel is AS241") {
  const auto u = uniforms(1001, 1);
  std::vector<double> z(u.size());
  kernels::scalar_table().normal_quantiles(u.data(), z.data(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) CHECK(z[i] == as241_quantile(u[i]));
}

TEST_CASE("SIMD quantiles are bitwise equal to scalar, in place as well") {
  if (!simd()) {
    MESSAGE("AVX2 kernels unavailable; skipped");
    return;
  }
  for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 255u, 4096u}) {
    const auto u = uniforms(count, count);
    std::vector<double> zs(count), zv(count);
    kernels::scalar_table().normal_quantiles(u.data(), zs.data(), count);
    simd()->normal_quantiles(u.data(), zv.data(), count);
    CHECK(same_bits(zs, zv));
    auto inplace = u;
    simd()->normal_quantiles(inplace.data(), inplace.data(), count);
    CHECK(same_bits(zs, inplace));
  }
}

TEST_CASE("SIMD estimator and reduction kernels are bitwise equal to scalar") {
  if (!simd()) return;
  const kernels::SdCoefficients c{2.3595, 0.9944, 2.7933, 6.4030};
  for (std::size_t count : {1u, 7u, 256u, 1003u}) {
    StreamRng rng(3, count);
    std::vector<double> a(count), q1(count), q3(count), b(count);
    for (std::size_t i = 0; i < count; ++i) {
      a[i] = rng.uniform() * 10;
      q1[i] = a[i] + rng.uniform();
      q3[i] = q1[i] + rng.uniform() * 3;
      b[i] = q3[i] + rng.uniform() * 5;
    }
    std::vector<std::vector<double>> out_s(4, std::vector<double>(count)), out_v = out_s;
    kernels::scalar_table().sd_estimates(a.data(), q1.data(), q3.data(), b.data(), count, c, out_s[0].data(),
                                         out_s[1].data(), out_s[2].data(), out_s[3].data());
    simd()->sd_estimates(a.data(), q1.data(), q3.data(), b.data(), count, c, out_v[0].data(), out_v[1].data(),
                         out_v[2].data(), out_v[3].data());
    for (int k = 0; k < 4; ++k) CHECK(same_bits(out_s[k], out_v[k]));

    const double ss = kernels::scalar_table().sum(b.data(), count);
    const double sv = simd()->sum(b.data(), count);
    CHECK(std::memcmp(&ss, &sv, sizeof ss) == 0);
    const double es = kernels::scalar_table().squared_error_sum(b.data(), count, 7.5);
    const double ev = simd()->squared_error_sum(b.data(), count, 7.5);
    CHECK(std::memcmp(&es, &ev, sizeof es) == 0);
    if (count > 1) CHECK(kernels::sample_sd(kernels::scalar_table(), b) == kernels::sample_sd(*simd(), b));
  }
}

TEST_CASE("sd estimate kernel formulas") {
  const double a = 0, q1 = 1, q3 = 3, b = 4;
  const kernels::SdCoefficients c{2.0, 1.5, 2.5, 6.0};
  double r, i, avg, opt;
  kernels::scalar_table().sd_estimates(&a, &q1, &q3, &b, 1, c, &r, &i, &avg, &opt);
  CHECK(r == 4.0 / 2.0);
  CHECK(i == 2.0 / 1.5);
  CHECK(avg == doctest::Approx((r + i) / 2));
  CHECK(opt == doctest::Approx(4.0 / 2.5 + 2.0 / 6.0));
}

TEST_CASE("sample sd") {
  const std::vector<double> x{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(kernels::sample_sd(kernels::scalar_table(), x) == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(std::isnan(kernels::sample_sd(kernels::scalar_table(), std::vector<double>{1.0})));
}
