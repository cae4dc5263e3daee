#pragma once

// Parent distributions for the simulation studies, with analytic moments.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fivenum/kernels.hpp"
#include "fivenum/rng.hpp"

namespace fivenum {

enum class DistFamily { normal, lognormal, chi_square, beta, weibull };

std::string_view to_string(DistFamily f) noexcept;

class DistributionSpec {
 public:
  // Each factory throws DomainError for parameters outside the family's domain.
  static DistributionSpec normal(double mean, double sd);
  static DistributionSpec lognormal(double mu, double sigma);  // parameters of ln X
  static DistributionSpec chi_square(double df);
  static DistributionSpec beta(double alpha, double beta);
  static DistributionSpec weibull(double shape, double scale);

  DistFamily family() const noexcept { return family_; }
  const std::array<double, 2>& params() const noexcept { return params_; }
  /// Parameter names in params() order ("df" only uses the first slot).
  std::array<std::string_view, 2> param_names() const noexcept;
  std::size_t param_count() const noexcept { return family_ == DistFamily::chi_square ? 1 : 2; }
  double true_mean() const noexcept { return mean_; }
  double true_sd() const noexcept { return sd_; }
  std::string describe() const;  // e.g. "lognormal(mu=4, sigma=0.3)"

  /// Fills `out` with independent variates drawn from `rng`. Normal and
  /// log-normal use the inverse CDF through `k`, Weibull its closed-form
  /// inverse CDF, chi-square and beta the standard library gamma sampler.
  void sample(StreamRng& rng, std::span<double> out, const kernels::KernelTable& k) const;

 private:
  DistributionSpec(DistFamily f, std::array<double, 2> p, double mean, double sd)
      : family_(f), params_(p), mean_(mean), sd_(sd) {}

  DistFamily family_;
  std::array<double, 2> params_;
  double mean_;
  double sd_;
};

/// The four skewed parents: lognormal(4, 0.3), chi-square(10), beta(9, 4),
/// Weibull(shape 2, scale 35).
std::vector<DistributionSpec> skewed_suite();

}  // namespace fivenum
