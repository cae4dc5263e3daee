#include "fivenum/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "fivenum/error.hpp"

namespace fivenum {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

std::string_view to_string(DistFamily f) noexcept {
  switch (f) {
    case DistFamily::normal: return "normal";
    case DistFamily::lognormal: return "lognormal";
    case DistFamily::chi_square: return "chi_square";
    case DistFamily::beta: return "beta";
    case DistFamily::weibull: return "weibull";
  }
  return "?";
}

DistributionSpec DistributionSpec::normal(double mean, double sd) {
  require(std::isfinite(mean) && positive(sd), "normal: need finite mean and sd > 0");
  return {DistFamily::normal, {mean, sd}, mean, sd};
}

DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
  require(std::isfinite(mu) && positive(sigma), "lognormal: need finite mu and sigma > 0");
  const double s2 = sigma * sigma;
  return {DistFamily::lognormal, {mu, sigma}, std::exp(mu + 0.5 * s2),
          std::sqrt(std::expm1(s2) * std::exp(2.0 * mu + s2))};
}

DistributionSpec DistributionSpec::chi_square(double df) {
  require(positive(df), "chi_square: need df > 0");
  return {DistFamily::chi_square, {df, 0.0}, df, std::sqrt(2.0 * df)};
}

DistributionSpec DistributionSpec::beta(double alpha, double beta) {
  require(positive(alpha) && positive(beta), "beta: need alpha > 0 and beta > 0");
  const double s = alpha + beta;
  return {DistFamily::beta, {alpha, beta}, alpha / s, std::sqrt(alpha * beta / (s * s * (s + 1.0)))};
}

DistributionSpec DistributionSpec::weibull(double shape, double scale) {
  require(positive(shape) && positive(scale), "weibull: need shape > 0 and scale > 0");
  const double g1 = std::tgamma(1.0 + 1.0 / shape);
  const double g2 = std::tgamma(1.0 + 2.0 / shape);
  return {DistFamily::weibull, {shape, scale}, scale * g1, scale * std::sqrt(g2 - g1 * g1)};
}

std::array<std::string_view, 2> DistributionSpec::param_names() const noexcept {
  switch (family_) {
    case DistFamily::normal: return {"mean", "sd"};
    case DistFamily::lognormal: return {"mu", "sigma"};
    case DistFamily::chi_square: return {"df", ""};
    case DistFamily::beta: return {"alpha", "beta"};
    case DistFamily::weibull: return {"shape", "scale"};
  }
  return {"", ""};
}

std::string DistributionSpec::describe() const {
  const auto names = param_names();
  std::string out(to_string(family_));
  out += '(';
  char buf[64];
  for (std::size_t k = 0; k < param_count(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.*s=%g", k ? ", " : "", static_cast<int>(names[k].size()),
                  names[k].data(), params_[k]);
    out += buf;
  }
  return out + ')';
}

void DistributionSpec::sample(StreamRng& rng, std::span<double> out,
                              const kernels::KernelTable& k) const {
  const double p0 = params_[0], p1 = params_[1];
  switch (family_) {
    case DistFamily::normal:
    case DistFamily::lognormal:
      rng.fill_uniform(out);
      k.normal_quantiles(out.data(), out.data(), out.size());
      if (family_ == DistFamily::normal)
        for (double& x : out) x = p0 + p1 * x;
      else
        for (double& x : out) x = std::exp(p0 + p1 * x);
      return;
    case DistFamily::weibull: {
      const double inv_shape = 1.0 / p0;
      for (double& x : out) x = p1 * std::pow(-std::log(rng.uniform()), inv_shape);
      return;
    }
    case DistFamily::chi_square: {
      std::gamma_distribution<double> g(0.5 * p0, 2.0);
      for (double& x : out) x = g(rng);
      return;
    }
    case DistFamily::beta: {
      std::gamma_distribution<double> ga(p0, 1.0), gb(p1, 1.0);
      for (double& x : out) {
        const double u = ga(rng);
        const double v = gb(rng);
        x = u / (u + v);
      }
      return;
    }
  }
}

std::vector<DistributionSpec> skewed_suite() {
  return {DistributionSpec::lognormal(4.0, 0.3), DistributionSpec::chi_square(10.0),
          DistributionSpec::beta(9.0, 4.0), DistributionSpec::weibull(2.0, 35.0)};
}

}  // namespace fivenum
