#include "fivenum/power_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "fivenum/error.hpp"

namespace fivenum {

namespace {

double sum_squares(std::span<const PowerSample> s, const Eigen::Vector3d& c) {
  double ss = 0.0;
  for (const auto& p : s) {
    const double r = p.J - (c[0] * std::pow(p.n, c[1]) + c[2]);
    ss += r * r;
  }
  return ss;
}

PowerLawFit constant_fit(std::span<const PowerSample> s, std::string why) {
  double mean = 0.0;
  for (const auto& p : s) mean += p.J;
  mean /= static_cast<double>(s.size());
  PowerLawFit f;
  f.c0 = mean;
  f.residual_norm = std::sqrt(sum_squares(s, Eigen::Vector3d(0.0, 0.0, mean)));
  f.constant_only = true;
  f.warning = std::move(why) + "; fell back to the constant fit c0 = mean(J)";
  return f;
}

}  // namespace

PowerLawFit fit_power_law(std::span<const PowerSample> samples) {
  std::vector<double> ns;
  for (const auto& p : samples) {
    if (!std::isfinite(p.n) || !std::isfinite(p.J)) throw FitError("fit_power_law: non-finite sample");
    if (p.n <= 0.0) throw FitError("fit_power_law: n must be positive");
    ns.push_back(p.n);
  }
  std::sort(ns.begin(), ns.end());
  if (std::unique(ns.begin(), ns.end()) - ns.begin() < 3)
    throw FitError("fit_power_law: need at least three distinct n");

  // Starting point: ln J = ln c1 + c2 ln n with c0 = 0.
  Eigen::Vector3d c(0.0, 0.5, 0.0);
  if (std::all_of(samples.begin(), samples.end(), [](const PowerSample& p) { return p.J > 0.0; })) {
    Eigen::MatrixXd X(samples.size(), 2);
    Eigen::VectorXd y(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
      X(k, 0) = 1.0;
      X(k, 1) = std::log(samples[k].n);
      y(k) = std::log(samples[k].J);
    }
    const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
    c = {std::exp(beta[0]), beta[1], 0.0};
  }

  double ss = sum_squares(samples, c);
  PowerLawFit fit;
  constexpr int kMaxIterations = 200;
  bool done = false;
  for (int it = 0; it < kMaxIterations && !done; ++it) {
    fit.iterations = it + 1;
    Eigen::MatrixXd Jac(samples.size(), 3);
    Eigen::VectorXd r(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double pw = std::pow(samples[k].n, c[1]);
      Jac(k, 0) = pw;
      Jac(k, 1) = c[0] * pw * std::log(samples[k].n);
      Jac(k, 2) = 1.0;
      r(k) = samples[k].J - (c[0] * pw + c[2]);
    }
    const Eigen::Matrix3d A = Jac.transpose() * Jac;
    const Eigen::Vector3d g = Jac.transpose() * r;
    // Small Marquardt term keeps the step defined when a column degenerates.
    Eigen::Matrix3d damped = A;
    for (int d = 0; d < 3; ++d) damped(d, d) += 1e-12 * std::max(A(d, d), 1e-300);
    const Eigen::Vector3d step = damped.ldlt().solve(g);
    if (!step.allFinite()) break;

    // Step halving until the sum of squares does not increase.
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h, t *= 0.5) {
      const Eigen::Vector3d trial = c + t * step;
      const double trial_ss = sum_squares(samples, trial);
      if (std::isfinite(trial_ss) && trial_ss <= ss) {
        const double change = ss - trial_ss;
        c = trial;
        ss = trial_ss;
        accepted = true;
        done = change <= 1e-15 * std::max(ss, 1e-300) &&
               (t * step).norm() <= 1e-12 * (1.0 + c.norm());
        break;
      }
    }
    if (!accepted || (t * step).norm() <= 1e-14 * (1.0 + c.norm())) break;
  }

  if (!(c[1] > 0.0 && c[1] < 1.0) || !(c[0] > 0.0))
    return constant_fit(samples, "power-law fit left the constraint c1 > 0, 0 < c2 < 1");
  fit.c1 = c[0];
  fit.c2 = c[1];
  fit.c0 = c[2];
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

}  // namespace fivenum
