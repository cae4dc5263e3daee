#pragma once

// Moments of standard-normal order statistics Z_(1) <= ... <= Z_(n).
//
// Exact moments come from adaptive quadrature of the order-statistic
// densities on [-9, 9] (the mass outside is below 1e-15 for every n used
// here). The Monte Carlo oracle is an independent brute-force route used to
// validate the quadrature.

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace fivenum {

class MomentCache;

class OrderIndex {
 public:
  // Throws DomainError unless n >= 1 and 1 <= rank <= n.
  OrderIndex(std::int64_t n, std::int64_t rank);

  std::int64_t n() const noexcept { return n_; }
  std::int64_t rank() const noexcept { return rank_; }
  OrderIndex mirrored() const noexcept { return OrderIndex(n_, n_ + 1 - rank_, {}); }

 private:
  struct Unchecked {};
  OrderIndex(std::int64_t n, std::int64_t rank, Unchecked) : n_(n), rank_(rank) {}

  std::int64_t n_;
  std::int64_t rank_;
};

inline constexpr double kQuadratureLower = -9.0;
inline constexpr double kQuadratureUpper = 9.0;

/// Upper bound on |integral of x^2 f_(i)(x)| outside [-9, 9] for any rank of
/// a sample of size n.
double truncation_bound(std::int64_t n);

/// Density of Z_(i), evaluated in log space.
double single_order_pdf(OrderIndex idx, double x);

/// Joint density of (Z_(i), Z_(j)) for i < j; zero when x >= y.
double joint_order_pdf(std::int64_t n, std::int64_t i, std::int64_t j, double x, double y);

struct MomentOptions {
  // Target absolute error of each moment.
  double tolerance = 1e-10;
  // Optional memo; when null every call integrates from scratch.
  MomentCache* cache = nullptr;
};

/// E[Z_(i)] by adaptive quadrature. Throws NumericError on non-convergence.
double mean_of(OrderIndex idx, const MomentOptions& opt = {});

/// Cov(Z_(i), Z_(j)) for i <= j (1-D quadrature when i == j, iterated 2-D
/// otherwise). Throws DomainError for i > j, NumericError on non-convergence.
double cov_of(std::int64_t n, std::int64_t i, std::int64_t j, const MomentOptions& opt = {});

enum class MomentMethod { quadrature, monte_carlo };

// Means and covariance block of the five summary ranks {1, Q+1, 2Q+1, 3Q+1, n}
// for n = 4Q+1, stored by position 0..4 in that order.
struct OrderStatMoments {
  std::int64_t n = 0;
  std::int64_t q = 0;
  std::array<std::int64_t, 5> ranks{};
  std::array<double, 5> means{};
  std::array<std::array<double, 5>, 5> cov{};
  MomentMethod method = MomentMethod::quadrature;
  // Estimated absolute error: the quadrature tolerance, or the largest Monte
  // Carlo standard error.
  double precision = 0.0;
  // Monte Carlo standard errors; zero for quadrature results.
  std::array<double, 5> mean_se{};
  std::array<std::array<double, 5>, 5> cov_se{};

  // Position of `rank` in `ranks`, or nullopt.
  std::optional<std::size_t> position(std::int64_t rank) const;
  double mean(std::int64_t rank) const;
  double covariance(std::int64_t rank_i, std::int64_t rank_j) const;

  double var_range() const;      // Var(Z_(n) - Z_(1))
  double var_iqr() const;        // Var(Z_(3Q+1) - Z_(Q+1))
  double cov_range_iqr() const;  // Cov(Z_(n) - Z_(1), Z_(3Q+1) - Z_(Q+1))
};

/// Q such that n = 4Q+1; throws DomainError otherwise.
std::int64_t quartile_step(std::int64_t n);

/// Quadrature moments of the five summary ranks. Only the non-redundant
/// entries are integrated; the rest follow from the reflection symmetry
/// Z_(i) ~ -Z_(n+1-i).
OrderStatMoments summary_moments(std::int64_t n, const MomentOptions& opt = {});

/// Partially reorders a sample of size n = 4Q+1 and returns the values at
/// ranks {1, Q+1, 2Q+1, 3Q+1, n}.
std::array<double, 5> select_summary_ranks(std::span<double> sample);

/// Brute-force moments of the five summary ranks from `reps` simulated
/// samples (reps >= 1e5; standard errors from 50 batch means).
/// Deterministic in (n, reps, seed) for any thread count.
OrderStatMoments mc_oracle(std::int64_t n, std::int64_t reps, std::uint64_t seed,
                           unsigned threads = 0);

}  // namespace fivenum
