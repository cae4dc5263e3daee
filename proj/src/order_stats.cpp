#include "fivenum/order_stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "fivenum/error.hpp"
#include "fivenum/kernels.hpp"
#include "fivenum/moment_cache.hpp"
#include "fivenum/normal.hpp"
#include "fivenum/quadrature.hpp"
#include "fivenum/rng.hpp"

namespace fivenum {

namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362105;
constexpr double kLogSqrt2Pi = 0.918938533204672741780329736406;
// Initial panel width on the truncated line; narrow order-statistic peaks
// (sd ~ 0.05 at n = 801) are then resolved by adaptive bisection.
constexpr double kPanelWidth = 0.5;

struct Tails {
  double lower;      // Phi(x)
  double upper;      // 1 - Phi(x)
  double log_lower;  // ln Phi(x)
  double log_upper;  // ln(1 - Phi(x))
};

Tails tails(double x) {
  Tails t{};
  if (std::fabs(x) > 30.0) {
    t.log_lower = log_cdf(x);
    t.log_upper = log_tail(x);
    t.lower = std::exp(t.log_lower);
    t.upper = std::exp(t.log_upper);
  } else if (x < 0.0) {
    t.lower = 0.5 * std::erfc(-x * kInvSqrt2);
    t.upper = 1.0 - t.lower;
    t.log_lower = std::log(t.lower);
    t.log_upper = std::log1p(-t.lower);
  } else {
    t.upper = 0.5 * std::erfc(x * kInvSqrt2);
    t.lower = 1.0 - t.upper;
    t.log_upper = std::log(t.upper);
    t.log_lower = std::log1p(-t.upper);
  }
  return t;
}

// k * log(v) with the convention 0 * log(0) = 0.
inline double power_term(double k, double log_v) { return k == 0.0 ? 0.0 : k * log_v; }

double log_single_coef(std::int64_t n, std::int64_t i) {
  return std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(i)) -
         std::lgamma(static_cast<double>(n - i + 1));
}

double log_joint_coef(std::int64_t n, std::int64_t i, std::int64_t j) {
  return std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(i)) -
         std::lgamma(static_cast<double>(j - i)) - std::lgamma(static_cast<double>(n - j + 1));
}

// Phi(y) - Phi(x) for x < y, taken from whichever tail keeps precision.
double cdf_gap(const Tails& tx, const Tails& ty, double x) {
  return x >= 0.0 ? tx.upper - ty.upper : ty.lower - tx.lower;
}

std::size_t panels(double a, double b) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / kPanelWidth)));
}

QuadResult checked(const QuadResult& r, const char* what, double tol) {
  if (!r.converged)
    throw NumericError(std::string(what) + ": quadrature did not reach tolerance " +
                           std::to_string(tol) + " (achieved " + std::to_string(r.abs_error) + ")",
                       r.abs_error);
  return r;
}

// Log density of Z_(i) at x, given precomputed tails.
struct SingleDensity {
  double log_coef;
  double below;  // i - 1
  double above;  // n - i

  double log_at(double x) const {
    const Tails t = tails(x);
    return log_coef + power_term(below, t.log_lower) + power_term(above, t.log_upper) -
           0.5 * x * x - kLogSqrt2Pi;
  }
};

SingleDensity single_density(OrderIndex idx) {
  return {log_single_coef(idx.n(), idx.rank()), static_cast<double>(idx.rank() - 1),
          static_cast<double>(idx.n() - idx.rank())};
}

double central_moment(OrderIndex idx, double centre, int power, double tol, const char* what) {
  const SingleDensity d = single_density(idx);
  auto integrand = [&](double x) {
    const double dx = x - centre;
    const double w = power == 1 ? dx : dx * dx;
    return w * std::exp(d.log_at(x));
  };
  QuadOptions q;
  q.abs_tol = tol;
  q.rel_tol = 0.0;
  q.initial_intervals = panels(kQuadratureLower, kQuadratureUpper);
  return checked(integrate(integrand, kQuadratureLower, kQuadratureUpper, q), what, tol).value;
}

// E[(Z_(i) - mu_i)(Z_(j) - mu_j)] for i < j as an iterated integral over the
// triangle x < y: outer in y, inner in x on [-9, y].
double centred_cross_moment(std::int64_t n, std::int64_t i, std::int64_t j, double mu_i,
                            double mu_j, double tol) {
  const double log_coef = log_joint_coef(n, i, j);
  const double below = static_cast<double>(i - 1);
  const double between = static_cast<double>(j - i - 1);
  const double above = static_cast<double>(n - j);
  // Slices whose largest possible contribution is below this are skipped.
  const double log_negligible = std::log(tol) - 30.0;
  // Floored above the 15-point rule's round-off level.
  const double inner_tol = std::max(tol / 400.0, 1e-14);
  double worst_inner_error = 0.0;
  bool inner_failed = false;

  auto outer = [&](double y) {
    const Tails ty = tails(y);
    const double log_y_part = log_coef + power_term(above, ty.log_upper) - 0.5 * y * y - kLogSqrt2Pi;
    // Phi(x) <= Phi(y), Phi(y) - Phi(x) <= Phi(y), phi <= 0.4, |offsets| <= 18,
    // inner width <= 18.
    const double bound = log_y_part + (below + between) * ty.log_lower + std::log(0.4 * 18 * 18 * 18);
    if (bound < log_negligible || y <= kQuadratureLower) return 0.0;
    auto inner = [&](double x) {
      const Tails tx = tails(x);
      const double gap = cdf_gap(tx, ty, x);
      if (between != 0.0 && !(gap > 0.0)) return 0.0;
      const double log_f = log_y_part + power_term(below, tx.log_lower) +
                           power_term(between, std::log(gap)) - 0.5 * x * x - kLogSqrt2Pi;
      return (x - mu_i) * std::exp(log_f);
    };
    QuadOptions q;
    q.abs_tol = inner_tol;
    q.rel_tol = 1e-12;
    q.initial_intervals = panels(kQuadratureLower, y);
    const QuadResult r = integrate(inner, kQuadratureLower, y, q);
    if (!r.converged) inner_failed = true;
    worst_inner_error = std::max(worst_inner_error, r.abs_error);
    return (y - mu_j) * r.value;
  };

  QuadOptions q;
  q.abs_tol = tol;
  q.rel_tol = 0.0;
  q.initial_intervals = panels(kQuadratureLower, kQuadratureUpper);
  const QuadResult r = integrate(outer, kQuadratureLower, kQuadratureUpper, q);
  if (inner_failed)
    throw NumericError("cov_of: inner quadrature did not converge", worst_inner_error);
  return checked(r, "cov_of", tol).value;
}

double covariance_with_means(std::int64_t n, std::int64_t i, std::int64_t j, double mu_i,
                             double mu_j, double tol) {
  if (i == j) return central_moment(OrderIndex(n, i), mu_i, 2, tol, "cov_of");
  return centred_cross_moment(n, i, j, mu_i, mu_j, tol);
}

}  // namespace

OrderIndex::OrderIndex(std::int64_t n, std::int64_t rank) : n_(n), rank_(rank) {
  if (n < 1) throw DomainError("order statistic: n must be >= 1");
  if (rank < 1 || rank > n)
    throw DomainError("order statistic: rank " + std::to_string(rank) + " outside [1, " +
                      std::to_string(n) + "]");
}

double truncation_bound(std::int64_t n) {
  // Each rank's density is at most n * phi(x) pointwise, and
  // int_9^inf x^2 phi(x) dx = 9 phi(9) + (1 - Phi(9)).
  const double tail = 9.0 * std_normal_pdf(9.0) + std_normal_upper_tail(9.0);
  return 2.0 * static_cast<double>(n) * tail;
}

double single_order_pdf(OrderIndex idx, double x) {
  if (!std::isfinite(x)) throw DomainError("single_order_pdf: non-finite argument");
  return std::exp(single_density(idx).log_at(x));
}

double joint_order_pdf(std::int64_t n, std::int64_t i, std::int64_t j, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw DomainError("joint_order_pdf: non-finite argument");
  if (i >= j) throw DomainError("joint_order_pdf: requires i < j");
  (void)OrderIndex(n, i);
  (void)OrderIndex(n, j);
  if (x >= y) return 0.0;
  const Tails tx = tails(x);
  const Tails ty = tails(y);
  const double between = static_cast<double>(j - i - 1);
  const double gap = cdf_gap(tx, ty, x);
  if (between != 0.0 && !(gap > 0.0)) return 0.0;
  const double log_f = log_joint_coef(n, i, j) + power_term(static_cast<double>(i - 1), tx.log_lower) +
                       power_term(between, std::log(gap)) +
                       power_term(static_cast<double>(n - j), ty.log_upper) - 0.5 * (x * x + y * y) -
                       2.0 * kLogSqrt2Pi;
  return std::exp(log_f);
}

double mean_of(OrderIndex idx, const MomentOptions& opt) {
  return central_moment(idx, 0.0, 1, opt.tolerance, "mean_of");
}

double cov_of(std::int64_t n, std::int64_t i, std::int64_t j, const MomentOptions& opt) {
  if (i > j) throw DomainError("cov_of: requires i <= j");
  const OrderIndex a(n, i), b(n, j);
  const double mu_i = mean_of(a, opt);
  const double mu_j = i == j ? mu_i : mean_of(b, opt);
  return covariance_with_means(n, i, j, mu_i, mu_j, opt.tolerance);
}

std::int64_t quartile_step(std::int64_t n) {
  if (n < 5 || (n - 1) % 4 != 0)
    throw DomainError("summary ranks need n = 4Q+1 with Q >= 1, got n = " + std::to_string(n));
  return (n - 1) / 4;
}

std::optional<std::size_t> OrderStatMoments::position(std::int64_t rank) const {
  for (std::size_t p = 0; p < ranks.size(); ++p)
    if (ranks[p] == rank) return p;
  return std::nullopt;
}

double OrderStatMoments::mean(std::int64_t rank) const {
  const auto p = position(rank);
  if (!p) throw DomainError("rank " + std::to_string(rank) + " is not a summary rank");
  return means[*p];
}

double OrderStatMoments::covariance(std::int64_t rank_i, std::int64_t rank_j) const {
  const auto p = position(rank_i), r = position(rank_j);
  if (!p || !r) throw DomainError("covariance requested for a non-summary rank");
  return cov[*p][*r];
}

double OrderStatMoments::var_range() const { return cov[4][4] + cov[0][0] - 2.0 * cov[0][4]; }

double OrderStatMoments::var_iqr() const { return cov[3][3] + cov[1][1] - 2.0 * cov[1][3]; }

double OrderStatMoments::cov_range_iqr() const {
  return cov[4][3] - cov[4][1] - cov[0][3] + cov[0][1];
}

OrderStatMoments summary_moments(std::int64_t n, const MomentOptions& opt) {
  const std::int64_t q = quartile_step(n);
  if (opt.cache)
    if (auto hit = opt.cache->find(n, opt.tolerance)) return *hit;

  OrderStatMoments m;
  m.n = n;
  m.q = q;
  m.ranks = {1, q + 1, 2 * q + 1, 3 * q + 1, n};
  m.method = MomentMethod::quadrature;
  m.precision = opt.tolerance;
  const double tol = opt.tolerance;

  const double mu_min = mean_of(OrderIndex(n, 1), opt);
  const double mu_q1 = mean_of(OrderIndex(n, q + 1), opt);
  m.means = {mu_min, mu_q1, 0.0, -mu_q1, -mu_min};

  auto fill = [&](std::size_t p, std::size_t r) {
    const double c = covariance_with_means(n, m.ranks[p], m.ranks[r], m.means[p], m.means[r], tol);
    m.cov[p][r] = m.cov[r][p] = c;
    // Reflection: Cov(i, j) = Cov(n+1-j, n+1-i).
    m.cov[4 - r][4 - p] = m.cov[4 - p][4 - r] = c;
  };
  fill(0, 0);
  fill(1, 1);
  fill(2, 2);
  fill(0, 1);
  fill(0, 2);
  fill(0, 3);
  fill(0, 4);
  fill(1, 2);
  fill(1, 3);

  if (opt.cache) opt.cache->store(m, opt.tolerance);
  return m;
}

std::array<double, 5> select_summary_ranks(std::span<double> sample) {
  const auto n = static_cast<std::int64_t>(sample.size());
  const std::int64_t q = quartile_step(n);
  const auto b = sample.begin();
  std::nth_element(b, b + q, sample.end());
  std::nth_element(b + q + 1, b + 2 * q, sample.end());
  std::nth_element(b + 2 * q + 1, b + 3 * q, sample.end());
  const double lo = *std::min_element(b, b + q);
  const double hi = *std::max_element(b + 3 * q + 1, sample.end());
  return {lo, b[q], b[2 * q], b[3 * q], hi};
}

namespace {

// Running means and co-moments of the five ranks (Welford / Chan et al.).
struct CoMoments {
  double count = 0.0;
  std::array<double, 5> mean{};
  std::array<std::array<double, 5>, 5> c{};

  void add(const std::array<double, 5>& x) {
    count += 1.0;
    std::array<double, 5> d_old{};
    for (int p = 0; p < 5; ++p) {
      d_old[p] = x[p] - mean[p];
      mean[p] += d_old[p] / count;
    }
    for (int p = 0; p < 5; ++p)
      for (int r = 0; r < 5; ++r) c[p][r] += d_old[p] * (x[r] - mean[r]);
  }

  void merge(const CoMoments& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    std::array<double, 5> delta{};
    for (int p = 0; p < 5; ++p) delta[p] = o.mean[p] - mean[p];
    for (int p = 0; p < 5; ++p)
      for (int r = 0; r < 5; ++r) c[p][r] += o.c[p][r] + delta[p] * delta[r] * count * o.count / total;
    for (int p = 0; p < 5; ++p) mean[p] += delta[p] * o.count / total;
    count = total;
  }
};

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(t, jobs));
}

}  // namespace

OrderStatMoments mc_oracle(std::int64_t n, std::int64_t reps, std::uint64_t seed, unsigned threads) {
  const std::int64_t q = quartile_step(n);
  if (reps < 100000) throw DomainError("mc_oracle: need at least 1e5 replications");
  const std::int64_t batches = std::min<std::int64_t>(50, reps);
  std::vector<CoMoments> per_batch(static_cast<std::size_t>(batches));
  const kernels::KernelTable& k = kernels::active();

  auto run_batch = [&](std::int64_t bi) {
    const std::int64_t first = reps * bi / batches;
    const std::int64_t last = reps * (bi + 1) / batches;
    constexpr std::int64_t kChunk = 64;
    std::vector<double> u(static_cast<std::size_t>(kChunk * n)), z(u.size());
    CoMoments acc;
    for (std::int64_t r0 = first; r0 < last; r0 += kChunk) {
      const std::int64_t count = std::min(kChunk, last - r0);
      for (std::int64_t r = 0; r < count; ++r) {
        StreamRng rng(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r0 + r));
        rng.fill_uniform(std::span<double>(u.data() + r * n, static_cast<std::size_t>(n)));
      }
      k.normal_quantiles(u.data(), z.data(), static_cast<std::size_t>(count * n));
      for (std::int64_t r = 0; r < count; ++r)
        acc.add(select_summary_ranks(std::span<double>(z.data() + r * n, static_cast<std::size_t>(n))));
    }
    per_batch[static_cast<std::size_t>(bi)] = acc;
  };

  const unsigned workers = worker_count(threads, per_batch.size());
  std::atomic<std::int64_t> next{0};
  auto work = [&] {
    for (std::int64_t bi; (bi = next.fetch_add(1)) < batches;) run_batch(bi);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  CoMoments total;
  for (const auto& b : per_batch) total.merge(b);

  OrderStatMoments m;
  m.n = n;
  m.q = q;
  m.ranks = {1, q + 1, 2 * q + 1, 3 * q + 1, n};
  m.method = MomentMethod::monte_carlo;
  m.means = total.mean;
  for (int p = 0; p < 5; ++p)
    for (int r = 0; r < 5; ++r) m.cov[p][r] = total.c[p][r] / (total.count - 1.0);

  // Batch-means standard errors.
  const double nb = static_cast<double>(batches);
  double worst = 0.0;
  for (int p = 0; p < 5; ++p) {
    double s = 0.0;
    for (const auto& b : per_batch) s += (b.mean[p] - m.means[p]) * (b.mean[p] - m.means[p]);
    m.mean_se[p] = std::sqrt(s / (nb - 1.0) / nb);
    worst = std::max(worst, m.mean_se[p]);
    for (int r = 0; r < 5; ++r) {
      double sc = 0.0;
      for (const auto& b : per_batch) {
        const double est = b.c[p][r] / (b.count - 1.0);
        sc += (est - m.cov[p][r]) * (est - m.cov[p][r]);
      }
      m.cov_se[p][r] = std::sqrt(sc / (nb - 1.0) / nb);
      worst = std::max(worst, m.cov_se[p][r]);
    }
  }
  m.precision = worst;
  return m;
}

}  // namespace fivenum
