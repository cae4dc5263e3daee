// Acceptance checks at desk scale. Prints one PASS/FAIL line per criterion
// and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fivenum/estimators.hpp"
#include "fivenum/moment_cache.hpp"
#include "fivenum/normal.hpp"
#include "fivenum/order_stats.hpp"
#include "fivenum/rng.hpp"
#include "fivenum/simulator.hpp"
#include "fivenum/weights.hpp"

using namespace fivenum;

namespace {

constexpr std::uint64_t kSeed = 20200101;
constexpr std::int64_t kDeskReps = 100'000;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void table_reproduction() {
  std::ifstream in(FIVENUM_TEST_DATA "/table1.csv");
  std::string line;
  std::getline(in, line);
  std::vector<std::array<double, 3>> published;
  while (std::getline(in, line)) {
    std::array<double, 3> r{};
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream(line) >> r[0] >> r[1] >> r[2];
    published.push_back(r);
  }
  Stopwatch sw;
  const auto rows = generate_table(100);
  const double t = sw.seconds();
  int matched = 0;
  std::string misses;
  for (std::size_t k = 0; k < rows.size() && k < published.size(); ++k) {
    const double ours[2] = {round_half_away(rows[k].theta1, 3), round_half_away(rows[k].theta2, 3)};
    for (int c = 0; c < 2; ++c) {
      if (ours[c] == published[k][c + 1]) {
        ++matched;
      } else {
        misses += fmt(" Q=%lld theta%d %.3f vs published %.3f (unrounded %.6f);", static_cast<long long>(rows[k].q),
                      c + 1, ours[c], published[k][c + 1], c == 0 ? rows[k].theta1 : rows[k].theta2);
      }
    }
  }
  const int total = 2 * static_cast<int>(published.size());
  const bool ok = published.size() == 100 && matched == total && t < 1.0;
  report(ok, "table reproduction", fmt("%d/%d theta entries match, %.3f s;", matched, total, t) + misses);
}

void weight_fidelity(MomentCache& cache) {
  MomentOptions opt;
  opt.cache = &cache;
  Stopwatch sw;
  double worst = 0.0;
  std::int64_t worst_n = 0;
  for (std::int64_t q = 1; q <= 100; ++q) {
    const std::int64_t n = 4 * q + 1;
    const double d = std::fabs(exact_optimal_weight(n, opt) - approx_weight(static_cast<double>(n)));
    if (d > worst) worst = d, worst_n = n;
  }
  const double t = sw.seconds();
  report(worst <= 0.03 && t < 600.0, "optimal-weight fidelity",
         fmt("max |w_exact - w_approx| = %.5f at n=%lld over Q=1..100, %.1f s", worst,
             static_cast<long long>(worst_n), t));

  const double w85 = exact_optimal_weight(85, opt);
  report(std::fabs(w85 - 0.5) <= 0.03, "equal-reliability point", fmt("w_exact(85) = %.5f", w85));
}

void moment_asymptotics(MomentCache& cache) {
  MomentOptions opt;
  opt.cache = &cache;
  const OrderStatMoments m = summary_moments(401, opt);
  const double n = 401.0;
  const double iqr = n * m.var_iqr(), var = n * m.covariance(101, 101), cov = n * m.covariance(101, 301);
  const bool ok = std::fabs(iqr / 2.4758 - 1) <= 0.05 && std::fabs(var / 1.8568 - 1) <= 0.05 &&
                  std::fabs(cov / 0.6189 - 1) <= 0.05;
  report(ok, "moment asymptotics at n=401",
         fmt("n Var(IQR) = %.4f (2.4758), n Var(Z_(Q+1)) = %.4f (1.8568), n Cov = %.4f (0.6189)", iqr, var, cov));
}

void oracle_equivalence(MomentCache& cache) {
  MomentOptions opt;
  opt.cache = &cache;
  constexpr std::int64_t reps = 10'000'000;
  Stopwatch sw;
  bool ok = true;
  std::string detail;
  for (std::int64_t n : {5, 85, 401}) {
    const OrderStatMoments q = summary_moments(n, opt);
    const OrderStatMoments mc = mc_oracle(n, reps, kSeed);
    double worst = 0.0;
    for (std::size_t a = 0; a < 5; ++a) {
      worst = std::max(worst, std::fabs(q.means[a] - mc.means[a]) / mc.mean_se[a]);
      for (std::size_t b = a; b < 5; ++b)
        worst = std::max(worst, std::fabs(q.cov[a][b] - mc.cov[a][b]) / mc.cov_se[a][b]);
    }
    ok = ok && worst <= 4.0;
    detail += fmt(" n=%lld max |diff|/SE = %.2f;", static_cast<long long>(n), worst);
  }
  report(ok, "quadrature vs Monte Carlo oracle (1e7 reps)", fmt("%.0f s;", sw.seconds()) + detail);
}

SimulationConfig normal_config() {
  SimulationConfig c;
  c.n_grid = default_n_grid();
  for (std::int64_t extra : {25, 401}) c.n_grid.push_back(extra);
  std::sort(c.n_grid.begin(), c.n_grid.end());
  c.replications = kDeskReps;
  c.seed = kSeed;
  return c;
}

void rmse_study() {
  Stopwatch sw;
  const RmseReport r = run_rmse_study(normal_config());
  const double t = sw.seconds();
  const MethodId opt = MethodId::shi_sd_s3();
  const MethodId s1 = MethodId::wan_sd(Scenario::S1), s0 = MethodId::wan_sd(Scenario::S2);

  bool dominance = true;
  std::string worst;
  double worst_margin = -1e300;
  for (const auto& row : r.rows)
    for (const auto& cell : row.cells) {
      if (cell.estimator == opt) continue;
      const double margin = (row.cell(opt).rmse - cell.rmse) / cell.mc_se;
      if (margin > worst_margin) {
        worst_margin = margin;
        worst = fmt("n=%lld vs %s", static_cast<long long>(row.n), cell.estimator.label().c_str());
      }
      if (row.cell(opt).rmse > cell.rmse + 3 * cell.mc_se) dominance = false;
    }
  report(dominance, "RMSE (a) new estimator dominates at every n",
         fmt("largest (RMSE_new - RMSE_other)/MC-SE = %.2f at ", worst_margin) + worst +
             fmt("; %zu grid points, %.0f s", r.rows.size(), t));

  const auto& r5 = r.row(5);
  const auto& r401 = r.row(401);
  report(r5.cell(s1).rmse < r5.cell(s0).rmse && r401.cell(s0).rmse < r401.cell(s1).rmse,
         "RMSE (b) range beats IQR at n=5, reversed at n=401",
         fmt("n=5: %.4f vs %.4f; n=401: %.4f vs %.4f", r5.cell(s1).rmse, r5.cell(s0).rmse, r401.cell(s1).rmse,
             r401.cell(s0).rmse));

  const auto& c801 = r.row(801).cell(opt);
  report(std::fabs(c801.rmse / 2.721 - 1) <= 0.15, "RMSE (c) n=801 near the 2.721 limit",
         fmt("RMSE = %.4f +- %.4f, %.1f%% from 2.721", c801.rmse, c801.mc_se, 100 * (c801.rmse / 2.721 - 1)));
  report(t < 900.0, "RMSE study runtime", fmt("%.0f s (limit 900 s)", t));

  bool unbiased = true;
  std::string detail;
  for (std::int64_t n : {25, 85, 401}) {
    for (const auto& cell : r.row(n).cells) {
      const double rel = cell.mean_estimate / 17.0 - 1.0;
      unbiased = unbiased && std::fabs(rel) <= 0.01;
      detail += fmt(" n=%lld %s %+.3f%%;", static_cast<long long>(n), cell.estimator.label().c_str(), 100 * rel);
    }
  }
  report(unbiased, "near-unbiasedness at n=25, 85, 401", detail);
}

void histogram_study() {
  const std::vector<std::int64_t> ns{5, 85, 401};
  const HistogramReport h = run_histogram_study(ns, kDeskReps, kSeed);
  const auto &a = h.rows[0], &b = h.rows[1], &c = h.rows[2];
  const double ratio85 = b.range.variance / b.iqr.variance;
  const bool ok = a.range.variance < a.iqr.variance && c.iqr.variance < c.range.variance &&
                  std::fabs(ratio85 - 1) <= 0.10;
  report(ok, "histogram variance ordering",
         fmt("Var range/IQR: n=5 %.4f/%.4f, n=85 %.5f/%.5f (ratio %.3f), n=401 %.5f/%.5f", a.range.variance,
             a.iqr.variance, b.range.variance, b.iqr.variance, ratio85, c.range.variance, c.iqr.variance));
}

void constants() {
  const double z = std_normal_quantile(0.75);
  const double c = 2.4758 / (4 * z * z);
  const double d = 1.3605 / 0.5;
  report(std::fabs(c - 1.3605) <= 0.001 && std::fabs(d - 2.721) <= 0.001, "constant identities",
         fmt("2.4758/(4 Phi^-1(0.75)^2) = %.5f, 1.3605/0.5 = %.4f", c, d));
}

void skewed_suite_check() {
  Stopwatch sw;
  std::vector<std::int64_t> grid = default_n_grid();
  grid.push_back(401);
  std::sort(grid.begin(), grid.end());
  const auto reports = run_skewed_suite(kDeskReps, kSeed, grid);
  const double t = sw.seconds();
  const MethodId opt = MethodId::shi_sd_s3();
  bool ok = t < 1200.0;
  std::string detail;
  for (const auto& rep : reports) {
    const auto& row = rep.row(401);
    const double ln_new = row.cell(opt).ln_rmse;
    const double ln_range = row.cell(MethodId::wan_sd(Scenario::S1)).ln_rmse;
    const double ln_avg = row.cell(MethodId::wan_sd(Scenario::S3)).ln_rmse;
    ok = ok && ln_new < ln_range && ln_new < ln_avg;
    detail += fmt(" %s: %.3f < (%.3f, %.3f);", rep.config.dist.describe().c_str(), ln_new, ln_range, ln_avg);
  }
  report(ok, "skewed suite ordering at n=401", fmt("%.0f s;", t) + detail);
}

void reduction_lattice() {
  StreamRng rng(kSeed, 1000);
  int bitwise = 0, shortcut = 0;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    std::array<double, 5> x;
    for (double& v : x) v = (rng.uniform() - 0.5) * 200;
    std::sort(x.begin(), x.end());
    const auto q = 1 + static_cast<std::int64_t>(rng.uniform() * 250);
    const auto s = FiveNumberSummary::s3(x[0], x[1], x[2], x[3], x[4], 4 * q + 1);
    bitwise += weighted_sd(s, 1.0) == sd_wan_s1(s) && weighted_sd(s, 0.0) == sd_wan_s2(s) &&
               weighted_sd(s, 0.5) == sd_wan_s3(s);
    const double d = std::fabs(sd_optimal_s3(s, SdMode::approx) - sd_optimal_s3(s, SdMode::shortcut));
    worst = std::max(worst, d);
    shortcut += d <= 1e-12;
  }
  report(bitwise == 1000 && shortcut == 1000, "reduction lattice",
         fmt("%d/1000 bitwise reductions, %d/1000 shortcut identities (max |diff| %.2e)", bitwise, shortcut, worst));
}

}  // namespace

int main() {
  MomentCache cache;
  table_reproduction();
  weight_fidelity(cache);
  moment_asymptotics(cache);
  constants();
  reduction_lattice();
  histogram_study();
  rmse_study();
  skewed_suite_check();
  oracle_equivalence(cache);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
