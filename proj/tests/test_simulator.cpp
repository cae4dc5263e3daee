#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fivenum/distributions.hpp"
#include "fivenum/error.hpp"
#include "fivenum/sim_io.hpp"
#include "fivenum/simulator.hpp"

using namespace fivenum;

namespace {

SimulationConfig small_config() {
  SimulationConfig c;
  c.n_grid = {5, 85};
  c.replications = 20'000;
  c.seed = 123;
  return c;
}

}  // namespace

TEST_CASE("distribution moments and domains") {
  const auto ln = DistributionSpec::lognormal(4, 0.3);
  CHECK(ln.true_sd() == doctest::Approx(std::sqrt((std::exp(0.09) - 1) * std::exp(8.09))).epsilon(1e-14));
  CHECK(ln.true_mean() == doctest::Approx(std::exp(4.045)).epsilon(1e-14));
  CHECK(DistributionSpec::chi_square(10).true_sd() == doctest::Approx(std::sqrt(20.0)));
  CHECK(DistributionSpec::beta(9, 4).true_mean() == doctest::Approx(9.0 / 13));
  CHECK(DistributionSpec::beta(9, 4).true_sd() == doctest::Approx(std::sqrt(36.0 / (169 * 14))));
  CHECK(DistributionSpec::weibull(2, 35).true_mean() == doctest::Approx(35 * std::tgamma(1.5)));
  CHECK(DistributionSpec::normal(50, 17).describe() == "normal(mean=50, sd=17)");
  CHECK(skewed_suite().size() == 4);
  CHECK_THROWS_AS(DistributionSpec::normal(0, 0), DomainError);
  CHECK_THROWS_AS(DistributionSpec::chi_square(-1), DomainError);
  CHECK_THROWS_AS(DistributionSpec::beta(1, 0), DomainError);
  CHECK_THROWS_AS(DistributionSpec::weibull(NAN, 1), DomainError);
}

TEST_CASE("sampled moments match analytic ones") {
  for (const auto& d : {DistributionSpec::normal(50, 17), DistributionSpec::lognormal(4, 0.3),
                        DistributionSpec::chi_square(10), DistributionSpec::beta(9, 4),
                        DistributionSpec::weibull(2, 35)}) {
    StreamRng rng(1, 2);
    std::vector<double> x(200'000);
    d.sample(rng, x, kernels::active());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double sd = kernels::sample_sd(kernels::scalar_table(), x);
    CAPTURE(d.describe());
    CHECK(std::fabs(mean - d.true_mean()) <= 5 * d.true_sd() / std::sqrt(x.size()));
    CHECK(sd == doctest::Approx(d.true_sd()).epsilon(0.01));
  }
}

TEST_CASE("sample summaries are ordered and reproducible") {
  const auto d = DistributionSpec::normal(0, 1);
  for (int r = 0; r < 100; ++r) {
    StreamRng a(9, 21, r), b(9, 21, r);
    const auto [s, sd] = sample_summary(d, 21, a);
    const auto [t, sd2] = sample_summary(d, 21, b);
    CHECK(*s.a <= *s.q1);
    CHECK(*s.q1 <= *s.m);
    CHECK(*s.m <= *s.q3);
    CHECK(*s.q3 <= *s.b);
    CHECK(*s.n == 21);
    CHECK(sd > 0);
    CHECK(*s.b == *t.b);
    CHECK(sd == sd2);
  }
}

TEST_CASE("config validation") {
  SimulationConfig c = small_config();
  CHECK_NOTHROW(validate(c));
  c.n_grid = {};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.n_grid = {6};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = small_config();
  c.replications = 10;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = small_config();
  c.estimators = {MethodId::hozo_sd_s1()};
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(range_weight(MethodId::wan_sd(Scenario::S1), 5) == 1.0);
  CHECK(range_weight(MethodId::wan_sd(Scenario::S2), 5) == 0.0);
  CHECK(range_weight(MethodId::wan_sd(Scenario::S3), 5) == 0.5);
  CHECK(default_n_grid().front() == 5);
  CHECK(default_n_grid().back() == 801);
}

TEST_CASE("RMSE study is bitwise identical across thread counts") {
  SimulationConfig c = small_config();
  c.threads = 1;
  const RmseReport a = run_rmse_study(c);
  c.threads = 3;
  const RmseReport b = run_rmse_study(c);
  CHECK(rmse_json({a}).dump() == rmse_json({b}).dump());
  CHECK(rmse_csv({a}) == rmse_csv({b}));
  REQUIRE(a.rows.size() == 2);
  for (const auto& row : a.rows)
    for (const auto& cell : row.cells) {
      CHECK(cell.rmse > 0);
      CHECK(cell.mc_se > 0);
      CHECK(cell.ln_rmse == doctest::Approx(std::log(cell.rmse)));
    }
}

TEST_CASE("RMSE study orderings at small scale") {
  const RmseReport r = run_rmse_study(small_config());
  const auto& s1 = MethodId::wan_sd(Scenario::S1);
  const auto& s0 = MethodId::wan_sd(Scenario::S2);
  const auto& opt = MethodId::shi_sd_s3();
  CHECK(r.row(5).cell(s1).rmse < r.row(5).cell(s0).rmse);
  for (const auto& row : r.rows)
    for (const auto& cell : row.cells) {
      CHECK(row.cell(opt).rmse <= cell.rmse + 3 * cell.mc_se);
      CHECK(std::fabs(cell.mean_estimate / 17 - 1) <= 0.02);
    }
  CHECK_THROWS(r.row(9));
}

TEST_CASE("unbiasedness of the range and quartile estimators") {
  const std::vector<std::int64_t> ns{5, 401};
  const HistogramReport h = run_histogram_study(ns, 200'000, 77, 40);
  // At n = 5 the range estimator is biased low by 1.4%: E = 2 E[Z_(5)] / xi(5).
  const double se5 = std::sqrt(h.rows[0].range.variance / 200'000);
  CHECK(std::fabs(h.rows[0].range.mean - 2 * 1.1629644736405196 / xi(5)) <= 4 * se5);
  CHECK(std::fabs(h.rows[0].range.mean - 1) <= 0.015);
  CHECK(std::fabs(h.rows[1].iqr.mean - 1) <= 0.005);
  for (const auto& row : h.rows) {
    CHECK(std::accumulate(row.range.counts.begin(), row.range.counts.end(), std::int64_t{0}) == 200'000);
    CHECK(row.range.edges.size() == 41);
  }
  CHECK(h.rows[0].range.variance < h.rows[0].iqr.variance);
  CHECK(std::fabs(h.rows[0].range.skewness) < std::fabs(h.rows[0].iqr.skewness));
  CHECK(h.rows[1].iqr.variance < h.rows[1].range.variance);
}

TEST_CASE("asymptotic constants") {
  const AsymptoticReport r = asymptotic_checks(5, 20'000, 201);
  CHECK(r.iqr_constant_ok);
  CHECK(r.rmse_limit_ok);
  CHECK(r.iqr_constant == doctest::Approx(1.3605).epsilon(0.001));
  CHECK(r.n_mse_sample_sd == doctest::Approx(0.5).epsilon(0.1));
  CHECK(r.n_mse_iqr == doctest::Approx(1.3605).epsilon(0.1));
}

TEST_CASE("skewed suite runs every parent") {
  const auto reports = run_skewed_suite(2'000, 3, {21});
  REQUIRE(reports.size() == 4);
  for (const auto& rep : reports) CHECK(rep.rows.at(0).cells.size() == 4);
}
