#include <cmath>
#include <vector>

#include "doctest.h"
#include "fivenum/error.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/power_fit.hpp"
#include "fivenum/weights.hpp"

using namespace fivenum;

TEST_CASE("closed-form weight") {
  CHECK(approx_J(85) == doctest::Approx(0.07 * std::pow(85.0, 0.6)));
  CHECK(approx_weight(5) == doctest::Approx(0.845).epsilon(1e-3));
  CHECK(std::fabs(approx_weight(85) - 0.498) <= 1e-3);
  CHECK(approx_weight(1e12) < 1e-5);
}

TEST_CASE("shortcut coefficients against published rows") {
  struct Row {
    std::int64_t n;
    double t1, t2;
  };
  for (const Row& r : {Row{5, 2.793, 6.403}, Row{85, 9.793, 2.644}, Row{401, 21.004, 1.871}}) {
    const auto c = shortcut_coefficients(r.n);
    CHECK(std::fabs(c.theta1 - r.t1) <= 1e-3);
    CHECK(std::fabs(c.theta2 - r.t2) <= 1e-3);
    // theta1 = 2 xi / (2 w) and theta2 = 2 eta / (2 (1 - w)).
    const double w = approx_weight(static_cast<double>(r.n));
    CHECK(c.theta1 == doctest::Approx(xi(r.n) / w).epsilon(1e-13));
    CHECK(c.theta2 == doctest::Approx(eta(r.n) / (1 - w)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(shortcut_coefficients(1), DomainError);
}

TEST_CASE("table generation") {
  const auto one = generate_table(1);
  REQUIRE(one.size() == 1);
  CHECK(round_half_away(one[0].theta1, 3) == 2.793);
  CHECK(round_half_away(one[0].theta2, 3) == 6.403);
  CHECK_FALSE(one[0].w_exact.has_value());

  const auto rows = generate_table(100);
  REQUIRE(rows.size() == 100);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].n == 4 * rows[k].q + 1);
    CHECK(rows[k].theta1 > rows[k - 1].theta1);
  }
  CHECK_THROWS_AS(generate_table(0), DomainError);

  const std::string csv = table_csv(one);
  CHECK(csv == "Q,n,theta1,theta2,w_exact,w_approx\n1,5,2.793,6.403,,0.844697\n");
}

TEST_CASE("rounding half away from zero on the decimal expansion") {
  CHECK(round_half_away(2.0245, 3) == 2.025);
  CHECK(round_half_away(-2.0245, 3) == -2.025);
  CHECK(round_half_away(2.0244999, 3) == 2.024);
  CHECK(round_half_away(1.5, 0) == 2.0);
  CHECK(round_half_away(-0.0004, 3) == 0.0);
}

TEST_CASE("exact weights") {
  const double J85 = exact_J(85);
  CHECK(J85 == doctest::Approx(1.0).epsilon(0.05));
  CHECK(exact_J(5) < J85);
  const double w85 = exact_optimal_weight(85);
  CHECK(std::fabs(w85 - 0.5) <= 0.03);
  CHECK(std::fabs(w85 - 1 / (1 + J85)) <= 1e-12);
  const double w401 = exact_optimal_weight(401);
  CHECK(w401 < w85);
  CHECK(std::fabs(w401 - approx_weight(401)) <= 0.03);
  CHECK(exact_J(summary_moments(85)) == J85);
  CHECK_THROWS_AS(exact_J(86), DomainError);
}

TEST_CASE("optimal weight decays like ln(n)/sqrt(n)") {
  for (std::int64_t q : {10, 25, 50, 100}) {
    const auto n = 4 * q + 1;
    const double scaled = std::sqrt(static_cast<double>(n)) * exact_optimal_weight(n) / std::log(static_cast<double>(n));
    CAPTURE(n);
    CHECK(scaled > 0.5);
    CHECK(scaled < 2.0);
  }
}

TEST_CASE("power-law fit recovers an exact model") {
  std::vector<PowerSample> s;
  for (int q = 1; q <= 100; ++q) {
    const double n = 4.0 * q + 1;
    s.push_back({n, 0.07 * std::pow(n, 0.6)});
  }
  const PowerLawFit f = fit_power_law(s);
  CHECK_FALSE(f.constant_only);
  CHECK(std::fabs(f.c1 - 0.07) <= 1e-6);
  CHECK(std::fabs(f.c2 - 0.6) <= 1e-6);
  CHECK(std::fabs(f.c0) <= 1e-6);
  CHECK(f.residual_norm <= 1e-8);
}

TEST_CASE("power-law fit on exact J") {
  std::vector<PowerSample> s;
  for (int q = 1; q <= 100; q += 3) s.push_back({4.0 * q + 1, exact_J(4 * q + 1)});
  const PowerLawFit f = fit_power_law(s);
  CHECK_FALSE(f.constant_only);
  CHECK(f.c2 > 0.5);
  CHECK(f.c2 < 0.7);
  CHECK(f.c1 == doctest::Approx(0.07).epsilon(0.3));
}

TEST_CASE("power-law fit falls back to a constant") {
  std::vector<PowerSample> s{{5, 2.0}, {9, 2.0}, {13, 2.0}, {17, 2.0}};
  const PowerLawFit f = fit_power_law(s);
  CHECK(f.constant_only);
  CHECK(f.c0 == doctest::Approx(2.0));
  CHECK(f.c1 == 0.0);
  CHECK(f.c2 == 0.0);
  CHECK_FALSE(f.warning.empty());

  CHECK_THROWS_AS(fit_power_law(std::vector<PowerSample>{{5, 1}, {5, 2}, {9, 3}}), FitError);
  CHECK_THROWS_AS(fit_power_law(std::vector<PowerSample>{{5, 1}, {9, NAN}, {13, 3}}), FitError);
  CHECK_THROWS_AS(fit_power_law(std::vector<PowerSample>{{-5, 1}, {9, 2}, {13, 3}}), FitError);
}
