#include <cmath>
#include <limits>

#include "doctest.h"
#include "fivenum/error.hpp"
#include "fivenum/normal.hpp"

using namespace fivenum;

namespace {

// Reference values from mpmath at 40 digits, evaluated at the double inputs.
struct Ref {
  double x;
  double value;
};

constexpr Ref kCdf[] = {{-8.0, 6.2209605742717841235e-16}, {-5.0, 2.8665157187919391167e-7},
                        {-1.5, 0.066807201268858066004},   {0.3, 0.61791142218895263307},
                        {2.0, 0.9772498680518207928},      {7.5, 0.99999999999996809108}};

constexpr Ref kQuantile[] = {{1e-300, -37.047096299361199237}, {1e-20, -9.2623400897984075737},
                             {1e-10, -6.3613409024040562047},  {0.025, -1.9599639845400542355},
                             {0.3, -0.52440051270804078404},   {0.975, 1.9599639845400542355},
                             {0.999999999999999, 7.9414444874159788106}};

constexpr Ref kLogTail[] = {{2.0, -3.7831843336820319488},
                            {10.0, -53.231285150512470578},
                            {20.0, -203.91715537109726394},
                            {37.0, -689.0305855768905936}};

}  // namespace

TEST_CASE("cdf matches reference values to 1e-14 relative") {
  for (const auto& r : kCdf) CHECK(std::fabs(std_normal_cdf(r.x) / r.value - 1.0) <= 1e-14);
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(0.6745) == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("cdf symmetry and monotonicity on |x| <= 8") {
  double prev = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    const double p = std_normal_cdf(x);
    CHECK(std::fabs(p + std_normal_cdf(-x) - 1.0) <= 1e-14);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("pdf: mode, symmetry, derivative of cdf and Stein identity") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(std_normal_pdf(1.0) == std_normal_pdf(-1.0));
  const double h = 1e-5;
  CHECK(std::fabs((std_normal_cdf(0.7 + h) - std_normal_cdf(0.7 - h)) / (2 * h) - std_normal_pdf(0.7)) < 1e-6);
  for (double y : {-2.0, -0.3, 0.5, 1.7}) {
    const double d = (std_normal_pdf(y + h) - std_normal_pdf(y - h)) / (2 * h);
    CHECK(d == doctest::Approx(-y * std_normal_pdf(y)).epsilon(1e-8));
  }
}

TEST_CASE("quantile matches reference values to 1e-12 absolute") {
  for (const auto& r : kQuantile) CHECK(std::fabs(std_normal_quantile(r.x) - r.value) <= 1e-12);
  CHECK(std_normal_quantile(0.5) == 0.0);
  CHECK(std_normal_quantile(0.75) == doctest::Approx(0.6745).epsilon(1e-4));
  const double v = std_normal_quantile((5 - 0.375) / (5 + 0.25));
  CHECK(std::fabs((2 + 0.14 * std::pow(5.0, 0.6)) * v - 2.793) <= 0.001);
}

TEST_CASE("quantile round trip on [1e-10, 1 - 1e-10]") {
  for (double e = -10; e <= -0.31; e += 0.05) {
    for (double p : {std::pow(10.0, e), 1.0 - std::pow(10.0, e)}) {
      CHECK(std::fabs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-12 * std::max(1.0, p));
    }
  }
}

TEST_CASE("quantile tail approaches sqrt(-2 ln x) monotonically") {
  double prev = 0.0;
  for (double x : {1e-4, 1e-8, 1e-12, 1e-16}) {
    // 1 - x is not representable below 1e-16; use the lower tail by symmetry.
    const double ratio = -std_normal_quantile(x) / std::sqrt(-2.0 * std::log(x));
    CHECK(ratio > prev);
    CHECK(ratio < 1.0);
    prev = ratio;
  }
  CHECK(prev > 0.8);
  CHECK(prev < 1.1);
}

TEST_CASE("log_tail accuracy and range") {
  for (const auto& r : kLogTail) CHECK(std::fabs(log_tail(r.x) / r.value - 1.0) <= 1e-10);
  CHECK(log_tail(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(std::fabs(std::exp(log_tail(2.0)) / (1.0 - std_normal_cdf(2.0)) - 1.0) <= 1e-10);
  CHECK(std::isfinite(log_tail(10.0)));
  CHECK(log_tail(10.0) < 0.0);
  CHECK(std::isfinite(log_tail(60.0)));
  CHECK(log_cdf(-37.0) == log_tail(37.0));
}

TEST_CASE("domain errors") {
  const double inf = std::numeric_limits<double>::infinity();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(std_normal_cdf(nan), DomainError);
  CHECK_THROWS_AS(std_normal_pdf(inf), DomainError);
  CHECK_THROWS_AS(log_tail(-inf), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.0), DomainError);
  CHECK_THROWS_AS(std_normal_quantile(1.5), DomainError);
  CHECK_THROWS_AS(Probability(-0.1), DomainError);
  CHECK(Probability(0.25) == 0.25);
}
