#pragma once

// Mean and SD estimators from a reported five-number summary
// {a, q1, m, q3, b; n} or one of its two partial scenarios:
//   S1 = {a, m, b; n}, S2 = {q1, m, q3; n}, S3 = all five.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fivenum/error.hpp"
#include "fivenum/order_stats.hpp"

namespace fivenum {

enum class Scenario { S1, S2, S3 };

std::string_view to_string(Scenario s) noexcept;

struct FiveNumberSummary {
  std::optional<double> a;   // minimum
  std::optional<double> q1;  // first quartile
  std::optional<double> m;   // median
  std::optional<double> q3;  // third quartile
  std::optional<double> b;   // maximum
  std::optional<std::int64_t> n;

  static FiveNumberSummary s1(double a, double m, double b, std::int64_t n);
  static FiveNumberSummary s2(double q1, double m, double q3, std::int64_t n);
  static FiveNumberSummary s3(double a, double q1, double m, double q3, double b, std::int64_t n);
};

// Validation codes, shared by the CSV converter, the CLI and the service.
namespace codes {
inline constexpr std::string_view missing_n = "missing_n";
inline constexpr std::string_view invalid_n = "invalid_n";
inline constexpr std::string_view n_too_small = "n_too_small";
inline constexpr std::string_view non_finite = "non_finite";
inline constexpr std::string_view not_a_number = "not_a_number";
inline constexpr std::string_view insufficient_summary = "insufficient_summary";
inline constexpr std::string_view order_min_q1 = "order_min_q1";
inline constexpr std::string_view order_q1_median = "order_q1_median";
inline constexpr std::string_view order_median_q3 = "order_median_q3";
inline constexpr std::string_view order_q3_max = "order_q3_max";
inline constexpr std::string_view order_min_median = "order_min_median";
inline constexpr std::string_view order_median_max = "order_median_max";
// Request-level codes of the HTTP service.
inline constexpr std::string_view malformed_json = "malformed_json";
inline constexpr std::string_view malformed_request = "malformed_request";
}  // namespace codes

// Flags attached to a successful estimate.
namespace flags {
inline constexpr std::string_view weight_outside_unit = "weight_outside_unit";
inline constexpr std::string_view radicand_clamped = "radicand_clamped";
}  // namespace flags

/// Scenario implied by which fields are present. Throws ValidationError
/// (insufficient_summary, naming the missing fields) for any other pattern.
Scenario detect_scenario(const FiveNumberSummary& s);

/// Every violated invariant: presence of n, minimum n for the scenario
/// (5 for S1/S3, 4 for S2), finiteness, field pattern and ordering. Ties are
/// allowed. Empty when the summary is valid.
std::vector<Violation> validate(const FiveNumberSummary& s);

enum class Family { hozo, bland, wan, luo, shi_optimal };
enum class Target { mean, sd };

// Identifies one published estimator. Only the combinations implemented in
// this library are constructible.
class MethodId {
 public:
  static MethodId luo_mean(Scenario s);  // S1, S2, S3
  static MethodId bland_mean_s3();
  static MethodId wan_sd(Scenario s);  // S1, S2, S3
  static MethodId hozo_sd_s1();
  static MethodId bland_sd_s3();
  static MethodId shi_sd_s3();

  /// Inverse of label(); nullopt for unknown labels.
  static std::optional<MethodId> from_label(std::string_view label);

  Family family() const noexcept { return family_; }
  Target target() const noexcept { return target_; }
  Scenario scenario() const noexcept { return scenario_; }
  std::string label() const;               // e.g. "luo_mean_s3"
  std::string_view description() const;  // human-readable formula

  friend bool operator==(const MethodId&, const MethodId&) = default;

 private:
  MethodId(Family f, Target t, Scenario s) : family_(f), target_(t), scenario_(s) {}
  Family family_;
  Target target_;
  Scenario scenario_;
};

struct NamedValue {
  std::string label;
  double value;
};

struct EstimateResult {
  double mean = 0.0;
  double sd = 0.0;
  MethodId mean_method = MethodId::luo_mean(Scenario::S3);
  MethodId sd_method = MethodId::shi_sd_s3();
  Scenario scenario = Scenario::S3;
  // Weights and denominators in the order applied. SD weights are labelled
  // "sd.w_range" / "sd.w_iqr" and sum to 1 when both are present.
  std::vector<NamedValue> weights_used;
  // Codes from `flags`, each with a message.
  std::vector<Violation> warnings;
};

/// xi(n) = 2 Phi^{-1}((n - 0.375) / (n + 0.25)); n >= 2.
double xi(std::int64_t n);
/// eta(n) = 2 Phi^{-1}((0.75 n - 0.125) / (n + 0.25)); n >= 1.
double eta(std::int64_t n);

// Individual estimators. Each requires its scenario's fields and n, and
// throws ScenarioError when one is absent. They do not check ordering;
// `estimate` does.
double sd_wan_s1(const FiveNumberSummary& s);  // (b - a) / xi
double sd_wan_s2(const FiveNumberSummary& s);  // (q3 - q1) / eta
double sd_wan_s3(const FiveNumberSummary& s);  // weighted_sd(s, 0.5)

/// w (b - a)/xi + (1 - w)(q3 - q1)/eta; DomainError unless 0 <= w <= 1.
double weighted_sd(const FiveNumberSummary& s, double w);

enum class SdMode { exact, approx, shortcut };

/// The minimum-MSE weighted SD. `exact` uses the quadrature optimal weight
/// (n = 4Q+1 only), `approx` the closed-form weight 1/(1 + 0.07 n^0.6), and
/// `shortcut` the equivalent (b - a)/theta1 + (q3 - q1)/theta2.
double sd_optimal_s3(const FiveNumberSummary& s, SdMode mode, const MomentOptions& opt = {});

/// Hozo et al.'s step rule on {a, m, b}.
double sd_hozo_s1(const FiveNumberSummary& s);

struct BlandSd {
  double value;
  bool clamped;  // radicand was negative (round-off on near-degenerate input)
};
BlandSd sd_bland_s3(const FiveNumberSummary& s);

struct LuoWeights {
  double w1;   // S1: 4 / (4 + n^0.75)
  double w2;   // S2: 0.7 + 0.39 / n
  double w31;  // S3 range weight: 2.2 / (2.2 + n^0.75)
  double w32;  // S3 quartile weight: 0.7 - 0.72 / n^0.55
};
LuoWeights luo_weights(std::int64_t n);

double mean_luo_s1(const FiveNumberSummary& s);
double mean_luo_s2(const FiveNumberSummary& s);
double mean_luo_s3(const FiveNumberSummary& s);
double mean_bland_s3(const FiveNumberSummary& s);  // (a + 2q1 + 2m + 2q3 + b) / 8

/// Recommended pair for the detected scenario: S1 -> (Luo mean, Wan range
/// SD), S2 -> (Luo mean, Wan quartile SD), S3 -> (Luo mean, shortcut optimal
/// SD). Throws ValidationError listing every violation.
EstimateResult estimate(const FiveNumberSummary& s);

}  // namespace fivenum
