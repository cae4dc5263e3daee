#include "fivenum/estimators.hpp"

#include <cmath>
#include <string>

#include "fivenum/normal.hpp"
#include "fivenum/weights.hpp"

namespace fivenum {

namespace {

double need(const std::optional<double>& v, const char* field, const char* who) {
  if (!v) throw ScenarioError(std::string(who) + ": summary has no " + field);
  return *v;
}

std::int64_t need_n(const FiveNumberSummary& s, const char* who) {
  if (!s.n) throw ScenarioError(std::string(who) + ": summary has no n");
  if (*s.n < 1) throw DomainError(std::string(who) + ": n must be positive");
  return *s.n;
}

double dn(std::int64_t n) { return static_cast<double>(n); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void flag_weight(std::vector<Violation>& out, const char* label, double w) {
  if (w < 0.0 || w > 1.0)
    out.push_back({std::string(flags::weight_outside_unit),
                   std::string(label) + " = " + fmt(w) + " lies outside [0, 1]; applied as published"});
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
  }
  return "?";
}

FiveNumberSummary FiveNumberSummary::s1(double a, double m, double b, std::int64_t n) {
  return {a, std::nullopt, m, std::nullopt, b, n};
}

FiveNumberSummary FiveNumberSummary::s2(double q1, double m, double q3, std::int64_t n) {
  return {std::nullopt, q1, m, q3, std::nullopt, n};
}

FiveNumberSummary FiveNumberSummary::s3(double a, double q1, double m, double q3, double b,
                                        std::int64_t n) {
  return {a, q1, m, q3, b, n};
}

// ---------------------------------------------------------------- validation

namespace {

std::optional<Scenario> scenario_of(const FiveNumberSummary& s, std::string* missing) {
  const bool a = s.a.has_value(), q1 = s.q1.has_value(), m = s.m.has_value(),
             q3 = s.q3.has_value(), b = s.b.has_value();
  if (a && q1 && m && q3 && b) return Scenario::S3;
  if (a && m && b && !q1 && !q3) return Scenario::S1;
  if (q1 && m && q3 && !a && !b) return Scenario::S2;
  if (missing) {
    // Name what the closest scenario still needs.
    std::vector<const char*> names;
    const bool lean_s2 = (q1 || q3) && !(a || b);
    const bool lean_s1 = (a || b) && !(q1 || q3);
    if (!m) names.push_back("median");
    if (lean_s2) {
      if (!q1) names.push_back("q1");
      if (!q3) names.push_back("q3");
    } else if (lean_s1) {
      if (!a) names.push_back("min");
      if (!b) names.push_back("max");
    } else {
      if (!a) names.push_back("min");
      if (!q1) names.push_back("q1");
      if (!q3) names.push_back("q3");
      if (!b) names.push_back("max");
    }
    std::string msg = "fields do not form {min, median, max}, {q1, median, q3} or all five";
    if (!names.empty()) {
      msg += "; missing:";
      for (const char* nm : names) msg += std::string(" ") + nm;
    }
    *missing = msg;
  }
  return std::nullopt;
}

}  // namespace

Scenario detect_scenario(const FiveNumberSummary& s) {
  std::string msg;
  if (auto sc = scenario_of(s, &msg)) return *sc;
  throw ValidationError({{std::string(codes::insufficient_summary), msg}});
}

std::vector<Violation> validate(const FiveNumberSummary& s) {
  std::vector<Violation> out;
  auto add = [&](std::string_view code, std::string msg) {
    out.push_back({std::string(code), std::move(msg)});
  };

  std::string pattern_msg;
  const auto sc = scenario_of(s, &pattern_msg);
  if (!sc) add(codes::insufficient_summary, pattern_msg);

  if (!s.n) {
    add(codes::missing_n, "sample size n is required");
  } else if (sc) {
    const std::int64_t min_n = *sc == Scenario::S2 ? 4 : 5;
    if (*s.n < min_n)
      add(codes::n_too_small, "n = " + std::to_string(*s.n) + " but scenario " +
                                  std::string(to_string(*sc)) + " needs n >= " + std::to_string(min_n));
  } else if (*s.n < 4) {
    add(codes::n_too_small, "n = " + std::to_string(*s.n) + " is below the minimum of 4");
  }

  bool finite = true;
  const std::pair<const char*, const std::optional<double>*> fields[] = {
      {"min", &s.a}, {"q1", &s.q1}, {"median", &s.m}, {"q3", &s.q3}, {"max", &s.b}};
  for (const auto& [name, v] : fields)
    if (*v && !std::isfinite(**v)) {
      add(codes::non_finite, std::string(name) + " is not finite");
      finite = false;
    }
  if (!finite) return out;

  auto order = [&](std::string_view code, const char* lo_name, const std::optional<double>& lo,
                   const char* hi_name, const std::optional<double>& hi) {
    if (lo && hi && *lo > *hi)
      add(code, std::string(lo_name) + " (" + fmt(*lo) + ") exceeds " + hi_name + " (" + fmt(*hi) + ")");
  };
  if (s.q1 || s.q3) {
    order(codes::order_min_q1, "min", s.a, "q1", s.q1);
    order(codes::order_q1_median, "q1", s.q1, "median", s.m);
    order(codes::order_median_q3, "median", s.m, "q3", s.q3);
    order(codes::order_q3_max, "q3", s.q3, "max", s.b);
    // Bounds that skip an absent quartile.
    if (!s.q1) order(codes::order_min_median, "min", s.a, "median", s.m);
    if (!s.q3) order(codes::order_median_max, "median", s.m, "max", s.b);
  } else {
    order(codes::order_min_median, "min", s.a, "median", s.m);
    order(codes::order_median_max, "median", s.m, "max", s.b);
  }
  return out;
}

// ----------------------------------------------------------------- method ids

MethodId MethodId::luo_mean(Scenario s) { return {Family::luo, Target::mean, s}; }
MethodId MethodId::bland_mean_s3() { return {Family::bland, Target::mean, Scenario::S3}; }
MethodId MethodId::wan_sd(Scenario s) { return {Family::wan, Target::sd, s}; }
MethodId MethodId::hozo_sd_s1() { return {Family::hozo, Target::sd, Scenario::S1}; }
MethodId MethodId::bland_sd_s3() { return {Family::bland, Target::sd, Scenario::S3}; }
MethodId MethodId::shi_sd_s3() { return {Family::shi_optimal, Target::sd, Scenario::S3}; }

std::optional<MethodId> MethodId::from_label(std::string_view label) {
  const MethodId all[] = {luo_mean(Scenario::S1), luo_mean(Scenario::S2), luo_mean(Scenario::S3),
                          bland_mean_s3(),        wan_sd(Scenario::S1),   wan_sd(Scenario::S2),
                          wan_sd(Scenario::S3),   hozo_sd_s1(),           bland_sd_s3(),
                          shi_sd_s3()};
  for (const auto& id : all)
    if (id.label() == label) return id;
  return std::nullopt;
}

std::string MethodId::label() const {
  std::string family;
  switch (family_) {
    case Family::hozo: family = "hozo"; break;
    case Family::bland: family = "bland"; break;
    case Family::wan: family = "wan"; break;
    case Family::luo: family = "luo"; break;
    case Family::shi_optimal: family = "shi"; break;
  }
  std::string sc(to_string(scenario_));
  sc[0] = 's';
  return family + (target_ == Target::mean ? "_mean_" : "_sd_") + sc;
}

std::string_view MethodId::description() const {
  using S = Scenario;
  if (target_ == Target::mean) {
    if (family_ == Family::bland) return "Bland mean (a + 2q1 + 2m + 2q3 + b) / 8";
    switch (scenario_) {
      case S::S1: return "Luo et al. mean w1 (a + b)/2 + (1 - w1) m";
      case S::S2: return "Luo et al. mean w2 (q1 + q3)/2 + (1 - w2) m";
      case S::S3: return "Luo et al. mean w31 (a + b)/2 + w32 (q1 + q3)/2 + (1 - w31 - w32) m";
    }
  }
  switch (family_) {
    case Family::hozo: return "Hozo et al. step rule on (a, m, b)";
    case Family::bland: return "Bland SD from the five-number summary";
    case Family::shi_optimal: return "optimally weighted SD (b - a)/theta1 + (q3 - q1)/theta2";
    default: break;
  }
  switch (scenario_) {
    case S::S1: return "Wan et al. SD (b - a) / xi(n)";
    case S::S2: return "Wan et al. SD (q3 - q1) / eta(n)";
    case S::S3: return "Wan et al. SD ((b - a)/xi(n) + (q3 - q1)/eta(n)) / 2";
  }
  return "";
}

// ---------------------------------------------------------------- estimators

double xi(std::int64_t n) {
  if (n < 2) throw DomainError("xi: n must be >= 2");
  return 2.0 * std_normal_quantile((dn(n) - 0.375) / (dn(n) + 0.25));
}

double eta(std::int64_t n) {
  if (n < 1) throw DomainError("eta: n must be >= 1");
  return 2.0 * std_normal_quantile((0.75 * dn(n) - 0.125) / (dn(n) + 0.25));
}

double sd_wan_s1(const FiveNumberSummary& s) {
  const double a = need(s.a, "min", "sd_wan_s1"), b = need(s.b, "max", "sd_wan_s1");
  return (b - a) / xi(need_n(s, "sd_wan_s1"));
}

double sd_wan_s2(const FiveNumberSummary& s) {
  const double q1 = need(s.q1, "q1", "sd_wan_s2"), q3 = need(s.q3, "q3", "sd_wan_s2");
  return (q3 - q1) / eta(need_n(s, "sd_wan_s2"));
}

double sd_wan_s3(const FiveNumberSummary& s) { return weighted_sd(s, 0.5); }

double weighted_sd(const FiveNumberSummary& s, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("weighted_sd: weight must lie in [0, 1]");
  // The endpoints reduce exactly to the single-component estimators.
  if (w == 1.0) return sd_wan_s1(s);
  if (w == 0.0) return sd_wan_s2(s);
  return w * sd_wan_s1(s) + (1.0 - w) * sd_wan_s2(s);
}

double sd_optimal_s3(const FiveNumberSummary& s, SdMode mode, const MomentOptions& opt) {
  const std::int64_t n = need_n(s, "sd_optimal_s3");
  switch (mode) {
    case SdMode::exact:
      return weighted_sd(s, exact_optimal_weight(n, opt));
    case SdMode::approx:
      return weighted_sd(s, approx_weight(dn(n)));
    case SdMode::shortcut: {
      const double a = need(s.a, "min", "sd_optimal_s3"), b = need(s.b, "max", "sd_optimal_s3");
      const double q1 = need(s.q1, "q1", "sd_optimal_s3"), q3 = need(s.q3, "q3", "sd_optimal_s3");
      const ShortcutCoefficients t = shortcut_coefficients(n);
      return (b - a) / t.theta1 + (q3 - q1) / t.theta2;
    }
  }
  throw DomainError("sd_optimal_s3: unknown mode");
}

double sd_hozo_s1(const FiveNumberSummary& s) {
  const double a = need(s.a, "min", "sd_hozo_s1"), m = need(s.m, "median", "sd_hozo_s1"),
               b = need(s.b, "max", "sd_hozo_s1");
  const std::int64_t n = need_n(s, "sd_hozo_s1");
  if (n <= 15) {
    const double skew = a - 2.0 * m + b;
    return std::sqrt(((b - a) * (b - a) + skew * skew / 4.0) / 12.0);
  }
  if (n <= 70) return (b - a) / 4.0;
  return (b - a) / 6.0;
}

BlandSd sd_bland_s3(const FiveNumberSummary& s) {
  const char* who = "sd_bland_s3";
  const double a = need(s.a, "min", who), q1 = need(s.q1, "q1", who), m = need(s.m, "median", who),
               q3 = need(s.q3, "q3", who), b = need(s.b, "max", who);
  // The formula is location invariant; centring on the median keeps the
  // cancellation between its three terms small.
  const double A = a - m, Q1 = q1 - m, Q3 = q3 - m, B = b - m;
  const double lin = A + 2.0 * Q1 + 2.0 * Q3 + B;
  const double radicand = (A * A + 2.0 * Q1 * Q1 + 2.0 * Q3 * Q3 + B * B) / 16.0 +
                          (A * Q1 + Q3 * B) / 8.0 - lin * lin / 64.0;
  if (radicand < 0.0) return {0.0, true};
  return {std::sqrt(radicand), false};
}

LuoWeights luo_weights(std::int64_t n) {
  if (n < 1) throw DomainError("luo_weights: n must be positive");
  const double n75 = std::pow(dn(n), 0.75);
  return {4.0 / (4.0 + n75), 0.7 + 0.39 / dn(n), 2.2 / (2.2 + n75), 0.7 - 0.72 / std::pow(dn(n), 0.55)};
}

double mean_luo_s1(const FiveNumberSummary& s) {
  const double a = need(s.a, "min", "mean_luo_s1"), m = need(s.m, "median", "mean_luo_s1"),
               b = need(s.b, "max", "mean_luo_s1");
  const double w = luo_weights(need_n(s, "mean_luo_s1")).w1;
  return w * (a + b) / 2.0 + (1.0 - w) * m;
}

double mean_luo_s2(const FiveNumberSummary& s) {
  const double q1 = need(s.q1, "q1", "mean_luo_s2"), m = need(s.m, "median", "mean_luo_s2"),
               q3 = need(s.q3, "q3", "mean_luo_s2");
  const double w = luo_weights(need_n(s, "mean_luo_s2")).w2;
  return w * (q1 + q3) / 2.0 + (1.0 - w) * m;
}

double mean_luo_s3(const FiveNumberSummary& s) {
  const char* who = "mean_luo_s3";
  const double a = need(s.a, "min", who), q1 = need(s.q1, "q1", who), m = need(s.m, "median", who),
               q3 = need(s.q3, "q3", who), b = need(s.b, "max", who);
  const LuoWeights w = luo_weights(need_n(s, who));
  return w.w31 * (a + b) / 2.0 + w.w32 * (q1 + q3) / 2.0 + (1.0 - w.w31 - w.w32) * m;
}

double mean_bland_s3(const FiveNumberSummary& s) {
  const char* who = "mean_bland_s3";
  const double a = need(s.a, "min", who), q1 = need(s.q1, "q1", who), m = need(s.m, "median", who),
               q3 = need(s.q3, "q3", who), b = need(s.b, "max", who);
  return (a + 2.0 * q1 + 2.0 * m + 2.0 * q3 + b) / 8.0;
}

EstimateResult estimate(const FiveNumberSummary& s) {
  if (auto v = validate(s); !v.empty()) throw ValidationError(std::move(v));
  const Scenario sc = detect_scenario(s);
  const std::int64_t n = *s.n;
  const LuoWeights lw = luo_weights(n);

  EstimateResult r;
  r.scenario = sc;
  r.mean_method = MethodId::luo_mean(sc);
  auto& w = r.weights_used;
  switch (sc) {
    case Scenario::S1:
      r.mean = mean_luo_s1(s);
      r.sd = sd_wan_s1(s);
      r.sd_method = MethodId::wan_sd(sc);
      w = {{"mean.w1", lw.w1}, {"sd.xi", xi(n)}};
      flag_weight(r.warnings, "w1", lw.w1);
      break;
    case Scenario::S2:
      r.mean = mean_luo_s2(s);
      r.sd = sd_wan_s2(s);
      r.sd_method = MethodId::wan_sd(sc);
      w = {{"mean.w2", lw.w2}, {"sd.eta", eta(n)}};
      flag_weight(r.warnings, "w2", lw.w2);
      break;
    case Scenario::S3: {
      r.mean = mean_luo_s3(s);
      r.sd = sd_optimal_s3(s, SdMode::shortcut);
      r.sd_method = MethodId::shi_sd_s3();
      const double wr = approx_weight(static_cast<double>(n));
      const ShortcutCoefficients t = shortcut_coefficients(n);
      w = {{"mean.w31", lw.w31}, {"mean.w32", lw.w32}, {"sd.w_range", wr},
           {"sd.w_iqr", 1.0 - wr}, {"sd.xi", xi(n)},   {"sd.eta", eta(n)},
           {"sd.theta1", t.theta1}, {"sd.theta2", t.theta2}};
      flag_weight(r.warnings, "w31", lw.w31);
      flag_weight(r.warnings, "w32", lw.w32);
      flag_weight(r.warnings, "1 - w31 - w32", 1.0 - lw.w31 - lw.w32);
      break;
    }
  }
  return r;
}

}  // namespace fivenum
