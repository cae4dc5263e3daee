#pragma once

// Monte Carlo studies of the SD estimators: RMSE against the sample SD,
// histograms of the range and quartile estimators, and the large-n checks.
//
// Replication r of sample size n always draws from StreamRng(seed, n, r), and
// replications are grouped into 50 contiguous batches that are reduced in
// order, so every report is bitwise reproducible for any thread count.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fivenum/distributions.hpp"
#include "fivenum/estimators.hpp"

namespace fivenum {

inline constexpr int kBatches = 50;

/// {4Q+1 : Q in {1, 2, 3, 5, 8, 13, 21, 35, 50, 80, 110, 150, 200}}.
std::vector<std::int64_t> default_n_grid();

/// The four S3 SD estimators compared in the studies: range-only, quartile
/// only, the equal-weight average and the optimally weighted shortcut.
std::vector<MethodId> default_sd_estimators();

/// Weight on the range component for each studied estimator (1, 0, 0.5, or
/// the closed-form optimal weight for the shortcut). DomainError otherwise.
double range_weight(const MethodId& m, std::int64_t n);

struct SimulationConfig {
  DistributionSpec dist = DistributionSpec::normal(50.0, 17.0);
  std::vector<std::int64_t> n_grid = default_n_grid();
  std::int64_t replications = 100'000;
  std::uint64_t seed = 20200101;
  std::vector<MethodId> estimators = default_sd_estimators();
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Throws ConfigError for an empty grid, n not of the form 4Q+1,
/// replications < kBatches, or an estimator outside default_sd_estimators().
void validate(const SimulationConfig& c);

/// One replication: n variates from `rng`, the summary at ranks
/// {1, Q+1, 2Q+1, 3Q+1, n} and the divisor-(n-1) sample SD.
std::pair<FiveNumberSummary, double> sample_summary(const DistributionSpec& dist, std::int64_t n,
                                                    StreamRng& rng);

struct RmseCell {
  MethodId estimator = MethodId::shi_sd_s3();
  double rmse = 0.0;     // sum (S_i - sigma)^2 / sum (S_i^sam - sigma)^2
  double ln_rmse = 0.0;
  double mc_se = 0.0;    // batch-means standard error of rmse
  double mean_estimate = 0.0;
  // Batch-means SE of rmse(optimal) - rmse(this), paired on replications;
  // zero for the optimal estimator itself or when it is not in the study.
  double se_diff_vs_optimal = 0.0;
};

struct RmseRow {
  std::int64_t n = 0;
  double sample_sd_mse = 0.0;  // mean (S^sam - sigma)^2
  double sample_sd_mean = 0.0;
  std::vector<RmseCell> cells;  // in config.estimators order

  const RmseCell& cell(const MethodId& m) const;
};

struct RmseReport {
  SimulationConfig config;
  std::string kernel;  // ISA of the kernels used (results do not depend on it)
  std::vector<RmseRow> rows;

  const RmseRow& row(std::int64_t n) const;
};

RmseReport run_rmse_study(const SimulationConfig& config);

/// RMSE studies of the four skewed parents on `n_grid`.
std::vector<RmseReport> run_skewed_suite(std::int64_t replications, std::uint64_t seed,
                                         std::vector<std::int64_t> n_grid = default_n_grid(),
                                         unsigned threads = 0);

struct Histogram {
  MethodId estimator = MethodId::wan_sd(Scenario::S1);
  std::vector<double> edges;          // bins + 1 edges spanning [min, max]
  std::vector<std::int64_t> counts;   // sums to the replication count
  double mean = 0.0;
  double variance = 0.0;  // divisor T - 1
  double skewness = 0.0;  // moment coefficient g1
};

struct HistogramRow {
  std::int64_t n = 0;
  Histogram range;  // (b - a) / xi
  Histogram iqr;    // (q3 - q1) / eta
};

struct HistogramReport {
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  int bins = 0;
  std::vector<HistogramRow> rows;
};

/// Standard-normal histograms of the range and quartile estimators.
HistogramReport run_histogram_study(std::span<const std::int64_t> n_list, std::int64_t replications,
                                    std::uint64_t seed, int bins = 50, unsigned threads = 0);

struct AsymptoticReport {
  std::int64_t n = 0;
  std::int64_t replications = 0;
  double n_mse_sample_sd = 0.0;  // n MSE(sample SD) / sigma^2, limit 0.5
  double n_mse_iqr = 0.0;        // n MSE((q3 - q1)/eta) / sigma^2, limit 1.3605
  double iqr_constant = 0.0;     // 2.4758 / (4 Phi^{-1}(0.75)^2)
  double rmse_limit = 0.0;       // 1.3605 / 0.5
  bool sample_sd_ok = false;     // within 10% of 0.5
  bool iqr_ok = false;           // within 10% of 1.3605
  bool iqr_constant_ok = false;  // within 0.001 of 1.3605
  bool rmse_limit_ok = false;    // within 0.001 of 2.721
};

AsymptoticReport asymptotic_checks(std::uint64_t seed, std::int64_t replications = 1'000'000,
                                   std::int64_t n = 801, unsigned threads = 0);

}  // namespace fivenum
