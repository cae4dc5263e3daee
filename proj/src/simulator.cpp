#include "fivenum/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "fivenum/error.hpp"
#include "fivenum/normal.hpp"
#include "fivenum/order_stats.hpp"
#include "fivenum/weights.hpp"

namespace fivenum {

namespace {

enum Est { kRange, kIqr, kAverage, kOptimal, kEstCount };

int est_index(const MethodId& m) {
  if (m == MethodId::wan_sd(Scenario::S1)) return kRange;
  if (m == MethodId::wan_sd(Scenario::S2)) return kIqr;
  if (m == MethodId::wan_sd(Scenario::S3)) return kAverage;
  if (m == MethodId::shi_sd_s3()) return kOptimal;
  return -1;
}

// Neumaier-compensated running sum.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;
  void add(double x) {
    const double t = s + x;
    c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct Chunk {
  std::int64_t first_rep;
  std::size_t count;
  const double* est[kEstCount];
  const double* sample_sd;
};

unsigned worker_count(unsigned requested) {
  const unsigned t = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::min<unsigned>(t, kBatches);
}

std::array<double, 5> draw(const DistributionSpec& dist, std::int64_t n, StreamRng& rng,
                           const kernels::KernelTable& k, std::vector<double>& x, double& sd) {
  x.resize(static_cast<std::size_t>(n));
  dist.sample(rng, x, k);
  sd = kernels::sample_sd(k, x);
  return select_summary_ranks(x);
}

// Runs `reps` replications of size n in kBatches contiguous batches and hands
// each chunk of estimates to on_chunk(batch, chunk). Batches may run on
// different threads; on_chunk must only touch per-batch state.
template <class F>
void run_batches(const DistributionSpec& dist, std::int64_t n, std::int64_t reps, std::uint64_t seed,
                 unsigned threads, F&& on_chunk) {
  const kernels::KernelTable& k = kernels::active();
  const ShortcutCoefficients t = shortcut_coefficients(n);
  const kernels::SdCoefficients coef{xi(n), eta(n), t.theta1, t.theta2};

  auto run_batch = [&](int bi) {
    const std::int64_t first = reps * bi / kBatches;
    const std::int64_t last = reps * (bi + 1) / kBatches;
    constexpr std::size_t kChunk = 256;
    std::vector<double> x;
    std::vector<double> cols(kChunk * 9);
    double* a = cols.data();
    double* q1 = a + kChunk;
    double* q3 = q1 + kChunk;
    double* b = q3 + kChunk;
    double* sam = b + kChunk;
    double* est[kEstCount] = {sam + kChunk, sam + 2 * kChunk, sam + 3 * kChunk, sam + 4 * kChunk};
    for (std::int64_t r0 = first; r0 < last; r0 += static_cast<std::int64_t>(kChunk)) {
      const auto count = static_cast<std::size_t>(std::min<std::int64_t>(kChunk, last - r0));
      for (std::size_t j = 0; j < count; ++j) {
        StreamRng rng(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r0) + j);
        const auto s = draw(dist, n, rng, k, x, sam[j]);
        a[j] = s[0];
        q1[j] = s[1];
        q3[j] = s[3];
        b[j] = s[4];
      }
      k.sd_estimates(a, q1, q3, b, count, coef, est[kRange], est[kIqr], est[kAverage], est[kOptimal]);
      on_chunk(bi, Chunk{r0, count, {est[0], est[1], est[2], est[3]}, sam});
    }
  };

  std::atomic<int> next{0};
  auto work = [&] {
    for (int bi; (bi = next.fetch_add(1)) < kBatches;) run_batch(bi);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < worker_count(threads); ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

struct BatchSums {
  CompensatedSum err[kEstCount];
  CompensatedSum sum[kEstCount];
  CompensatedSum sam_err;
  CompensatedSum sam_sum;
};

double batch_se(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double nb = static_cast<double>(v.size());
  return std::sqrt(ss / (nb - 1.0) / nb);
}

RmseRow rmse_row(const SimulationConfig& c, std::int64_t n) {
  const double sigma = c.dist.true_sd();
  std::vector<BatchSums> sums(kBatches);
  run_batches(c.dist, n, c.replications, c.seed, c.threads, [&](int bi, const Chunk& ch) {
    BatchSums& s = sums[static_cast<std::size_t>(bi)];
    for (std::size_t j = 0; j < ch.count; ++j) {
      for (int e = 0; e < kEstCount; ++e) {
        const double v = ch.est[e][j];
        s.err[e].add((v - sigma) * (v - sigma));
        s.sum[e].add(v);
      }
      const double v = ch.sample_sd[j];
      s.sam_err.add((v - sigma) * (v - sigma));
      s.sam_sum.add(v);
    }
  });

  BatchSums total;
  for (const auto& s : sums) {
    for (int e = 0; e < kEstCount; ++e) {
      total.err[e].add(s.err[e].value());
      total.sum[e].add(s.sum[e].value());
    }
    total.sam_err.add(s.sam_err.value());
    total.sam_sum.add(s.sam_sum.value());
  }

  const double T = static_cast<double>(c.replications);
  RmseRow row;
  row.n = n;
  row.sample_sd_mse = total.sam_err.value() / T;
  row.sample_sd_mean = total.sam_sum.value() / T;
  auto batch_ratio = [&](int e, std::size_t bi) {
    return sums[bi].err[e].value() / sums[bi].sam_err.value();
  };
  const bool has_optimal = std::any_of(c.estimators.begin(), c.estimators.end(),
                                       [](const MethodId& m) { return est_index(m) == kOptimal; });
  for (const MethodId& m : c.estimators) {
    const int e = est_index(m);
    RmseCell cell;
    cell.estimator = m;
    cell.rmse = total.err[e].value() / total.sam_err.value();
    cell.ln_rmse = std::log(cell.rmse);
    cell.mean_estimate = total.sum[e].value() / T;
    std::vector<double> r(kBatches), d(kBatches);
    for (std::size_t bi = 0; bi < sums.size(); ++bi) {
      r[bi] = batch_ratio(e, bi);
      d[bi] = batch_ratio(kOptimal, bi) - r[bi];
    }
    cell.mc_se = batch_se(r);
    if (has_optimal && e != kOptimal) cell.se_diff_vs_optimal = batch_se(d);
    row.cells.push_back(cell);
  }
  return row;
}

Histogram make_histogram(const MethodId& id, const std::vector<double>& v, int bins) {
  Histogram h;
  h.estimator = id;
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it, hi = *hi_it;
  const double width = (hi - lo) / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) h.edges[static_cast<std::size_t>(k)] = k == bins ? hi : lo + width * k;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  CompensatedSum sum;
  for (double x : v) {
    int k = width > 0.0 ? static_cast<int>((x - lo) / width) : 0;
    k = std::clamp(k, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(k)];
    sum.add(x);
  }
  const double T = static_cast<double>(v.size());
  h.mean = sum.value() / T;
  CompensatedSum m2, m3;
  for (double x : v) {
    const double d = x - h.mean;
    m2.add(d * d);
    m3.add(d * d * d);
  }
  h.variance = m2.value() / (T - 1.0);
  const double pm2 = m2.value() / T;
  h.skewness = pm2 > 0.0 ? (m3.value() / T) / std::pow(pm2, 1.5) : 0.0;
  return h;
}

}  // namespace

std::vector<std::int64_t> default_n_grid() {
  std::vector<std::int64_t> grid;
  for (std::int64_t q : {1, 2, 3, 5, 8, 13, 21, 35, 50, 80, 110, 150, 200}) grid.push_back(4 * q + 1);
  return grid;
}

std::vector<MethodId> default_sd_estimators() {
  return {MethodId::wan_sd(Scenario::S1), MethodId::wan_sd(Scenario::S2),
          MethodId::wan_sd(Scenario::S3), MethodId::shi_sd_s3()};
}

double range_weight(const MethodId& m, std::int64_t n) {
  switch (est_index(m)) {
    case kRange: return 1.0;
    case kIqr: return 0.0;
    case kAverage: return 0.5;
    case kOptimal: return approx_weight(static_cast<double>(n));
    default: throw DomainError("range_weight: " + m.label() + " is not a studied SD estimator");
  }
}

void validate(const SimulationConfig& c) {
  if (c.n_grid.empty()) throw ConfigError("simulation: n_grid is empty");
  for (std::int64_t n : c.n_grid)
    if (n < 5 || (n - 1) % 4 != 0)
      throw ConfigError("simulation: n = " + std::to_string(n) + " is not of the form 4Q+1");
  if (c.replications < kBatches)
    throw ConfigError("simulation: replications must be at least " + std::to_string(kBatches));
  if (c.estimators.empty()) throw ConfigError("simulation: no estimators selected");
  for (const auto& m : c.estimators)
    if (est_index(m) < 0) throw ConfigError("simulation: unsupported estimator " + m.label());
}

std::pair<FiveNumberSummary, double> sample_summary(const DistributionSpec& dist, std::int64_t n,
                                                    StreamRng& rng) {
  quartile_step(n);
  std::vector<double> x;
  double sd = 0.0;
  const auto s = draw(dist, n, rng, kernels::active(), x, sd);
  return {FiveNumberSummary::s3(s[0], s[1], s[2], s[3], s[4], n), sd};
}

const RmseCell& RmseRow::cell(const MethodId& m) const {
  for (const auto& c : cells)
    if (c.estimator == m) return c;
  throw DomainError("RmseRow: estimator " + m.label() + " not in report");
}

const RmseRow& RmseReport::row(std::int64_t n) const {
  for (const auto& r : rows)
    if (r.n == n) return r;
  throw DomainError("RmseReport: n = " + std::to_string(n) + " not in report");
}

RmseReport run_rmse_study(const SimulationConfig& config) {
  validate(config);
  RmseReport rep;
  rep.config = config;
  rep.kernel = std::string(kernels::active().name);
  for (std::int64_t n : config.n_grid) rep.rows.push_back(rmse_row(config, n));
  return rep;
}

std::vector<RmseReport> run_skewed_suite(std::int64_t replications, std::uint64_t seed,
                                         std::vector<std::int64_t> n_grid, unsigned threads) {
  std::vector<RmseReport> out;
  for (const auto& dist : skewed_suite()) {
    SimulationConfig c;
    c.dist = dist;
    c.n_grid = n_grid;
    c.replications = replications;
    c.seed = seed;
    c.threads = threads;
    out.push_back(run_rmse_study(c));
  }
  return out;
}

HistogramReport run_histogram_study(std::span<const std::int64_t> n_list, std::int64_t replications,
                                    std::uint64_t seed, int bins, unsigned threads) {
  if (n_list.empty()) throw ConfigError("histogram study: empty n list");
  if (bins < 1) throw ConfigError("histogram study: bins must be positive");
  SimulationConfig check;
  check.n_grid.assign(n_list.begin(), n_list.end());
  check.replications = replications;
  validate(check);

  HistogramReport rep;
  rep.replications = replications;
  rep.seed = seed;
  rep.bins = bins;
  const auto dist = DistributionSpec::normal(0.0, 1.0);
  for (std::int64_t n : n_list) {
    std::vector<double> range(static_cast<std::size_t>(replications));
    std::vector<double> iqr(range.size());
    run_batches(dist, n, replications, seed, threads, [&](int, const Chunk& ch) {
      std::copy_n(ch.est[kRange], ch.count, range.begin() + ch.first_rep);
      std::copy_n(ch.est[kIqr], ch.count, iqr.begin() + ch.first_rep);
    });
    rep.rows.push_back({n, make_histogram(MethodId::wan_sd(Scenario::S1), range, bins),
                        make_histogram(MethodId::wan_sd(Scenario::S2), iqr, bins)});
  }
  return rep;
}

AsymptoticReport asymptotic_checks(std::uint64_t seed, std::int64_t replications, std::int64_t n,
                                   unsigned threads) {
  SimulationConfig check;
  check.n_grid = {n};
  check.replications = replications;
  validate(check);

  std::vector<BatchSums> sums(kBatches);
  run_batches(DistributionSpec::normal(0.0, 1.0), n, replications, seed, threads,
              [&](int bi, const Chunk& ch) {
                BatchSums& s = sums[static_cast<std::size_t>(bi)];
                for (std::size_t j = 0; j < ch.count; ++j) {
                  const double e = ch.est[kIqr][j] - 1.0;
                  const double sam = ch.sample_sd[j] - 1.0;
                  s.err[kIqr].add(e * e);
                  s.sam_err.add(sam * sam);
                }
              });
  CompensatedSum iqr, sam;
  for (const auto& s : sums) {
    iqr.add(s.err[kIqr].value());
    sam.add(s.sam_err.value());
  }

  AsymptoticReport r;
  r.n = n;
  r.replications = replications;
  const double scale = static_cast<double>(n) / static_cast<double>(replications);
  r.n_mse_sample_sd = sam.value() * scale;
  r.n_mse_iqr = iqr.value() * scale;
  const double z75 = std_normal_quantile(0.75);
  r.iqr_constant = 2.4758 / (4.0 * z75 * z75);
  r.rmse_limit = 1.3605 / 0.5;
  r.sample_sd_ok = std::fabs(r.n_mse_sample_sd / 0.5 - 1.0) <= 0.10;
  r.iqr_ok = std::fabs(r.n_mse_iqr / 1.3605 - 1.0) <= 0.10;
  r.iqr_constant_ok = std::fabs(r.iqr_constant - 1.3605) <= 0.001;
  r.rmse_limit_ok = std::fabs(r.rmse_limit - 2.721) <= 0.001;
  return r;
}

}  // namespace fivenum
