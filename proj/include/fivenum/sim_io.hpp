#pragma once

// JSON configuration of the `simulate` subcommand and the CSV / JSON /
// gnuplot outputs of the studies. Schemas are documented in docs/formats.md.

#include <filesystem>
#include <string>
#include <vector>

#include "fivenum/simulator.hpp"
#include "json.hpp"

namespace fivenum {

enum class Study { rmse, histogram, skewed, asymptotic };

struct SimulationRequest {
  Study study = Study::rmse;
  SimulationConfig config;
  int bins = 50;
};

// Replication counts of the published runs.
inline constexpr std::int64_t kFullScaleNormalReps = 2'000'000;
inline constexpr std::int64_t kFullScaleSkewedReps = 500'000;
inline constexpr std::int64_t kFullScaleHistogramReps = 1'000'000;

/// Strict: unknown keys, wrong types and invalid values throw ConfigError.
/// "full_scale": true replaces the replication count with the published one.
SimulationRequest parse_simulation_request(const nlohmann::json& j);
SimulationRequest load_simulation_request(const std::filesystem::path& path);

nlohmann::json to_json(const SimulationConfig& c);

/// distribution,n,estimator,rmse,ln_rmse,mc_se,se_diff_vs_optimal,mean_estimate,true_sd,sample_sd_mse
std::string rmse_csv(const std::vector<RmseReport>& reports);
nlohmann::json rmse_json(const std::vector<RmseReport>& reports);
/// Plots ln RMSE against n, one panel per distribution, reading `csv_name`.
std::string rmse_gnuplot(const std::vector<RmseReport>& reports, const std::string& csv_name);

/// n,estimator,bin,lower,upper,count
std::string histogram_csv(const HistogramReport& r);
nlohmann::json histogram_json(const HistogramReport& r);
std::string histogram_gnuplot(const HistogramReport& r, const std::string& csv_name);

nlohmann::json asymptotic_json(const AsymptoticReport& r);

}  // namespace fivenum
