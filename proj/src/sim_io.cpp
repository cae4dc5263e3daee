#include "fivenum/sim_io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "fivenum/error.hpp"

namespace fivenum {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double get_number(const json& j, const char* key, const char* where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError(std::string(where) + ": missing '" + key + "'");
  if (!it->is_number()) throw ConfigError(std::string(where) + ": '" + key + "' must be a number");
  return it->get<double>();
}

std::int64_t get_count(const json& v, const std::string& what) {
  if (v.is_number_unsigned() || v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float() && v.get<double>() == static_cast<double>(static_cast<std::int64_t>(v.get<double>())))
    return static_cast<std::int64_t>(v.get<double>());
  throw ConfigError(what + " must be a whole number");
}

DistributionSpec parse_distribution(const json& j) {
  if (!j.is_object()) throw ConfigError("distribution must be an object");
  const auto fam = j.find("family");
  if (fam == j.end() || !fam->is_string()) throw ConfigError("distribution: missing 'family'");
  const std::string f = fam->get<std::string>();
  std::set<std::string> allowed{"family"};
  auto check_keys = [&] {
    for (const auto& [k, v] : j.items())
      if (!allowed.count(k)) throw ConfigError("distribution: unknown key '" + k + "' for " + f);
  };
  try {
    if (f == "normal") {
      allowed.insert({"mean", "sd"});
      check_keys();
      return DistributionSpec::normal(get_number(j, "mean", "normal"), get_number(j, "sd", "normal"));
    }
    if (f == "lognormal") {
      allowed.insert({"mu", "sigma"});
      check_keys();
      return DistributionSpec::lognormal(get_number(j, "mu", "lognormal"),
                                         get_number(j, "sigma", "lognormal"));
    }
    if (f == "chi_square") {
      allowed.insert("df");
      check_keys();
      return DistributionSpec::chi_square(get_number(j, "df", "chi_square"));
    }
    if (f == "beta") {
      allowed.insert({"alpha", "beta"});
      check_keys();
      return DistributionSpec::beta(get_number(j, "alpha", "beta"), get_number(j, "beta", "beta"));
    }
    if (f == "weibull") {
      allowed.insert({"shape", "scale"});
      check_keys();
      return DistributionSpec::weibull(get_number(j, "shape", "weibull"),
                                       get_number(j, "scale", "weibull"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("distribution: unknown family '" + f + "'");
}

json distribution_json(const DistributionSpec& d) {
  json j{{"family", std::string(to_string(d.family()))}};
  const auto names = d.param_names();
  for (std::size_t k = 0; k < d.param_count(); ++k) j[std::string(names[k])] = d.params()[k];
  return j;
}

std::string study_name(Study s) {
  switch (s) {
    case Study::rmse: return "rmse";
    case Study::histogram: return "histogram";
    case Study::skewed: return "skewed";
    case Study::asymptotic: return "asymptotic";
  }
  return "?";
}

}  // namespace

SimulationRequest parse_simulation_request(const json& j) {
  if (!j.is_object()) throw ConfigError("simulation config must be a JSON object");
  static const std::set<std::string> keys{"study",     "distribution", "n_grid",  "replications", "seed",
                                          "estimators", "bins",        "threads", "full_scale"};
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) throw ConfigError("simulation config: unknown key '" + k + "'");

  SimulationRequest r;
  if (const auto it = j.find("study"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("study must be a string");
    const std::string s = it->get<std::string>();
    if (s == "rmse") r.study = Study::rmse;
    else if (s == "histogram") r.study = Study::histogram;
    else if (s == "skewed") r.study = Study::skewed;
    else if (s == "asymptotic") r.study = Study::asymptotic;
    else throw ConfigError("study must be rmse, histogram, skewed or asymptotic");
  }
  SimulationConfig& c = r.config;
  if (const auto it = j.find("distribution"); it != j.end()) c.dist = parse_distribution(*it);
  if (const auto it = j.find("n_grid"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("n_grid must be an array");
    c.n_grid.clear();
    for (const auto& v : *it) c.n_grid.push_back(get_count(v, "n_grid entry"));
  }
  if (const auto it = j.find("replications"); it != j.end()) c.replications = get_count(*it, "replications");
  if (const auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0))
      throw ConfigError("seed must be a non-negative integer");
    c.seed = it->get<std::uint64_t>();
  }
  if (const auto it = j.find("estimators"); it != j.end()) {
    if (!it->is_array()) throw ConfigError("estimators must be an array of labels");
    c.estimators.clear();
    for (const auto& v : *it) {
      if (!v.is_string()) throw ConfigError("estimators must be an array of labels");
      const auto id = MethodId::from_label(v.get<std::string>());
      if (!id) throw ConfigError("unknown estimator '" + v.get<std::string>() + "'");
      c.estimators.push_back(*id);
    }
  }
  if (const auto it = j.find("bins"); it != j.end()) r.bins = static_cast<int>(get_count(*it, "bins"));
  if (const auto it = j.find("threads"); it != j.end())
    c.threads = static_cast<unsigned>(get_count(*it, "threads"));
  if (const auto it = j.find("full_scale"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigError("full_scale must be true or false");
    if (it->get<bool>()) {
      switch (r.study) {
        case Study::rmse: c.replications = kFullScaleNormalReps; break;
        case Study::skewed: c.replications = kFullScaleSkewedReps; break;
        case Study::histogram: c.replications = kFullScaleHistogramReps; break;
        case Study::asymptotic: break;
      }
    }
  }
  if (r.bins < 1) throw ConfigError("bins must be positive");
  validate(c);
  return r;
}

SimulationRequest load_simulation_request(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError(path.string() + " is not valid JSON");
  return parse_simulation_request(j);
}

json to_json(const SimulationConfig& c) {
  json est = json::array();
  for (const auto& m : c.estimators) est.push_back(m.label());
  return {{"distribution", distribution_json(c.dist)},
          {"true_mean", c.dist.true_mean()},
          {"true_sd", c.dist.true_sd()},
          {"n_grid", c.n_grid},
          {"replications", c.replications},
          {"seed", c.seed},
          {"estimators", est},
          {"batches", kBatches}};
}

std::string rmse_csv(const std::vector<RmseReport>& reports) {
  std::string out =
      "distribution,n,estimator,rmse,ln_rmse,mc_se,se_diff_vs_optimal,mean_estimate,true_sd,sample_sd_mse\n";
  for (const auto& rep : reports)
    for (const auto& row : rep.rows)
      for (const auto& c : row.cells)
        out += std::string(to_string(rep.config.dist.family())) + "," + std::to_string(row.n) + "," +
               c.estimator.label() + "," + num(c.rmse) + "," + num(c.ln_rmse) + "," + num(c.mc_se) + "," +
               num(c.se_diff_vs_optimal) + "," + num(c.mean_estimate) + "," +
               num(rep.config.dist.true_sd()) + "," + num(row.sample_sd_mse) + "\n";
  return out;
}

json rmse_json(const std::vector<RmseReport>& reports) {
  json out = json::array();
  for (const auto& rep : reports) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
      json cells = json::array();
      for (const auto& c : row.cells)
        cells.push_back({{"estimator", c.estimator.label()},
                         {"rmse", c.rmse},
                         {"ln_rmse", c.ln_rmse},
                         {"mc_se", c.mc_se},
                         {"se_diff_vs_optimal", c.se_diff_vs_optimal},
                         {"mean_estimate", c.mean_estimate}});
      rows.push_back({{"n", row.n},
                      {"sample_sd_mse", row.sample_sd_mse},
                      {"sample_sd_mean", row.sample_sd_mean},
                      {"estimators", cells}});
    }
    out.push_back({{"study", "rmse"}, {"config", to_json(rep.config)}, {"kernel", rep.kernel}, {"rows", rows}});
  }
  return out;
}

std::string rmse_gnuplot(const std::vector<RmseReport>& reports, const std::string& csv_name) {
  std::string out = "# ln RMSE of the SD estimators against n\n"
                    "set datafile separator ','\n"
                    "set key autotitle columnhead\n"
                    "set logscale x\n"
                    "set xlabel 'n'\nset ylabel 'ln RMSE'\n"
                    "set terminal pngcairo size 1200," +
                    std::to_string(400 * ((reports.size() + 1) / 2)) + "\nset output 'rmse.png'\n" +
                    "set multiplot layout " + std::to_string((reports.size() + 1) / 2) + "," +
                    std::to_string(reports.size() > 1 ? 2 : 1) + "\n";
  for (const auto& rep : reports) {
    const std::string fam(to_string(rep.config.dist.family()));
    out += "set title '" + rep.config.dist.describe() + "'\nplot ";
    bool first = true;
    for (const auto& m : rep.config.estimators) {
      out += std::string(first ? "" : ", \\\n     ") + "'" + csv_name + "' every ::1 using 2:(strcol(1) eq '" +
             fam + "' && strcol(3) eq '" + m.label() + "' ? $5 : 1/0) with linespoints title '" + m.label() + "'";
      first = false;
    }
    out += "\n";
  }
  return out + "unset multiplot\n";
}

std::string histogram_csv(const HistogramReport& r) {
  std::string out = "n,estimator,bin,lower,upper,count\n";
  for (const auto& row : r.rows)
    for (const Histogram* h : {&row.range, &row.iqr})
      for (std::size_t k = 0; k < h->counts.size(); ++k)
        out += std::to_string(row.n) + "," + h->estimator.label() + "," + std::to_string(k) + "," +
               num(h->edges[k]) + "," + num(h->edges[k + 1]) + "," + std::to_string(h->counts[k]) + "\n";
  return out;
}

json histogram_json(const HistogramReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json hs = json::array();
    for (const Histogram* h : {&row.range, &row.iqr})
      hs.push_back({{"estimator", h->estimator.label()},
                    {"edges", h->edges},
                    {"counts", h->counts},
                    {"mean", h->mean},
                    {"variance", h->variance},
                    {"skewness", h->skewness}});
    rows.push_back({{"n", row.n}, {"histograms", hs}});
  }
  return {{"study", "histogram"},
          {"distribution", {{"family", "normal"}, {"mean", 0.0}, {"sd", 1.0}}},
          {"replications", r.replications},
          {"seed", r.seed},
          {"bins", r.bins},
          {"rows", rows}};
}

std::string histogram_gnuplot(const HistogramReport& r, const std::string& csv_name) {
  std::string out = "# Histograms of the range and quartile SD estimates\n"
                    "set datafile separator ','\n"
                    "set style fill transparent solid 0.5\n"
                    "set terminal pngcairo size " + std::to_string(400 * r.rows.size()) +
                    ",400\nset output 'histogram.png'\n"
                    "set multiplot layout 1," + std::to_string(r.rows.size()) + "\n";
  for (const auto& row : r.rows) {
    const std::string n = std::to_string(row.n);
    out += "set title 'n = " + n + "'\nplot ";
    for (const Histogram* h : {&row.range, &row.iqr}) {
      const std::string id = h->estimator.label();
      out += std::string(h == &row.range ? "" : ", \\\n     ") + "'" + csv_name +
             "' every ::1 using (($4+$5)/2):($1 == " + n + " && strcol(2) eq '" + id +
             "' ? $6 : 1/0) with boxes title '" + id + "'";
    }
    out += "\n";
  }
  return out + "unset multiplot\n";
}

json asymptotic_json(const AsymptoticReport& r) {
  return {{"study", study_name(Study::asymptotic)},
          {"n", r.n},
          {"replications", r.replications},
          {"n_mse_sample_sd", r.n_mse_sample_sd},
          {"n_mse_iqr", r.n_mse_iqr},
          {"iqr_constant", r.iqr_constant},
          {"rmse_limit", r.rmse_limit},
          {"checks",
           {{"sample_sd_within_10pct_of_0.5", r.sample_sd_ok},
            {"iqr_within_10pct_of_1.3605", r.iqr_ok},
            {"iqr_constant_within_0.001", r.iqr_constant_ok},
            {"rmse_limit_within_0.001", r.rmse_limit_ok}}}};
}

}  // namespace fivenum
