// fivenum: mean/SD from five-number summaries, weight tables and simulation
// studies. Run `fivenum --help` for the subcommands.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "fivenum/error.hpp"
#include "fivenum/estimators.hpp"
#include "fivenum/meta_io.hpp"
#include "fivenum/moment_cache.hpp"
#include "fivenum/power_fit.hpp"
#include "fivenum/service.hpp"
#include "fivenum/sim_io.hpp"
#include "fivenum/weights.hpp"

namespace {

using nlohmann::json;
using namespace fivenum;

constexpr int kExitValidation = 2;

void write_output(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write " + out);
  f << text;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  f << text;
}

MomentCache make_cache(const std::string& dir) {
  return dir.empty() ? MomentCache::from_environment() : MomentCache(dir);
}

EstimateServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample mean and SD from five-number summaries"};
  app.require_subcommand(1);
  std::string cache_dir;
  app.add_option("--cache-dir", cache_dir, "Moment cache directory (default: $FIVENUM_CACHE_DIR)");

  // convert
  auto* convert = app.add_subcommand("convert", "Convert a study CSV");
  std::string csv_path, out, format = "csv";
  bool full_precision = false;
  convert->add_option("csv", csv_path, "Input CSV (study_id,n,min,q1,median,q3,max)")->required();
  convert->add_option("--out", out, "Output file (default stdout)");
  convert->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  convert->add_flag("--full-precision", full_precision, "17 significant digits in CSV output");

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate mean and SD for one study");
  std::optional<std::int64_t> n;
  std::optional<double> vmin, vq1, vmed, vq3, vmax;
  std::string est_format = "json";
  est->add_option("--n", n, "Sample size");
  est->add_option("--min", vmin, "Minimum");
  est->add_option("--q1", vq1, "First quartile");
  est->add_option("--median", vmed, "Median");
  est->add_option("--q3", vq3, "Third quartile");
  est->add_option("--max", vmax, "Maximum");
  est->add_option("--format", est_format, "json or csv")->check(CLI::IsMember({"csv", "json"}));

  // table
  auto* table = app.add_subcommand("table", "Export the theta table");
  std::int64_t qmax = 100;
  bool exact = false;
  std::string table_out;
  table->add_option("--qmax", qmax, "Largest Q (n = 4Q+1)")->check(CLI::PositiveNumber);
  table->add_flag("--exact", exact, "Also compute exact optimal weights (quadrature)");
  table->add_option("--out", table_out, "Output file (default stdout)");

  // weights
  auto* weights = app.add_subcommand("weights", "Exact and approximate optimal weight");
  std::int64_t wn = 0;
  bool fit = false;
  std::int64_t fit_qmax = 100;
  weights->add_option("--n", wn, "Sample size n = 4Q+1");
  weights->add_flag("--fit", fit, "Fit c1 n^c2 + c0 to exact J over Q = 1..--qmax");
  weights->add_option("--qmax", fit_qmax, "Largest Q for --fit")->check(CLI::PositiveNumber);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a simulation study from a JSON config");
  std::string config_path, sim_out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> reps;
  bool full_scale = false;
  sim->add_option("config", config_path, "JSON config (see docs/formats.md)")->required();
  sim->add_option("--out", sim_out, "Output directory");
  sim->add_option("--seed", seed, "Override the config seed");
  sim->add_option("--reps", reps, "Override the replication count");
  sim->add_flag("--full-scale", full_scale, "Use the published replication counts");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the JSON estimate endpoint and the UI");
  ServeOptions sopt;
  serve->add_option("--host", sopt.host, "Bind address");
  serve->add_option("--port", sopt.port, "Port (0 picks one)");
  serve->add_option("--static", sopt.static_dir, "Directory with the UI bundle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*convert) {
      const auto records = convert_file(csv_path);
      if (format == "json")
        write_output(records_json(records).dump(2) + "\n", out);
      else
        write_output(records_csv(records, {full_precision}), out);
      return 0;
    }

    if (*est) {
      const FiveNumberSummary s{vmin, vq1, vmed, vq3, vmax, n};
      try {
        const EstimateResult r = estimate(s);
        if (est_format == "json") {
          std::cout << estimate_json(r).dump(2) << "\n";
        } else {
          StudyRow row;
          row.study_id = "cli";
          row.n = n;
          row.min = vmin, row.q1 = vq1, row.median = vmed, row.q3 = vq3, row.max = vmax;
          auto cell = [](const auto& v) { return v ? format_number(static_cast<double>(*v), true) : std::string(); };
          row.raw = {n ? std::to_string(*n) : "", cell(vmin), cell(vq1), cell(vmed), cell(vq3), cell(vmax)};
          std::cout << records_csv({convert_row(row)});
        }
        return 0;
      } catch (const ValidationError& e) {
        std::cout << json{{"error", "validation_failed"}, {"violations", violations_json(e.violations())}}.dump(2)
                  << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
      }
    }

    if (*table) {
      MomentCache cache = make_cache(cache_dir);
      TableOptions opt;
      opt.exact = exact;
      opt.moments.cache = &cache;
      write_output(table_csv(generate_table(qmax, opt)), table_out);
      return 0;
    }

    if (*weights) {
      MomentCache cache = make_cache(cache_dir);
      MomentOptions mopt;
      mopt.cache = &cache;
      if (fit) {
        std::vector<PowerSample> samples;
        for (std::int64_t q = 1; q <= fit_qmax; ++q)
          samples.push_back({static_cast<double>(4 * q + 1), exact_J(4 * q + 1, mopt)});
        const PowerLawFit f = fit_power_law(samples);
        json j{{"c1", f.c1}, {"c2", f.c2}, {"c0", f.c0}, {"residual_norm", f.residual_norm},
               {"constant_only", f.constant_only}, {"qmax", fit_qmax}};
        if (!f.warning.empty()) {
          j["warning"] = f.warning;
          std::cerr << "warning: " << f.warning << "\n";
        }
        std::cout << j.dump(2) << "\n";
        return 0;
      }
      if (wn == 0) throw ConfigError("weights: give --n or --fit");
      const double J = exact_J(wn, mopt);
      const ShortcutCoefficients t = shortcut_coefficients(wn);
      std::cout << json{{"n", wn},
                        {"J_exact", J},
                        {"w_exact", 1.0 / (1.0 + J)},
                        {"J_approx", approx_J(static_cast<double>(wn))},
                        {"w_approx", approx_weight(static_cast<double>(wn))},
                        {"theta1", t.theta1},
                        {"theta2", t.theta2}}
                       .dump(2)
                << "\n";
      return 0;
    }

    if (*sim) {
      json cfg;
      {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open " + config_path);
        cfg = json::parse(in, nullptr, false);
        if (cfg.is_discarded()) throw ConfigError(config_path + " is not valid JSON");
      }
      if (seed) cfg["seed"] = *seed;
      if (reps) cfg["replications"] = *reps;
      if (full_scale) cfg["full_scale"] = true;
      const SimulationRequest req = parse_simulation_request(cfg);
      const std::filesystem::path dir(sim_out);
      std::filesystem::create_directories(dir);
      const auto& c = req.config;
      switch (req.study) {
        case Study::rmse:
        case Study::skewed: {
          const auto reports = req.study == Study::rmse
                                   ? std::vector<RmseReport>{run_rmse_study(c)}
                                   : run_skewed_suite(c.replications, c.seed, c.n_grid, c.threads);
          write_file(dir / "rmse.csv", rmse_csv(reports));
          write_file(dir / "rmse.json", rmse_json(reports).dump(2) + "\n");
          write_file(dir / "rmse.gp", rmse_gnuplot(reports, "rmse.csv"));
          break;
        }
        case Study::histogram: {
          const auto rep = run_histogram_study(c.n_grid, c.replications, c.seed, req.bins, c.threads);
          write_file(dir / "histogram.csv", histogram_csv(rep));
          write_file(dir / "histogram.json", histogram_json(rep).dump(2) + "\n");
          write_file(dir / "histogram.gp", histogram_gnuplot(rep, "histogram.csv"));
          break;
        }
        case Study::asymptotic: {
          const auto rep = asymptotic_checks(c.seed, c.replications, c.n_grid.back(), c.threads);
          write_file(dir / "asymptotic.json", asymptotic_json(rep).dump(2) + "\n");
          break;
        }
      }
      std::cerr << "wrote results to " << dir.string() << "\n";
      return 0;
    }

    if (*serve) {
      EstimateServer server(sopt);
      const int port = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << sopt.host << ":" << port << "/\n";
      server.run();
      g_server = nullptr;
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
