// Command-line front end for the extreme graphical lasso pipeline:
//   estimate   raw CSV -> tail covariance -> penalized precision fit
//   simulate   draw samples in the domain of attraction of an HR model
//   diagnose   mutual incoherence sweep over M and gamma upper bound
//   benchmark  Monte-Carlo success-rate experiments from a config file
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 non-convergence.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "eglasso/diagnostics.hpp"
#include "eglasso/hr_core.hpp"
#include "eglasso/io.hpp"
#include "eglasso/rng.hpp"
#include "eglasso/simulator.hpp"
#include "eglasso/solver.hpp"
#include "eglasso/tail_estimator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace eglasso;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNoConvergence = 4;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("EGLASSO_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) omp_set_num_threads(cap);
  }
#endif
}

PenaltyMode parse_mode(const std::string& mode) {
  if (mode == "shifted") return PenaltyMode::shifted;
  if (mode == "modified") return PenaltyMode::modified;
  throw CLI::ValidationError("--mode", "must be 'shifted' or 'modified'");
}

struct EstimateOptions {
  std::string input;
  std::string out_dir = ".";
  double gamma = 0.0;
  double M = 1.0;
  double k_fraction = 0.05;
  long k_n = -1;
  double threshold = 0.01;
  std::string mode = "shifted";
};

int cmd_estimate(const EstimateOptions& opt) {
  SampleMatrix sample;
  try {
    sample = io::read_samples_csv(opt.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  const long n = sample.n();
  if (n < 10) {
    std::cerr << "error: need at least 10 observations\n";
    return kExitData;
  }
  const long k_n = opt.k_n > 0
                       ? opt.k_n
                       : static_cast<long>(opt.k_fraction * n);
  try {
    const Eigen::MatrixXd x_hat = rank_transform(sample);
    const ExceedanceSet exc =
        select_exceedances(x_hat, static_cast<int>(k_n));
    const TailCovariance tail = aggregate_S(exc, opt.M);

    SolverConfig cfg;
    cfg.gamma = opt.gamma;
    cfg.M = opt.M;
    cfg.mode = parse_mode(opt.mode);
    cfg.edge_threshold = opt.threshold;
    const FitResult fit = solve(tail.S_star, cfg);

    fs::create_directories(opt.out_dir);
    json out = io::fit_to_json(fit);
    out["tail"] = io::tail_to_json(tail);
    io::write_json(out, opt.out_dir + "/fit.json");
    io::write_edges_dot(fit.edges, opt.out_dir + "/edges.dot", sample.labels);

    std::cout << "n = " << n << ", d = " << sample.d() << ", k_n = " << k_n
              << "\n"
              << "edges found: " << fit.edges.edges.size() << "\n"
              << "objective: " << fit.objective << "\n"
              << "kkt residual: " << fit.kkt_residual << "\n"
              << "sweeps: " << fit.sweeps
              << (fit.converged ? " (converged)" : " (NOT converged)") << "\n";
    if (!fit.converged) return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

struct SimulateOptions {
  std::string model = "star";
  std::string theta_file;
  int d = 4;
  long n = 10000;
  std::uint64_t seed = 0;
  std::string out = "sample.csv";
};

int cmd_simulate(const SimulateOptions& opt) {
  try {
    PrecisionTheta theta;
    if (opt.model == "star") {
      theta = star_theta();
    } else if (opt.model == "diamond") {
      theta = diamond_theta();
    } else if (opt.model == "pa") {
      auto graph_rng = rng::stream(opt.seed, 0, rng::Phase::graph);
      const EdgeSet graph = generate_pa_graph(opt.d, graph_rng);
      auto weight_rng = rng::stream(opt.seed, 0, rng::Phase::weights);
      theta = theta_from_graph(graph, WeightRule::uniform(0.5, 1.0),
                               weight_rng);
    } else if (opt.model == "theta") {
      theta.entries = io::read_matrix_auto(opt.theta_file);
    } else {
      std::cerr << "error: unknown model '" << opt.model << "'\n";
      return kExitUsage;
    }
    SampleMatrix sample;
    sample.values = sample_mvpareto(theta, opt.n, opt.seed);
    for (int j = 0; j < theta.dim(); ++j)
      sample.labels.push_back("X" + std::to_string(j + 1));
    io::write_samples_csv(sample, opt.out);
    std::cout << "wrote " << opt.n << " x " << theta.dim() << " sample to "
              << opt.out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

struct DiagnoseOptions {
  std::string theta_file;
  std::string edges_file;
  double grid_min = 0.01;
  double grid_max = 1.0;
  int grid_count = 100;
  double epsilon = 0.5;
  double M = 1.0;
  double threshold = 0.01;
  std::string out_dir = ".";
};

int cmd_diagnose(const DiagnoseOptions& opt) {
  try {
    PrecisionTheta theta;
    theta.entries = enforce_symmetry(io::read_matrix_auto(opt.theta_file));
    const EdgeSet edges = opt.edges_file.empty()
                              ? graph_from_theta(theta, opt.threshold)
                              : io::read_edges_json(opt.edges_file);
    if (opt.grid_count < 1) {
      std::cerr << "error: empty M grid\n";
      return kExitUsage;
    }
    std::vector<double> grid;
    for (int i = 0; i < opt.grid_count; ++i)
      grid.push_back(opt.grid_count == 1
                         ? opt.grid_min
                         : opt.grid_min + (opt.grid_max - opt.grid_min) * i /
                                              (opt.grid_count - 1));
    const IncoherenceSweep sweep = incoherence_sweep(theta, edges, grid);

    fs::create_directories(opt.out_dir);
    {
      std::ofstream csv(opt.out_dir + "/incoherence.csv");
      csv << "M,value,satisfied\n";
      for (const auto& r : sweep.reports)
        csv << io::format_double(r.M) << ',' << io::format_double(r.value)
            << ',' << (r.satisfied ? 1 : 0) << '\n';
    }

    json summary;
    summary["crossings"] = sweep.crossings;
    bool anywhere = false;
    for (const auto& r : sweep.reports) anywhere |= r.satisfied;
    summary["satisfied_anywhere"] = anywhere;
    const IncoherenceReport at_m = mutual_incoherence(theta, edges, opt.M);
    summary["at_M"] = {{"M", at_m.M},
                       {"value", at_m.value},
                       {"satisfied", at_m.satisfied}};
    if (at_m.satisfied) {
      const GammaBound bound = gamma_upper_bound(theta, edges, opt.M,
                                                 opt.epsilon);
      summary["gamma_upper_bound"] = {
          {"upper", bound.upper},
          {"epsilon", bound.epsilon},
          {"max_degree", bound.max_degree},
          {"sigma_star_opnorm", bound.sigma_star_opnorm},
          {"omega_ee_inv_opnorm", bound.omega_ee_inv_opnorm}};
    }
    io::write_json(summary, opt.out_dir + "/incoherence_summary.json");
    if (!anywhere)
      std::cout << "mutual incoherence nowhere satisfied on the grid\n";
    for (double c : sweep.crossings) std::cout << "crossing at M = " << c
                                               << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

ExperimentConfig parse_experiment_config(const json& j, long n_override) {
  static const std::set<std::string> known = {
      "model",       "theta_file", "d",           "n",
      "replications", "k_fraction", "k_n",         "M",
      "gamma",       "edge_threshold", "mode",    "seed",
      "weight_rule", "weight_lo",  "weight_hi"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key))
      throw std::runtime_error("unknown config key '" + key + "'");

  ExperimentConfig cfg;
  const std::string model = j.value("model", std::string("star"));
  if (model == "star") {
    cfg.theta = star_theta().entries;
    cfg.d = 4;
  } else if (model == "diamond") {
    cfg.theta = diamond_theta().entries;
    cfg.d = 4;
  } else if (model == "pa") {
    cfg.d = j.value("d", 20);
  } else if (model == "theta") {
    cfg.theta = io::read_matrix_auto(j.at("theta_file").get<std::string>());
    cfg.d = static_cast<int>(cfg.theta->rows());
  } else {
    throw std::runtime_error("config field 'model' must be star, diamond, pa"
                             " or theta");
  }
  cfg.n = n_override > 0 ? n_override : j.value("n", 10000L);
  cfg.replications = j.value("replications", 20);
  cfg.k_fraction = j.value("k_fraction", 0.05);
  cfg.k_n = j.value("k_n", -1L);
  cfg.M = j.value("M", 1.0);
  cfg.gamma = j.value("gamma", 0.0);
  cfg.edge_threshold = j.value("edge_threshold", 0.01);
  const std::string mode = j.value("mode", std::string("shifted"));
  if (mode == "shifted")
    cfg.mode = PenaltyMode::shifted;
  else if (mode == "modified")
    cfg.mode = PenaltyMode::modified;
  else
    throw std::runtime_error("config field 'mode' must be shifted or modified");
  cfg.seed = j.value("seed", 0ULL);
  const std::string rule = j.value("weight_rule", std::string("unit"));
  if (rule == "unit")
    cfg.weights = WeightRule::units();
  else if (rule == "uniform")
    cfg.weights = WeightRule::uniform(j.value("weight_lo", 0.5),
                                      j.value("weight_hi", 1.0));
  else
    throw std::runtime_error("config field 'weight_rule' must be unit or"
                             " uniform");
  if (cfg.replications < 1)
    throw std::runtime_error("config field 'replications' must be >= 1");
  if (cfg.n < 10) throw std::runtime_error("config field 'n' must be >= 10");
  return cfg;
}

json replication_to_json(const ReplicationRecord& rec) {
  return {{"edges", io::edges_to_json(rec.edges_found)},
          {"exact_match", rec.exact_match},
          {"solver_converged", rec.solver_converged},
          {"theta_error", rec.theta_error}};
}

struct BenchmarkOptions {
  std::string config;
  std::string out_dir = ".";
};

int cmd_benchmark(const BenchmarkOptions& opt) {
  try {
    std::ifstream in(opt.config);
    if (!in) {
      std::cerr << "error: cannot open config " << opt.config << "\n";
      return kExitData;
    }
    json j;
    in >> j;

    std::vector<long> n_values;
    if (j.contains("n") && j["n"].is_array())
      n_values = j["n"].get<std::vector<long>>();
    else
      n_values.push_back(j.value("n", 10000L));

    fs::create_directories(opt.out_dir);
    json results = json::array();
    std::vector<std::pair<long, double>> rates;
    PhaseTimings timing;
    for (long n : n_values) {
      const ExperimentConfig cfg = parse_experiment_config(j, n);
      const ExperimentResult res = run_experiment(cfg);
      json entry;
      entry["n"] = n;
      entry["success_rate"] = res.success_rate;
      entry["true_edges"] = io::edges_to_json(res.true_edges);
      json reps = json::array();
      for (const auto& rec : res.per_replication)
        reps.push_back(replication_to_json(rec));
      entry["replications"] = reps;
      results.push_back(entry);
      rates.emplace_back(n, res.success_rate);
      timing.simulate_s += res.timing.simulate_s;
      timing.estimate_s += res.timing.estimate_s;
      timing.solve_s += res.timing.solve_s;
    }

    // timings go to stdout only, so the result files are reproducible
    io::write_json(results, opt.out_dir + "/result.json");
    {
      std::ofstream csv(opt.out_dir + "/success_rate.csv");
      csv << "n,success_rate\n";
      for (const auto& [n, rate] : rates)
        csv << n << ',' << io::format_double(rate) << '\n';
    }
    std::cout << "phase timing (summed over replications):\n"
              << "  simulate   " << timing.simulate_s << " s\n"
              << "  estimate S " << timing.estimate_s << " s\n"
              << "  solve      " << timing.solve_s << " s\n";
    for (const auto& [n, rate] : rates)
      std::cout << "n = " << n << ": success rate " << rate << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"extreme graphical lasso toolkit"};
  app.require_subcommand(1);

  EstimateOptions est;
  auto* estimate = app.add_subcommand(
      "estimate", "fit a sparse extremal precision matrix from raw samples");
  estimate->add_option("--input", est.input, "CSV with header row")
      ->required();
  estimate->add_option("--gamma", est.gamma, "penalty parameter")->required();
  estimate->add_option("--M", est.M, "shift parameter");
  estimate->add_option("--k-fraction", est.k_fraction,
                       "tail fraction (k_n = floor(fraction*n))");
  estimate->add_option("--k-n", est.k_n, "explicit k_n, overrides fraction");
  estimate->add_option("--threshold", est.threshold, "edge threshold");
  estimate->add_option("--mode", est.mode, "shifted|modified");
  estimate->add_option("--out-dir", est.out_dir, "output directory");

  SimulateOptions sim;
  auto* simulate =
      app.add_subcommand("simulate", "draw samples from an HR target model");
  simulate->add_option("--model", sim.model, "star|diamond|pa|theta");
  simulate->add_option("--theta", sim.theta_file,
                       "precision matrix file for --model theta");
  simulate->add_option("--d", sim.d, "dimension for --model pa");
  simulate->add_option("--n", sim.n, "sample size")->required();
  simulate->add_option("--seed", sim.seed, "rng seed");
  simulate->add_option("--out", sim.out, "output CSV path");

  DiagnoseOptions diag;
  auto* diagnose = app.add_subcommand(
      "diagnose", "mutual incoherence sweep and gamma upper bound");
  diagnose->add_option("--theta", diag.theta_file, "precision matrix file")
      ->required();
  diagnose->add_option("--edges", diag.edges_file,
                       "edge set JSON (default: threshold the matrix)");
  diagnose->add_option("--grid-min", diag.grid_min, "smallest M");
  diagnose->add_option("--grid-max", diag.grid_max, "largest M");
  diagnose->add_option("--grid-count", diag.grid_count, "grid size");
  diagnose->add_option("--M", diag.M, "M for the gamma bound");
  diagnose->add_option("--epsilon", diag.epsilon, "epsilon in (0,1)");
  diagnose->add_option("--threshold", diag.threshold, "edge threshold");
  diagnose->add_option("--out-dir", diag.out_dir, "output directory");

  BenchmarkOptions bench;
  auto* benchmark = app.add_subcommand(
      "benchmark", "Monte-Carlo success-rate experiment from a config file");
  benchmark->add_option("--config", bench.config, "JSON config")->required();
  benchmark->add_option("--out-dir", bench.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kExitUsage;
  }

  if (estimate->parsed()) return cmd_estimate(est);
  if (simulate->parsed()) return cmd_simulate(sim);
  if (diagnose->parsed()) return cmd_diagnose(diag);
  return cmd_benchmark(bench);
}
