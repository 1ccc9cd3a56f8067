#include "eglasso/simulator.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>

#include "eglasso/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eglasso {

namespace {

EdgeSet star_edge_set() {
  EdgeSet e;
  e.d = 4;
  e.add(0, 1);
  e.add(0, 2);
  e.add(0, 3);
  return e;
}

EdgeSet diamond_edge_set() {
  EdgeSet e;
  e.d = 4;
  e.add(0, 1);
  e.add(0, 2);
  e.add(1, 2);
  e.add(1, 3);
  e.add(2, 3);
  return e;
}

bool connected(const EdgeSet& edges) {
  if (edges.d <= 1) return true;
  std::vector<std::vector<int>> adj(edges.d);
  for (const auto& [i, j] : edges.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(edges.d, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == edges.d;
}

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

PrecisionTheta star_theta() {
  std::mt19937_64 unused(0);
  return theta_from_graph(star_edge_set(), WeightRule::units(), unused);
}

PrecisionTheta diamond_theta() {
  std::mt19937_64 unused(0);
  return theta_from_graph(diamond_edge_set(), WeightRule::units(), unused);
}

EdgeSet star_edges() { return star_edge_set(); }
EdgeSet diamond_edges() { return diamond_edge_set(); }

Eigen::MatrixXd sample_degenerate_gaussian(const CovarianceSigma& sigma,
                                           long n,
                                           std::mt19937_64& gaussian_rng) {
  const int d = sigma.dim();
  const Eigen::MatrixXd s = enforce_symmetry(sigma.unshifted());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");
  const Eigen::VectorXd evals = es.eigenvalues();
  const double max_eval = evals.cwiseAbs().maxCoeff();
  if (evals.minCoeff() < -1e-8 * std::max(max_eval, 1.0))
    throw std::runtime_error("Sigma has a significantly negative eigenvalue");

  std::vector<int> pos;
  for (int i = 0; i < d; ++i)
    if (evals(i) > 1e-12 * std::max(max_eval, 1.0)) pos.push_back(i);
  const int r = static_cast<int>(pos.size());

  Eigen::MatrixXd factor(d, r);
  for (int a = 0; a < r; ++a)
    factor.col(a) = es.eigenvectors().col(pos[a]) * std::sqrt(evals(pos[a]));

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd z(r);
  for (long i = 0; i < n; ++i) {
    for (int a = 0; a < r; ++a) z(a) = normal(gaussian_rng);
    out.row(i) = (factor * z).transpose();
  }
  return out;
}

Eigen::MatrixXd sample_mvpareto(const PrecisionTheta& theta, long n,
                                std::uint64_t seed,
                                std::uint64_t replication) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  const int d = theta.dim();
  // any internal shift gives the same Sigma (the law is M0-independent)
  constexpr double kInternalShift = 1.0;
  CovarianceSigma sigma_star = sigma_star_from_theta(theta, kInternalShift);
  CovarianceSigma sigma;
  sigma.entries = sigma_star.entries -
                  kInternalShift * Eigen::MatrixXd::Ones(d, d);

  auto g_rng = rng::stream(seed, replication, rng::Phase::gaussian);
  Eigen::MatrixXd w = sample_degenerate_gaussian(sigma, n, g_rng);

  const Eigen::VectorXd half_var = 0.5 * sigma.entries.diagonal();
  auto p_rng = rng::stream(seed, replication, rng::Phase::pareto);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd out(n, d);
  for (long i = 0; i < n; ++i) {
    const double y = 1.0 / (1.0 - unif(p_rng));  // standard Pareto
    for (int k = 0; k < d; ++k)
      out(i, k) = y * std::exp(w(i, k) - half_var(k));
  }
  return out;
}

EdgeSet generate_pa_graph(int d, std::mt19937_64& rng) {
  if (d < 2) throw std::invalid_argument("need at least 2 nodes");
  EdgeSet out;
  out.d = d;
  out.add(0, 1);
  std::vector<int> degree(d, 0);
  degree[0] = degree[1] = 1;
  int degree_sum = 2;
  for (int v = 2; v < d; ++v) {
    std::uniform_int_distribution<int> pick(0, degree_sum - 1);
    int ticket = pick(rng);
    int target = 0;
    while (ticket >= degree[target]) ticket -= degree[target++];
    out.add(target, v);
    ++degree[target];
    ++degree[v];
    degree_sum += 2;
  }
  return out;
}

PrecisionTheta theta_from_graph(const EdgeSet& edges, const WeightRule& rule,
                                std::mt19937_64& rng) {
  if (!connected(edges))
    throw std::invalid_argument("graph must be connected");
  const int d = edges.d;
  PrecisionTheta out;
  out.entries.setZero(d, d);
  std::uniform_real_distribution<double> unif(rule.lo, rule.hi);
  for (const auto& [i, j] : edges.edges) {
    const double w = rule.unit ? 1.0 : unif(rng);
    out.entries(i, j) = -w;
    out.entries(j, i) = -w;
    out.entries(i, i) += w;
    out.entries(j, j) += w;
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool parallel) {
  if (cfg.replications < 1)
    throw std::invalid_argument("replications must be >= 1");
  const long k_n = cfg.effective_k_n(cfg.n);
  if (k_n < 2 || k_n >= cfg.n)
    throw std::invalid_argument("k_n must satisfy 2 <= k_n < n");

  PrecisionTheta truth;
  if (cfg.theta) {
    truth.entries = enforce_symmetry(*cfg.theta);
    if (truth.dim() != cfg.d)
      throw std::invalid_argument("theta dimension does not match d");
  } else {
    auto graph_rng = rng::stream(cfg.seed, 0, rng::Phase::graph);
    const EdgeSet graph = generate_pa_graph(cfg.d, graph_rng);
    auto weight_rng = rng::stream(cfg.seed, 0, rng::Phase::weights);
    truth = theta_from_graph(graph, cfg.weights, weight_rng);
  }

  ExperimentResult result;
  result.true_edges = graph_from_theta(truth, 1e-9);
  result.per_replication.resize(cfg.replications);

  SolverConfig solver_cfg;
  solver_cfg.gamma = cfg.gamma;
  solver_cfg.M = cfg.M;
  solver_cfg.mode = cfg.mode;
  solver_cfg.edge_threshold = cfg.edge_threshold;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int r = 0; r < cfg.replications; ++r) {
    ReplicationRecord rec;
    try {
      const double t0 = now_seconds();
      SampleMatrix sample;
      sample.values = sample_mvpareto(truth, cfg.n, cfg.seed,
                                      static_cast<std::uint64_t>(r));
      const double t1 = now_seconds();
      const Eigen::MatrixXd x_hat = rank_transform(sample);
      const ExceedanceSet exc =
          select_exceedances(x_hat, static_cast<int>(k_n));
      // per-margin loop stays serial here, parallelism lives at the
      // replication level
      const TailCovariance tail = aggregate_S(exc, cfg.M, false);
      const double t2 = now_seconds();
      const FitResult fit = solve(tail.S_star, solver_cfg);
      const double t3 = now_seconds();

      rec.edges_found = fit.edges;
      rec.solver_converged = fit.converged;
      rec.exact_match = fit.converged && fit.edges == result.true_edges;
      rec.theta_error = (fit.theta_lasso.entries - truth.entries)
                            .cwiseAbs()
                            .maxCoeff();
#ifdef _OPENMP
#pragma omp critical
#endif
      {
        result.timing.simulate_s += t1 - t0;
        result.timing.estimate_s += t2 - t1;
        result.timing.solve_s += t3 - t2;
      }
    } catch (const std::exception& e) {
      std::cerr << "replication " << r + 1 << " failed: " << e.what() << "\n";
      rec.exact_match = false;
      rec.solver_converged = false;
    }
    result.per_replication[r] = rec;
  }

  int successes = 0;
  for (const auto& rec : result.per_replication)
    if (rec.exact_match) ++successes;
  result.success_rate =
      static_cast<double>(successes) / cfg.replications;
  return result;
}

}  // namespace eglasso
