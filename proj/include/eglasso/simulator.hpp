#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eglasso/hr_core.hpp"
#include "eglasso/solver.hpp"
#include "eglasso/tail_estimator.hpp"

// Samplers in the domain of attraction of a target HR model, random sparse
// graph / precision generators, and the Monte-Carlo success-rate harness.

namespace eglasso {

struct WeightRule {
  bool unit = true;
  double lo = 0.5;
  double hi = 1.0;

  static WeightRule units() { return {}; }
  static WeightRule uniform(double lo, double hi) { return {false, lo, hi}; }
};

struct ExperimentConfig {
  int d = 4;
  long n = 10000;
  int replications = 20;
  double k_fraction = 0.05;
  long k_n = -1;  // > 0 overrides k_fraction
  double M = 1.0;
  double gamma = 0.0;
  double edge_threshold = 0.01;
  PenaltyMode mode = PenaltyMode::shifted;
  std::uint64_t seed = 0;
  // model: explicit Theta, or a preferential-attachment graph
  std::optional<Eigen::MatrixXd> theta;
  WeightRule weights = WeightRule::units();

  long effective_k_n(long n_obs) const {
    return k_n > 0 ? k_n : static_cast<long>(k_fraction * n_obs);
  }
};

struct ReplicationRecord {
  EdgeSet edges_found;
  bool exact_match = false;
  bool solver_converged = true;
  double theta_error = 0.0;  // ||theta_lasso - Theta||_inf
};

struct PhaseTimings {
  double simulate_s = 0.0;
  double estimate_s = 0.0;
  double solve_s = 0.0;
};

struct ExperimentResult {
  double success_rate = 0.0;
  std::vector<ReplicationRecord> per_replication;
  PhaseTimings timing;
  EdgeSet true_edges;
};

// The two d=4 fixtures (unit-weight Laplacians).
PrecisionTheta star_theta();
PrecisionTheta diamond_theta();
EdgeSet star_edges();
EdgeSet diamond_edges();

// Draws n rows from the rank-deficient Gaussian N(0, Sigma) with Sigma 1 = 0
// by sampling along the eigenvectors with positive eigenvalues.
Eigen::MatrixXd sample_degenerate_gaussian(const CovarianceSigma& sigma,
                                           long n, std::mt19937_64& gaussian_rng);

// X = Y exp(W - diag(Sigma)/2) rowwise with Y standard Pareto independent
// of W ~ N(0, Sigma); Sigma is recovered from Theta via the shifted inverse
// (the internal shift M0 = 1 does not affect the law).
Eigen::MatrixXd sample_mvpareto(const PrecisionTheta& theta, long n,
                                std::uint64_t seed, std::uint64_t replication = 0);

// Barabasi-Albert tree: each arriving node attaches one edge with
// degree-proportional probability.  Always connected with d-1 edges.
EdgeSet generate_pa_graph(int d, std::mt19937_64& rng);

// Weighted graph Laplacian: Theta_ij = -w_ij on edges, row sums zero.
PrecisionTheta theta_from_graph(const EdgeSet& edges, const WeightRule& rule,
                                std::mt19937_64& rng);

// Full pipeline per replication: sample, rank transform, exceedances,
// aggregate S, solve, threshold, compare against the true edge set.
// Replications use independent streams keyed by (seed, replication), so the
// result is identical across execution orders and thread counts.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                bool parallel = true);

}  // namespace eglasso
