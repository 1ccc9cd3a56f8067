#pragma once

#include <Eigen/Dense>

#include "eglasso/hr_core.hpp"
#include "eglasso/tail_estimator.hpp"

// Extreme graphical lasso: minimize
//   -log det Theta* + tr(S* Theta*) + gamma * sum_{i!=j} |Theta*_ij - c|
// over positive definite Theta*, with c = 1/(d^2 M) (shifted mode) or c = 0
// (modified mode), by blockwise coordinate descent that maintains the
// working inverse Sigma = (Theta*)^{-1} without matrix inversions.

namespace eglasso {

enum class PenaltyMode { shifted, modified };

struct SolverConfig {
  double gamma = 0.0;
  double M = 1.0;
  PenaltyMode mode = PenaltyMode::shifted;
  double outer_tol = -1.0;  // <= 0: use 1e-6 * mean |diag(S*)|
  double inner_tol = 1e-8;
  int max_outer_sweeps = 500;
  int max_inner_iters = 10000;
  double edge_threshold = 0.01;

  double center(int d) const {
    return mode == PenaltyMode::modified
               ? 0.0
               : 1.0 / (static_cast<double>(d) * d * M);
  }
};

struct SolverState {
  Eigen::MatrixXd Theta_star;  // current iterate, positive definite
  Eigen::MatrixXd Sigma_cur;   // tracked inverse of Theta_star
  int sweep_count = 0;
  double last_max_delta = 0.0;
};

struct FitResult {
  PrecisionTheta theta_lasso;  // Theta* - c 11^T
  Eigen::MatrixXd theta_star;
  EdgeSet edges;
  double objective = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
  int sweeps = 0;
};

// Cyclic coordinate descent with soft-thresholding for
//   min_beta 1/2 beta^T Q beta + beta^T (c*sigma_dd*Q1 + s_1d) + gamma|beta|_1
// with Q = Theta11^{-1}.
Eigen::VectorXd inner_lasso(const Eigen::MatrixXd& theta11_inv,
                            double sigma_dd, const Eigen::VectorXd& s_1d,
                            double gamma, double c,
                            Eigen::VectorXd beta_init, double inner_tol,
                            int max_inner_iters);

// One blockwise update of column `col`: forms Theta11^{-1} from the working
// Sigma, solves the inner lasso, updates theta_1d, theta_dd and refreshes
// Sigma through the block inverse identities.  The diagonal sigma_dd stays
// pinned to S*_dd.
void column_update(SolverState& state, const Eigen::MatrixXd& S_star, int col,
                   const SolverConfig& cfg);

// Max entrywise violation of the stationarity condition
//   -(Theta*)^{-1} + S* + gamma Z = 0
// with Z an admissible subgradient of sum |Theta*_ij - c|.
double kkt_residual(const Eigen::MatrixXd& theta_star,
                    const Eigen::MatrixXd& S_star, double gamma, double c);

double objective_value(const Eigen::MatrixXd& theta_star,
                       const Eigen::MatrixXd& S_star, double gamma, double c);

FitResult solve(const Eigen::MatrixXd& S_star, const SolverConfig& cfg);

inline FitResult solve(const TailCovariance& tail, SolverConfig cfg) {
  cfg.M = tail.M;
  return solve(tail.S_star, cfg);
}

}  // namespace eglasso
