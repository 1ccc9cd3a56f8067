#include "eglasso/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace eglasso {

namespace {

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

std::vector<int> other_indices(int d, int col) {
  std::vector<int> out;
  out.reserve(d - 1);
  for (int i = 0; i < d; ++i)
    if (i != col) out.push_back(i);
  return out;
}

}  // namespace

Eigen::VectorXd inner_lasso(const Eigen::MatrixXd& theta11_inv,
                            double sigma_dd, const Eigen::VectorXd& s_1d,
                            double gamma, double c,
                            Eigen::VectorXd beta_init, double inner_tol,
                            int max_inner_iters) {
  const Eigen::MatrixXd& q = theta11_inv;
  const int p = static_cast<int>(q.rows());
  const Eigen::VectorXd b = c * sigma_dd * (q * Eigen::VectorXd::Ones(p)) + s_1d;
  Eigen::VectorXd beta = std::move(beta_init);
  for (int iter = 0; iter < max_inner_iters; ++iter) {
    double max_change = 0.0;
    for (int j = 0; j < p; ++j) {
      const double qjj = q(j, j);
      const double resid = b(j) + q.row(j).dot(beta) - qjj * beta(j);
      const double next = soft_threshold(-resid, gamma) / qjj;
      if (!std::isfinite(next))
        throw std::runtime_error("inner lasso produced a nonfinite value");
      max_change = std::max(max_change, std::abs(next - beta(j)));
      beta(j) = next;
    }
    if (max_change < inner_tol) break;
  }
  return beta;
}

void column_update(SolverState& state, const Eigen::MatrixXd& S_star, int col,
                   const SolverConfig& cfg) {
  const int d = static_cast<int>(S_star.rows());
  const double c = cfg.center(d);
  const std::vector<int> rest = other_indices(d, col);

  const double sigma_dd = S_star(col, col);  // pinned by the KKT diagonal
  if (sigma_dd <= 0)
    throw std::runtime_error("diagonal of S* must be positive");

  Eigen::VectorXd sigma_1d(d - 1), s_1d(d - 1);
  Eigen::MatrixXd sigma_11(d - 1, d - 1);
  for (int a = 0; a < d - 1; ++a) {
    sigma_1d(a) = state.Sigma_cur(rest[a], col);
    s_1d(a) = S_star(rest[a], col);
    for (int b = 0; b < d - 1; ++b)
      sigma_11(a, b) = state.Sigma_cur(rest[a], rest[b]);
  }

  // step (b): Theta11^{-1} = Sigma11 - sigma_1d sigma_1d^T / sigma_dd
  const Eigen::MatrixXd theta11_inv =
      sigma_11 - (sigma_1d * sigma_1d.transpose()) / sigma_dd;

  // step (c)
  Eigen::VectorXd beta_init(d - 1);
  for (int a = 0; a < d - 1; ++a)
    beta_init(a) = (state.Theta_star(rest[a], col) - c) * sigma_dd;
  const Eigen::VectorXd beta =
      inner_lasso(theta11_inv, sigma_dd, s_1d, cfg.gamma, c,
                  std::move(beta_init), cfg.inner_tol, cfg.max_inner_iters);

  // steps (d), (e)
  const Eigen::VectorXd theta_1d =
      beta / sigma_dd + c * Eigen::VectorXd::Ones(d - 1);
  const Eigen::VectorXd u = theta11_inv * theta_1d;
  const double quad = theta_1d.dot(u);
  const double theta_dd = 1.0 / sigma_dd + quad;
  if (!(theta_dd - quad > 0) || !std::isfinite(theta_dd))
    throw std::runtime_error(
        "column update broke down: nonpositive Schur complement at column " +
        std::to_string(col + 1));

  // step (f): refresh Sigma from the block inverse with fixed Theta11^{-1}
  const Eigen::VectorXd sigma_1d_new = -sigma_dd * u;
  const Eigen::MatrixXd sigma_11_new =
      theta11_inv + (sigma_1d_new * sigma_1d_new.transpose()) / sigma_dd;

  for (int a = 0; a < d - 1; ++a) {
    state.Theta_star(rest[a], col) = theta_1d(a);
    state.Theta_star(col, rest[a]) = theta_1d(a);
    state.Sigma_cur(rest[a], col) = sigma_1d_new(a);
    state.Sigma_cur(col, rest[a]) = sigma_1d_new(a);
    for (int b = 0; b < d - 1; ++b)
      state.Sigma_cur(rest[a], rest[b]) = sigma_11_new(a, b);
  }
  state.Theta_star(col, col) = theta_dd;
  state.Sigma_cur(col, col) = sigma_dd;
}

double objective_value(const Eigen::MatrixXd& theta_star,
                       const Eigen::MatrixXd& S_star, double gamma, double c) {
  Eigen::LLT<Eigen::MatrixXd> llt(theta_star);
  if (llt.info() != Eigen::Success)
    return std::numeric_limits<double>::infinity();
  double log_det = 0.0;
  for (int i = 0; i < theta_star.rows(); ++i)
    log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
  double penalty = 0.0;
  for (int i = 0; i < theta_star.rows(); ++i)
    for (int j = 0; j < theta_star.cols(); ++j)
      if (i != j) penalty += std::abs(theta_star(i, j) - c);
  return -log_det + (S_star * theta_star).trace() + gamma * penalty;
}

double kkt_residual(const Eigen::MatrixXd& theta_star,
                    const Eigen::MatrixXd& S_star, double gamma, double c) {
  const int d = static_cast<int>(theta_star.rows());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(theta_star);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("Theta* must be positive definite");
  const Eigen::MatrixXd w = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  const Eigen::MatrixXd g = S_star - w;  // -(Theta*)^{-1} + S*
  double residual = 0.0;
  constexpr double kAtCenter = 1e-12;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double v;
      if (i == j) {
        v = std::abs(g(i, j));
      } else if (std::abs(theta_star(i, j) - c) > kAtCenter) {
        const double sign = theta_star(i, j) > c ? 1.0 : -1.0;
        v = std::abs(g(i, j) + gamma * sign);
      } else if (gamma > 0) {
        // shrunk entry: distance of (w - S*)_ij / gamma from [-1, 1]
        v = gamma * std::max(0.0, std::abs(-g(i, j) / gamma) - 1.0);
      } else {
        v = std::abs(g(i, j));
      }
      residual = std::max(residual, v);
    }
  }
  return residual;
}

FitResult solve(const Eigen::MatrixXd& S_star, const SolverConfig& cfg) {
  const int d = static_cast<int>(S_star.rows());
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  const Eigen::MatrixXd s = enforce_symmetry(S_star);
  const double c = cfg.center(d);
  if (cfg.gamma < 0) throw std::invalid_argument("gamma must be nonnegative");

  SolverState state;
  state.Sigma_cur = s;
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    // borderline S*: jitter the start, the sweeps repair the inverse pair
    const double eps = 1e-8 * s.trace() / d;
    state.Sigma_cur = s + eps * Eigen::MatrixXd::Identity(d, d);
    llt.compute(state.Sigma_cur);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("S* is not positive definite");
  }
  state.Theta_star = llt.solve(Eigen::MatrixXd::Identity(d, d));
  state.Theta_star =
      0.5 * (state.Theta_star + state.Theta_star.transpose()).eval();

  const double outer_tol = cfg.outer_tol > 0
                               ? cfg.outer_tol
                               : 1e-6 * s.diagonal().cwiseAbs().mean();

  bool converged = false;
  while (state.sweep_count < cfg.max_outer_sweeps) {
    const Eigen::MatrixXd sigma_before = state.Sigma_cur;
    for (int col = 0; col < d; ++col) column_update(state, s, col, cfg);
    ++state.sweep_count;
    state.last_max_delta =
        (state.Sigma_cur - sigma_before).cwiseAbs().maxCoeff();
    if (state.last_max_delta < outer_tol) {
      converged = true;
      break;
    }
  }

  FitResult out;
  out.theta_star = state.Theta_star;
  out.theta_lasso.entries =
      state.Theta_star - c * Eigen::MatrixXd::Ones(d, d);
  if (cfg.mode == PenaltyMode::shifted) out.theta_lasso.shift_c = std::nullopt;
  out.edges = graph_from_theta(out.theta_lasso, cfg.edge_threshold);
  out.objective = objective_value(state.Theta_star, s, cfg.gamma, c);
  out.kkt_residual = kkt_residual(state.Theta_star, s, cfg.gamma, c);
  out.converged = converged;
  out.sweeps = state.sweep_count;
  return out;
}

}  // namespace eglasso
