#pragma once

#include <Eigen/Dense>
#include <optional>
#include <set>
#include <utility>

// Exact Huesler-Reiss model algebra: transforms among the variogram Gamma,
// the degenerate covariance Sigma (Sigma 1 = 0), its shifted full-rank form
// Sigma* = Sigma + M 11^T, the precision matrix Theta (Theta 1 = 0) and its
// shifted form Theta* = Theta + 11^T/(d^2 M).
//
// Node indices are 0-based everywhere in the library; the CLI and the JSON
// formats use 1-based indices and translate at the boundary.

namespace eglasso {

// Undirected simple graph on nodes {0,...,d-1}; pairs stored with i < j.
struct EdgeSet {
  int d = 0;
  std::set<std::pair<int, int>> edges;

  void add(int i, int j) {
    if (i > j) std::swap(i, j);
    edges.insert({i, j});
  }
  bool contains(int i, int j) const {
    if (i > j) std::swap(i, j);
    return edges.count({i, j}) > 0;
  }
  int max_degree() const;
  bool operator==(const EdgeSet&) const = default;
};

// d x d symmetric matrix with zero diagonal and positive off-diagonals,
// Gamma_ij = E(W_i - W_j)^2.
struct VariogramMatrix {
  Eigen::MatrixXd entries;

  int dim() const { return static_cast<int>(entries.rows()); }
};

// When `shift` is set the matrix stored is Sigma* = Sigma + shift * 11^T.
struct CovarianceSigma {
  Eigen::MatrixXd entries;
  std::optional<double> shift;

  int dim() const { return static_cast<int>(entries.rows()); }
  bool is_shifted() const { return shift.has_value(); }
  Eigen::MatrixXd unshifted() const;
};

// When `shift_c` is set the matrix stored is Theta* = Theta + shift_c * 11^T
// with shift_c = 1/(d^2 M).
struct PrecisionTheta {
  Eigen::MatrixXd entries;
  std::optional<double> shift_c;

  int dim() const { return static_cast<int>(entries.rows()); }
  bool is_shifted() const { return shift_c.has_value(); }
  Eigen::MatrixXd unshifted() const;
};

struct MatrixNorms {
  double elementwise_max;  // max |A_ij|
  double operator_inf;     // max row L1 sum
};

MatrixNorms matrix_norms(const Eigen::MatrixXd& a);

// Symmetrizes (A + A^T)/2. Warns on stderr if the asymmetry exceeds
// `warn_tol`, throws std::invalid_argument above `error_tol`.
Eigen::MatrixXd enforce_symmetry(const Eigen::MatrixXd& a,
                                 double warn_tol = 1e-10,
                                 double error_tol = 1e-6);

// Sigma = -1/2 P Gamma P with P = I - 11^T/d.  Satisfies Sigma 1 = 0.
CovarianceSigma sigma_from_variogram(const VariogramMatrix& gamma);

// Gamma_ij = Sigma_ii + Sigma_jj - 2 Sigma_ij; inverse of the above.
VariogramMatrix variogram_from_sigma(const CovarianceSigma& sigma);

// SigmaTilde^(k) = 1/2 {Gamma_ik + Gamma_jk - Gamma_ij}_{ij}; row/column k
// of the result are zero.  k is 0-based.
Eigen::MatrixXd sigma_k_from_variogram(const VariogramMatrix& gamma, int k);

// Theta* = (Sigma + M 11^T)^{-1}, carrying shift_c = 1/(d^2 M).
PrecisionTheta theta_star_from_sigma(const CovarianceSigma& sigma, double M);

// Sigma* = (Theta + 11^T/(d^2 M))^{-1}; inverse direction of the above.
CovarianceSigma sigma_star_from_theta(const PrecisionTheta& theta, double M);

// Embeds the (d-1)x(d-1) block Theta^(k) and fills row/column k so that
// Theta 1 = 0 holds exactly.  k is 0-based.
PrecisionTheta theta_from_theta_k(const Eigen::MatrixXd& theta_k, int k);

// Removes row/column k; left inverse of theta_from_theta_k.
Eigen::MatrixXd submatrix_drop(const PrecisionTheta& theta, int k);
Eigen::MatrixXd submatrix_drop(const Eigen::MatrixXd& m, int k);

// Edge (i,j) present iff |Theta_ij| > threshold for i != j.
EdgeSet graph_from_theta(const PrecisionTheta& theta, double threshold);

}  // namespace eglasso
