#include "eglasso/hr_core.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace eglasso {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

int EdgeSet::max_degree() const {
  std::vector<int> deg(d, 0);
  for (const auto& [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  int best = 0;
  for (int v : deg) best = std::max(best, v);
  return best;
}

Eigen::MatrixXd CovarianceSigma::unshifted() const {
  if (!shift) return entries;
  const int d = dim();
  return entries - *shift * Eigen::MatrixXd::Ones(d, d);
}

Eigen::MatrixXd PrecisionTheta::unshifted() const {
  if (!shift_c) return entries;
  const int d = dim();
  return entries - *shift_c * Eigen::MatrixXd::Ones(d, d);
}

MatrixNorms matrix_norms(const Eigen::MatrixXd& a) {
  MatrixNorms out{};
  out.elementwise_max = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  out.operator_inf =
      a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
  return out;
}

Eigen::MatrixXd enforce_symmetry(const Eigen::MatrixXd& a, double warn_tol,
                                 double error_tol) {
  require(a.rows() == a.cols(), "matrix must be square");
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > error_tol)
    throw std::invalid_argument("matrix asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");
  if (asym > warn_tol)
    std::cerr << "warning: symmetrizing input with asymmetry " << asym << "\n";
  return 0.5 * (a + a.transpose());
}

CovarianceSigma sigma_from_variogram(const VariogramMatrix& gamma) {
  const int d = gamma.dim();
  require(d >= 2, "variogram dimension must be >= 2");
  Eigen::MatrixXd g = enforce_symmetry(gamma.entries);
  require(g.diagonal().cwiseAbs().maxCoeff() <= 1e-12,
          "variogram diagonal must be zero");
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(d, d) - Eigen::MatrixXd::Ones(d, d) / d;
  CovarianceSigma out;
  out.entries = -0.5 * p * g * p;
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  return out;
}

VariogramMatrix variogram_from_sigma(const CovarianceSigma& sigma) {
  require(!sigma.is_shifted(), "expected an unshifted Sigma");
  Eigen::MatrixXd s = enforce_symmetry(sigma.entries);
  const int d = sigma.dim();
  VariogramMatrix out;
  out.entries.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out.entries(i, j) = s(i, i) + s(j, j) - 2.0 * s(i, j);
  out.entries.diagonal().setZero();
  return out;
}

Eigen::MatrixXd sigma_k_from_variogram(const VariogramMatrix& gamma, int k) {
  const int d = gamma.dim();
  require(k >= 0 && k < d, "node index out of range");
  const Eigen::MatrixXd& g = gamma.entries;
  Eigen::MatrixXd out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      out(i, j) = 0.5 * (g(i, k) + g(j, k) - g(i, j));
  return out;
}

PrecisionTheta theta_star_from_sigma(const CovarianceSigma& sigma, double M) {
  require(M > 0, "shift M must be positive");
  require(!sigma.is_shifted(), "expected an unshifted Sigma");
  const int d = sigma.dim();
  Eigen::MatrixXd shifted =
      enforce_symmetry(sigma.entries) + M * Eigen::MatrixXd::Ones(d, d);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("Sigma + M 11^T is not positive definite");
  PrecisionTheta out;
  out.entries = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  out.shift_c = 1.0 / (static_cast<double>(d) * d * M);
  return out;
}

CovarianceSigma sigma_star_from_theta(const PrecisionTheta& theta, double M) {
  require(M > 0, "shift M must be positive");
  const int d = theta.dim();
  const double c = 1.0 / (static_cast<double>(d) * d * M);
  Eigen::MatrixXd shifted =
      enforce_symmetry(theta.unshifted()) + c * Eigen::MatrixXd::Ones(d, d);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("Theta + c 11^T is not positive definite");
  CovarianceSigma out;
  out.entries = ldlt.solve(Eigen::MatrixXd::Identity(d, d));
  out.entries = 0.5 * (out.entries + out.entries.transpose()).eval();
  out.shift = M;
  return out;
}

PrecisionTheta theta_from_theta_k(const Eigen::MatrixXd& theta_k, int k) {
  const int dm1 = static_cast<int>(theta_k.rows());
  const int d = dm1 + 1;
  require(k >= 0 && k < d, "node index out of range");
  Eigen::MatrixXd tk = enforce_symmetry(theta_k);
  PrecisionTheta out;
  out.entries.setZero(d, d);
  auto full_index = [&](int r) { return r < k ? r : r + 1; };
  for (int i = 0; i < dm1; ++i)
    for (int j = 0; j < dm1; ++j)
      out.entries(full_index(i), full_index(j)) = tk(i, j);
  for (int i = 0; i < dm1; ++i) {
    const double row_sum = tk.row(i).sum();
    out.entries(full_index(i), k) = -row_sum;
    out.entries(k, full_index(i)) = -row_sum;
  }
  out.entries(k, k) = tk.sum();
  return out;
}

Eigen::MatrixXd submatrix_drop(const Eigen::MatrixXd& m, int k) {
  const int d = static_cast<int>(m.rows());
  if (k < 0 || k >= d) throw std::invalid_argument("node index out of range");
  Eigen::MatrixXd out(d - 1, d - 1);
  for (int i = 0, oi = 0; i < d; ++i) {
    if (i == k) continue;
    for (int j = 0, oj = 0; j < d; ++j) {
      if (j == k) continue;
      out(oi, oj) = m(i, j);
      ++oj;
    }
    ++oi;
  }
  return out;
}

Eigen::MatrixXd submatrix_drop(const PrecisionTheta& theta, int k) {
  return submatrix_drop(theta.entries, k);
}

EdgeSet graph_from_theta(const PrecisionTheta& theta, double threshold) {
  require(threshold >= 0, "threshold must be nonnegative");
  const Eigen::MatrixXd t = theta.unshifted();
  EdgeSet out;
  out.d = theta.dim();
  for (int i = 0; i < out.d; ++i)
    for (int j = i + 1; j < out.d; ++j)
      if (std::abs(t(i, j)) > threshold) out.add(i, j);
  return out;
}

}  // namespace eglasso
