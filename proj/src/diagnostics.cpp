#include "eglasso/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eglasso {

namespace {

struct PairIndexSets {
  std::vector<std::pair<int, int>> e;   // ordered off-diagonal edge pairs
  std::vector<std::pair<int, int>> ec;  // ordered off-diagonal non-edges
};

// Diagonal pairs belong to neither set: the condition constrains the
// off-diagonal support only.  Including the diagonal in E (or in E^c)
// shifts the star and diamond fixture boundaries away from their
// reference locations (0.2768; 0.0224 and 0.1588).
PairIndexSets split_pairs(const EdgeSet& edges, int d) {
  PairIndexSets out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      if (edges.contains(i, j))
        out.e.emplace_back(i, j);
      else
        out.ec.emplace_back(i, j);
    }
  return out;
}

// Omega_{(i,j),(k,l)} = Sigma*_ik Sigma*_jl
Eigen::MatrixXd omega_block(const Eigen::MatrixXd& sigma_star,
                            const std::vector<std::pair<int, int>>& rows,
                            const std::vector<std::pair<int, int>>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b)
      out(a, b) = sigma_star(rows[a].first, cols[b].first) *
                  sigma_star(rows[a].second, cols[b].second);
  return out;
}

double incoherence_value(const PrecisionTheta& theta, const EdgeSet& edges,
                         double M) {
  const int d = theta.dim();
  const Eigen::MatrixXd sigma_star = sigma_star_from_theta(theta, M).entries;
  const PairIndexSets sets = split_pairs(edges, d);
  if (sets.ec.empty()) return 0.0;  // complete graph, nothing to bound
  const Eigen::MatrixXd omega_ee = omega_block(sigma_star, sets.e, sets.e);
  const Eigen::MatrixXd omega_e_ec = omega_block(sigma_star, sets.e, sets.ec);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(omega_ee);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("Omega_EE is singular");
  // A = Omega_{E^c E} Omega_EE^{-1}; by symmetry A^T = Omega_EE^{-1} Omega_{E E^c},
  // so row L1 norms of A are column L1 norms of the solve below.
  const Eigen::MatrixXd x = ldlt.solve(omega_e_ec);
  return x.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

IncoherenceReport mutual_incoherence(const PrecisionTheta& theta,
                                     const EdgeSet& edges, double M) {
  if (M <= 0) throw std::invalid_argument("M must be positive");
  IncoherenceReport out;
  out.M = M;
  out.value = incoherence_value(theta, edges, M);
  out.satisfied = out.value < 1.0;
  out.alpha = out.satisfied ? 1.0 - out.value : 0.0;
  return out;
}

IncoherenceSweep incoherence_sweep(const PrecisionTheta& theta,
                                   const EdgeSet& edges,
                                   const std::vector<double>& m_grid,
                                   bool parallel) {
  if (m_grid.empty()) throw std::invalid_argument("empty M grid");
  IncoherenceSweep out;
  out.reports.resize(m_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (std::size_t i = 0; i < m_grid.size(); ++i)
    out.reports[i] = mutual_incoherence(theta, edges, m_grid[i]);

  for (std::size_t i = 0; i + 1 < out.reports.size(); ++i) {
    const double f_lo = out.reports[i].value - 1.0;
    const double f_hi = out.reports[i + 1].value - 1.0;
    if (f_lo == 0.0 || f_lo * f_hi >= 0.0) continue;
    double lo = out.reports[i].M, hi = out.reports[i + 1].M;
    double v_lo = f_lo;
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      const double v_mid = incoherence_value(theta, edges, mid) - 1.0;
      if ((v_lo < 0) == (v_mid < 0)) {
        lo = mid;
        v_lo = v_mid;
      } else {
        hi = mid;
      }
    }
    out.crossings.push_back(0.5 * (lo + hi));
  }
  return out;
}

GammaBound gamma_upper_bound(const PrecisionTheta& theta, const EdgeSet& edges,
                             double M, double epsilon) {
  if (epsilon <= 0 || epsilon >= 1)
    throw std::invalid_argument("epsilon must lie in (0,1)");
  const IncoherenceReport rep = mutual_incoherence(theta, edges, M);
  if (!rep.satisfied)
    throw std::runtime_error("mutual incoherence is violated at M = " +
                             std::to_string(M));
  const int d = theta.dim();
  const Eigen::MatrixXd sigma_star = sigma_star_from_theta(theta, M).entries;
  const PairIndexSets sets = split_pairs(edges, d);
  const Eigen::MatrixXd omega_ee = omega_block(sigma_star, sets.e, sets.e);
  const Eigen::MatrixXd omega_ee_inv =
      omega_ee.ldlt().solve(Eigen::MatrixXd::Identity(
          static_cast<int>(sets.e.size()), static_cast<int>(sets.e.size())));

  GammaBound out;
  out.epsilon = epsilon;
  out.max_degree = edges.max_degree();
  out.sigma_star_opnorm = matrix_norms(sigma_star).operator_inf;
  out.omega_ee_inv_opnorm = matrix_norms(omega_ee_inv).operator_inf;
  const double alpha = rep.alpha;
  const double num = (1.0 - epsilon) * alpha * (1.0 - alpha);
  const double den =
      out.max_degree * out.sigma_star_opnorm * out.omega_ee_inv_opnorm *
      ((1.0 - epsilon) * alpha +
       out.sigma_star_opnorm * out.sigma_star_opnorm * out.omega_ee_inv_opnorm);
  out.upper = num / den;
  return out;
}

}  // namespace eglasso
