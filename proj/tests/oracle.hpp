#pragma once

// Independent brute-force minimizer for the penalized log-determinant
// objective, used only as a test oracle.  It shares no code path with the
// blockwise solver: it performs exact line searches over the free entries
// of the symmetric matrix via golden-section on the convex one-dimensional
// restrictions, with +infinity outside the positive definite cone.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace eglasso::oracle {

inline double penalized_objective(const Eigen::MatrixXd& theta,
                                  const Eigen::MatrixXd& s_star, double gamma,
                                  double c) {
  Eigen::LLT<Eigen::MatrixXd> llt(theta);
  if (llt.info() != Eigen::Success)
    return std::numeric_limits<double>::infinity();
  double log_det = 0.0;
  for (int i = 0; i < theta.rows(); ++i) {
    const double l = llt.matrixLLT()(i, i);
    if (!(l > 0)) return std::numeric_limits<double>::infinity();
    log_det += 2.0 * std::log(l);
  }
  double penalty = 0.0;
  for (int i = 0; i < theta.rows(); ++i)
    for (int j = 0; j < theta.cols(); ++j)
      if (i != j) penalty += std::abs(theta(i, j) - c);
  return -log_det + (s_star * theta).trace() + gamma * penalty;
}

// Line minimization of a convex function that is +infinity outside an
// unknown sub-interval of [lo, hi].  `finite_pt` must satisfy
// f(finite_pt) < infinity; probes that land in the infinite region cut
// the interval on the side away from it.
template <typename F>
double convex_line_minimize(F f, double lo, double hi, double finite_pt,
                            double tol) {
  const double inf = std::numeric_limits<double>::infinity();
  double a = lo, b = hi;
  double known = finite_pt;
  double known_val = f(known);
  while (b - a > tol) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    const double f1 = f(m1);
    const double f2 = f(m2);
    if (f1 < known_val) {
      known = m1;
      known_val = f1;
    }
    if (f2 < known_val) {
      known = m2;
      known_val = f2;
    }
    if (f1 == inf) {
      // the finite interval lies entirely on one side of m1
      if (known > m1)
        a = m1;
      else
        b = m1;
    } else if (f2 == inf) {
      if (known < m2)
        b = m2;
      else
        a = m2;
    } else if (f1 < f2) {
      b = m2;
    } else {
      a = m1;
    }
    // keep the finite reference point inside [a, b]; both probes are
    // inside after any of the finite cuts above
    if (known < a || known > b) {
      known = (m1 >= a && m1 <= b) ? m1 : m2;
      known_val = f(known);
    }
  }
  const double mid = 0.5 * (a + b);
  return f(mid) <= known_val ? mid : known;
}

// Cyclic exact coordinate minimization over the free entries of the
// symmetric matrix.  Returns the best objective found.
inline double brute_force_minimum(const Eigen::MatrixXd& s_star, double gamma,
                                  double c, int max_cycles = 400,
                                  double cycle_tol = 1e-13) {
  const int d = static_cast<int>(s_star.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(s_star);
  Eigen::MatrixXd theta = llt.solve(Eigen::MatrixXd::Identity(d, d));
  theta = 0.5 * (theta + theta.transpose()).eval();

  double obj = penalized_objective(theta, s_star, gamma, c);
  const double span = 4.0 * std::max(1.0, theta.cwiseAbs().maxCoeff());
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    const double before = obj;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        const double cur = theta(i, j);
        auto f = [&](double v) {
          Eigen::MatrixXd trial = theta;
          trial(i, j) = v;
          trial(j, i) = v;
          return penalized_objective(trial, s_star, gamma, c);
        };
        double best =
            convex_line_minimize(f, cur - span, cur + span, cur, 1e-12);
        // the kink at the penalty center is a frequent exact minimizer
        if (i != j && f(c) <= f(best)) best = c;
        if (f(best) <= f(cur)) {
          theta(i, j) = best;
          theta(j, i) = best;
        }
      }
    }
    obj = penalized_objective(theta, s_star, gamma, c);
    if (before - obj < cycle_tol) break;
  }
  return obj;
}

}  // namespace eglasso::oracle
