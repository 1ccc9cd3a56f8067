#pragma once

#include <vector>

#include "eglasso/hr_core.hpp"

// Computable support-recovery diagnostics: the mutual incoherence value
// |||Omega_{E^c E} (Omega_EE)^{-1}|||_inf over the shift M, and the upper
// bound on the penalty parameter gamma.
//
// Omega = Sigma* (x) Sigma* is d^2 x d^2 and is formed densely; exact
// evaluation is intended for d up to about 60.

namespace eglasso {

struct IncoherenceReport {
  double M = 0.0;
  double value = 0.0;   // |||Omega_{E^c E} (Omega_EE)^{-1}|||_inf
  bool satisfied = false;
  double alpha = 0.0;   // 1 - value when satisfied, else 0
};

struct IncoherenceSweep {
  std::vector<IncoherenceReport> reports;
  std::vector<double> crossings;  // M values where the curve crosses 1
};

struct GammaBound {
  double upper = 0.0;  // the admissible ceiling for gamma
  double epsilon = 0.0;
  int max_degree = 0;
  double sigma_star_opnorm = 0.0;
  double omega_ee_inv_opnorm = 0.0;
};

// The index set E used for the Omega sub-blocks is the set of ordered
// off-diagonal pairs {(i,j): i != j, {i,j} is an edge} and E^c its
// complement among off-diagonal pairs; diagonal pairs enter neither set.
// Under this convention the star fixture boundary falls at M = 0.2768
// and the diamond boundaries at 0.0224 and 0.1588.
IncoherenceReport mutual_incoherence(const PrecisionTheta& theta,
                                     const EdgeSet& edges, double M);

// One report per grid point plus the value==1 crossings located by
// bisection to 1e-4 in M.  Grid entries evaluate in parallel.
IncoherenceSweep incoherence_sweep(const PrecisionTheta& theta,
                                   const EdgeSet& edges,
                                   const std::vector<double>& m_grid,
                                   bool parallel = true);

GammaBound gamma_upper_bound(const PrecisionTheta& theta, const EdgeSet& edges,
                             double M, double epsilon);

}  // namespace eglasso
