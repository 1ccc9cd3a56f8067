#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eglasso/hr_core.hpp"

// Empirical tail pipeline: rank transform, exceedance selection and the
// aggregated tail covariance S (and S* = S + M 11^T).

namespace eglasso {

struct SampleMatrix {
  Eigen::MatrixXd values;  // n x d raw observations
  std::vector<std::string> labels;

  int n() const { return static_cast<int>(values.rows()); }
  int d() const { return static_cast<int>(values.cols()); }
};

struct ExceedanceSet {
  Eigen::MatrixXd y_values;      // m x d rows of Y-hat, every row has max > 1
  std::vector<int> global_index;  // original sample rows in I, ascending
  // per_margin_index[k]: positions into y_values rows with the top-k_n
  // margin-k values; |per_margin_index[k]| == k_n for every k.
  std::vector<std::vector<int>> per_margin_index;
  int k_n = 0;
  int n = 0;

  int m() const { return static_cast<int>(y_values.rows()); }
  int d() const { return static_cast<int>(y_values.cols()); }
};

struct TailCovariance {
  CovarianceSigma S;        // unshifted, 1^T S 1 = 0
  double M = 1.0;
  Eigen::MatrixXd S_star;   // S + M 11^T, positive definite
  int k_n = 0;
  int n = 0;
  int d = 0;
};

// Per-column empirical Pareto transform: Xhat = 1/(1 - rank/(n+1)) with
// ranks 1..n, ties broken by original row order.  Outputs lie in (1, n+1).
Eigen::MatrixXd rank_transform(const SampleMatrix& x);

// I = rows with max entry of Xhat above n/k_n; Y rows are (k_n/n) Xhat.
ExceedanceSet select_exceedances(const Eigen::MatrixXd& x_hat, int k_n);

// Sample covariance (divisor k_n) of W^(k)_i = log Y_{i,-k} - log(Y_ik) 1
// over I_k; returns a (d-1)x(d-1) matrix.  k is 0-based.
Eigen::MatrixXd sigma_k_hat(const ExceedanceSet& exc, int k);

// Averages the embedded per-margin covariances and removes the rank-one
// drift so that 1^T S 1 = 0; stores S* = S + M 11^T.
// The d per-margin computations run under OpenMP when `parallel` is true;
// results are written to pre-allocated slots so the aggregate is identical
// to the serial path bit for bit.
TailCovariance aggregate_S(const ExceedanceSet& exc, double M,
                           bool parallel = true);

// Same aggregation applied to externally supplied per-margin covariances
// (sigma_k[k] is (d-1)x(d-1), indexed without row/column k).
Eigen::MatrixXd aggregate_sigma_k_list(
    const std::vector<Eigen::MatrixXd>& sigma_k);

}  // namespace eglasso
