#include "eglasso/tail_estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eglasso {

namespace {

// Stable ranks 1..n for one column: ties get consecutive ranks in original
// row order, so the transform is deterministic on data with duplicates.
std::vector<int> column_ranks(const Eigen::VectorXd& col) {
  const int n = static_cast<int>(col.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return col(a) < col(b); });
  std::vector<int> rank(n);
  for (int pos = 0; pos < n; ++pos) rank[order[pos]] = pos + 1;
  return rank;
}

Eigen::MatrixXd embed_with_zero_line(const Eigen::MatrixXd& block, int k) {
  const int d = static_cast<int>(block.rows()) + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  auto full_index = [&](int r) { return r < k ? r : r + 1; };
  for (int i = 0; i + 1 < d; ++i)
    for (int j = 0; j + 1 < d; ++j)
      out(full_index(i), full_index(j)) = block(i, j);
  return out;
}

}  // namespace

Eigen::MatrixXd rank_transform(const SampleMatrix& x) {
  const int n = x.n();
  const int d = x.d();
  if (n < 2) throw std::invalid_argument("need at least 2 observations");
  if (d < 2) throw std::invalid_argument("need at least 2 margins");
  Eigen::MatrixXd out(n, d);
  for (int k = 0; k < d; ++k) {
    const std::vector<int> rank = column_ranks(x.values.col(k));
    for (int i = 0; i < n; ++i) {
      // 1/(1 - r/(n+1)) = (n+1)/(n+1-r)
      out(i, k) = static_cast<double>(n + 1) / (n + 1 - rank[i]);
    }
  }
  return out;
}

ExceedanceSet select_exceedances(const Eigen::MatrixXd& x_hat, int k_n) {
  const int n = static_cast<int>(x_hat.rows());
  const int d = static_cast<int>(x_hat.cols());
  if (k_n < 1 || k_n >= n)
    throw std::invalid_argument("k_n must satisfy 1 <= k_n < n");

  const double threshold = static_cast<double>(n) / k_n;

  // Top-k_n rows per margin; after the rank transform these always exceed
  // the global threshold, so I contains every I_k.
  std::vector<std::vector<int>> top_rows(d);
  for (int k = 0; k < d; ++k) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + k_n, order.end(),
                     [&](int a, int b) {
                       if (x_hat(a, k) != x_hat(b, k))
                         return x_hat(a, k) > x_hat(b, k);
                       return a < b;  // stable tie-break by row order
                     });
    top_rows[k].assign(order.begin(), order.begin() + k_n);
    std::sort(top_rows[k].begin(), top_rows[k].end());
  }

  ExceedanceSet out;
  out.k_n = k_n;
  out.n = n;
  for (int i = 0; i < n; ++i)
    if (x_hat.row(i).maxCoeff() > threshold) out.global_index.push_back(i);
  if (out.global_index.empty())
    throw std::runtime_error("empty exceedance set");

  const int m = static_cast<int>(out.global_index.size());
  out.y_values.resize(m, d);
  std::unordered_map<int, int> position;
  position.reserve(m);
  const double scale = static_cast<double>(k_n) / n;
  for (int r = 0; r < m; ++r) {
    out.y_values.row(r) = scale * x_hat.row(out.global_index[r]);
    position[out.global_index[r]] = r;
  }

  out.per_margin_index.resize(d);
  for (int k = 0; k < d; ++k) {
    out.per_margin_index[k].reserve(k_n);
    for (int row : top_rows[k]) out.per_margin_index[k].push_back(position.at(row));
  }
  return out;
}

Eigen::MatrixXd sigma_k_hat(const ExceedanceSet& exc, int k) {
  const int d = exc.d();
  if (k < 0 || k >= d) throw std::invalid_argument("node index out of range");
  const auto& idx = exc.per_margin_index[k];
  const int count = static_cast<int>(idx.size());
  if (count < 2)
    throw std::invalid_argument("margin " + std::to_string(k + 1) +
                                " has fewer than 2 exceedances; k_n too small");

  Eigen::MatrixXd w(count, d - 1);
  for (int r = 0; r < count; ++r) {
    const double log_yk = std::log(exc.y_values(idx[r], k));
    for (int j = 0, oj = 0; j < d; ++j) {
      if (j == k) continue;
      w(r, oj++) = std::log(exc.y_values(idx[r], j)) - log_yk;
    }
  }
  const Eigen::RowVectorXd mean = w.colwise().mean();
  w.rowwise() -= mean;
  // population-style normalization with divisor k_n
  return (w.transpose() * w) / static_cast<double>(exc.k_n);
}

Eigen::MatrixXd aggregate_sigma_k_list(
    const std::vector<Eigen::MatrixXd>& sigma_k) {
  const int d = static_cast<int>(sigma_k.size());
  if (d < 2) throw std::invalid_argument("need at least 2 margins");
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
  double grand = 0.0;
  for (int k = 0; k < d; ++k) {
    sum += embed_with_zero_line(sigma_k[k], k);
    grand += sigma_k[k].sum();
  }
  const double dd = static_cast<double>(d);
  return sum / dd -
         (grand / (dd * dd * dd)) * Eigen::MatrixXd::Ones(d, d);
}

TailCovariance aggregate_S(const ExceedanceSet& exc, double M, bool parallel) {
  if (M <= 0) throw std::invalid_argument("shift M must be positive");
  const int d = exc.d();
  std::vector<Eigen::MatrixXd> blocks(d);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (parallel)
#endif
  for (int k = 0; k < d; ++k) blocks[k] = sigma_k_hat(exc, k);

  TailCovariance out;
  out.S.entries = aggregate_sigma_k_list(blocks);
  out.M = M;
  out.k_n = exc.k_n;
  out.n = exc.n;
  out.d = d;
  out.S_star = out.S.entries + M * Eigen::MatrixXd::Ones(d, d);

  Eigen::LDLT<Eigen::MatrixXd> ldlt(out.S_star);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.S_star);
    throw std::runtime_error(
        "S* is not positive definite (smallest eigenvalue " +
        std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
  return out;
}

}  // namespace eglasso
