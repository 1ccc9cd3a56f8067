#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "eglasso/simulator.hpp"
#include "eglasso/solver.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace eglasso;
using testutil::max_abs;

TEST_CASE("inner_lasso limiting cases") {
  std::mt19937_64 rng(29);
  const Eigen::MatrixXd q = testutil::random_spd(4, rng);
  Eigen::VectorXd s(4);
  s << 0.3, -0.8, 0.1, 0.5;
  const double sigma_dd = 1.3, c = 0.05;

  SUBCASE("huge gamma forces beta to zero") {
    const Eigen::VectorXd beta = inner_lasso(
        q, sigma_dd, s, 1e6, c, Eigen::VectorXd::Zero(4), 1e-12, 10000);
    CHECK(beta.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("gamma=0 solves the stationarity system exactly") {
    const Eigen::VectorXd beta = inner_lasso(
        q, sigma_dd, s, 0.0, c, Eigen::VectorXd::Zero(4), 1e-14, 100000);
    const Eigen::VectorXd expect =
        -q.ldlt().solve(s) - c * sigma_dd * Eigen::VectorXd::Ones(4);
    CHECK((beta - expect).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("scalar case is a single soft-threshold") {
    Eigen::MatrixXd q1(1, 1);
    q1 << 2.0;
    Eigen::VectorXd s1(1);
    s1 << 0.7;
    const double gamma = 0.2;
    const Eigen::VectorXd beta = inner_lasso(
        q1, sigma_dd, s1, gamma, c, Eigen::VectorXd::Zero(1), 1e-14, 100);
    const double raw = -(c * sigma_dd * 2.0 + 0.7);
    const double expect =
        (std::abs(raw) <= gamma ? 0.0
                                : (raw > 0 ? raw - gamma : raw + gamma)) /
        2.0;
    CHECK(beta(0) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("solve at gamma=0 recovers the dense inverse") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 3 + 2 * trial;
    const Eigen::MatrixXd s_star = testutil::random_spd(d, rng);
    SolverConfig cfg;
    cfg.gamma = 0.0;
    const FitResult fit = solve(s_star, cfg);
    const Eigen::MatrixXd direct =
        s_star.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    CHECK(fit.converged);
    CHECK(max_abs(fit.theta_star - direct) < 1e-6);
    CHECK(fit.kkt_residual < 1e-6);
  }
}

TEST_CASE("exact S on the star model recovers the star graph") {
  const PrecisionTheta theta = star_theta();
  const double M = 0.25;
  const Eigen::MatrixXd s_star = sigma_star_from_theta(theta, M).entries;
  SolverConfig cfg;
  cfg.gamma = 0.2;
  cfg.M = M;
  cfg.edge_threshold = 0.01;
  const FitResult fit = solve(s_star, cfg);
  CHECK(fit.converged);
  CHECK(fit.edges == star_edges());
}

TEST_CASE("huge gamma shrinks every off-diagonal to the center") {
  std::mt19937_64 rng(37);
  const int d = 3;
  const Eigen::MatrixXd s_star = testutil::random_spd(d, rng);
  SolverConfig cfg;
  cfg.gamma = 10.0 * s_star.cwiseAbs().maxCoeff();
  cfg.M = 1.0;
  const double c = cfg.center(d);
  const FitResult fit = solve(s_star, cfg);
  CHECK(fit.converged);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j)
        CHECK(std::abs(fit.theta_star(i, j) - c) < 1e-12);
  CHECK(fit.edges.edges.empty());
}

TEST_CASE("column_update keeps the inverse pair consistent") {
  std::mt19937_64 rng(41);
  const int d = 6;
  const Eigen::MatrixXd s_star = testutil::random_spd(d, rng);
  SolverConfig cfg;
  cfg.gamma = 0.1;
  cfg.M = 1.0;

  SolverState state;
  state.Sigma_cur = s_star;
  state.Theta_star = s_star.ldlt().solve(Eigen::MatrixXd::Identity(d, d));

  for (int col = 0; col < d; ++col) {
    column_update(state, s_star, col, cfg);
    const Eigen::VectorXd unit =
        state.Sigma_cur * state.Theta_star.col(col);
    Eigen::VectorXd expect = Eigen::VectorXd::Zero(d);
    expect(col) = 1.0;
    CHECK((unit - expect).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("column_update gamma=0 fixed point and 2x2 closed form") {
  Eigen::MatrixXd s_star(2, 2);
  const double a = 2.0, b = 0.6;
  s_star << a, b, b, a;
  SolverConfig cfg;
  cfg.gamma = 0.0;
  cfg.M = 1.0;

  SolverState state;
  state.Sigma_cur = s_star;
  state.Theta_star = s_star.inverse();
  for (int sweep = 0; sweep < 2; ++sweep)
    for (int col = 0; col < 2; ++col) column_update(state, s_star, col, cfg);
  const double det = a * a - b * b;
  CHECK(state.Theta_star(0, 0) == doctest::Approx(a / det).epsilon(1e-10));
  CHECK(state.Theta_star(0, 1) == doctest::Approx(-b / det).epsilon(1e-10));

  // with gamma=0 and exact inputs one more sweep changes nothing
  const Eigen::MatrixXd before = state.Sigma_cur;
  for (int col = 0; col < 2; ++col) column_update(state, s_star, col, cfg);
  CHECK(max_abs(state.Sigma_cur - before) < 1e-12);
}

TEST_CASE("kkt_residual subgradient arithmetic") {
  std::mt19937_64 rng(43);
  const int d = 4;
  const Eigen::MatrixXd s_star = testutil::random_spd(d, rng);
  const Eigen::MatrixXd inv =
      s_star.ldlt().solve(Eigen::MatrixXd::Identity(d, d));

  CHECK(kkt_residual(inv, s_star, 0.0, 0.0) < 1e-8);

  // Theta* = (S*)^{-1} with gamma > 0: residual is exactly gamma at
  // off-diagonal entries away from the center
  const double gamma = 0.3;
  CHECK(kkt_residual(inv, s_star, gamma, 0.0) ==
        doctest::Approx(gamma).epsilon(1e-9));
}

TEST_CASE("objective is monotone across column updates") {
  std::mt19937_64 rng(47);
  const int d = 8;
  const Eigen::MatrixXd s_star = testutil::random_spd(d, rng);
  SolverConfig cfg;
  cfg.gamma = 0.15;
  cfg.M = 1.0;
  const double c = cfg.center(d);

  SolverState state;
  state.Sigma_cur = s_star;
  state.Theta_star = s_star.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
  double prev = objective_value(state.Theta_star, s_star, cfg.gamma, c);
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int col = 0; col < d; ++col) {
      column_update(state, s_star, col, cfg);
      const double cur =
          objective_value(state.Theta_star, s_star, cfg.gamma, c);
      CHECK(cur <= prev + 1e-9 * std::abs(prev));
      prev = cur;
    }
  }
}

TEST_CASE("solve output symmetry and inverse consistency") {
  std::mt19937_64 rng(53);
  const Eigen::MatrixXd s_star = testutil::random_spd(10, rng);
  SolverConfig cfg;
  cfg.gamma = 0.2;
  const FitResult fit = solve(s_star, cfg);
  CHECK(fit.converged);
  CHECK(max_abs(fit.theta_star - fit.theta_star.transpose()) < 1e-10);
  const Eigen::MatrixXd direct =
      fit.theta_star.ldlt().solve(Eigen::MatrixXd::Identity(10, 10));
  // tracked Sigma matches a direct inversion at convergence; probe via the
  // KKT residual identity instead of exposing the internal state
  CHECK(fit.kkt_residual < 1e-5);
}

TEST_CASE("modified mode equals shifted mode at enormous M") {
  std::mt19937_64 rng(59);
  const Eigen::MatrixXd s_star = testutil::random_spd(6, rng);
  SolverConfig shifted;
  shifted.gamma = 0.1;
  shifted.M = 1e9;
  shifted.mode = PenaltyMode::shifted;
  SolverConfig modified = shifted;
  modified.mode = PenaltyMode::modified;
  const FitResult a = solve(s_star, shifted);
  const FitResult b = solve(s_star, modified);
  CHECK(max_abs(a.theta_star - b.theta_star) < 1e-6);
}

TEST_CASE("brute-force oracle agreement on d=3 problems") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::MatrixXd s_star = testutil::random_spd(3, rng);
    for (double gamma : {0.05, 0.1, 0.3}) {
      SolverConfig cfg;
      cfg.gamma = gamma;
      cfg.M = 1.0;
      cfg.outer_tol = 1e-10;
      const FitResult fit = solve(s_star, cfg);
      const double c = cfg.center(3);
      const double oracle_obj =
          oracle::brute_force_minimum(s_star, gamma, c);
      CHECK(std::abs(fit.objective - oracle_obj) < 1e-5);
    }
  }
}

TEST_CASE("solve rejects invalid inputs") {
  Eigen::MatrixXd not_pd(2, 2);
  not_pd << 1, 2, 2, 1;
  SolverConfig cfg;
  CHECK_THROWS(solve(not_pd, cfg));
  cfg.gamma = -1;
  CHECK_THROWS(solve(Eigen::MatrixXd::Identity(3, 3), cfg));
}
