#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>

#include "eglasso/diagnostics.hpp"
#include "eglasso/simulator.hpp"
#include "test_util.hpp"

using namespace eglasso;
using testutil::max_abs;

namespace {

std::vector<double> uniform_grid(double lo, double hi, int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = lo + (hi - lo) * i / (count - 1);
  return grid;
}

}  // namespace

TEST_CASE("mutual_incoherence satisfied spot checks") {
  const PrecisionTheta star = star_theta();
  CHECK(mutual_incoherence(star, star_edges(), 0.25).satisfied);
  CHECK_FALSE(mutual_incoherence(star, star_edges(), 0.5).satisfied);

  const PrecisionTheta diamond = diamond_theta();
  CHECK(mutual_incoherence(diamond, diamond_edges(), 0.15).satisfied);
  CHECK_FALSE(mutual_incoherence(diamond, diamond_edges(), 0.01).satisfied);
}

TEST_CASE("alpha is the complement of the value when satisfied") {
  const IncoherenceReport r =
      mutual_incoherence(star_theta(), star_edges(), 0.1);
  REQUIRE(r.satisfied);
  CHECK(r.value < 1.0);
  CHECK(r.value > 0.0);
  CHECK(r.alpha == doctest::Approx(1.0 - r.value).epsilon(1e-14));

  const IncoherenceReport bad =
      mutual_incoherence(star_theta(), star_edges(), 2.0);
  REQUIRE_FALSE(bad.satisfied);
  CHECK(bad.alpha == 0.0);
}

TEST_CASE("full graph leaves an empty complement") {
  // with every pair an edge, E^c is empty and the norm is zero
  EdgeSet full;
  full.d = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) full.add(i, j);
  std::mt19937_64 rng(3);
  const PrecisionTheta theta = testutil::random_laplacian_theta(4, rng);
  const IncoherenceReport r = mutual_incoherence(theta, full, 0.3);
  CHECK(r.satisfied);
  CHECK(r.value == 0.0);
  CHECK(r.alpha == 1.0);
}

TEST_CASE("sweep locates the star boundary") {
  const IncoherenceSweep sweep = incoherence_sweep(
      star_theta(), star_edges(), uniform_grid(0.02, 0.6, 30));
  REQUIRE(sweep.crossings.size() == 1);
  CHECK(std::abs(sweep.crossings[0] - 0.2768) < 0.001);
}

TEST_CASE("sweep locates both diamond boundaries") {
  const IncoherenceSweep sweep = incoherence_sweep(
      diamond_theta(), diamond_edges(), uniform_grid(0.005, 0.3, 60));
  REQUIRE(sweep.crossings.size() == 2);
  CHECK(std::abs(sweep.crossings[0] - 0.0224) < 0.001);
  CHECK(std::abs(sweep.crossings[1] - 0.1588) < 0.001);
}

TEST_CASE("sweep on a single point yields no crossing") {
  const IncoherenceSweep sweep =
      incoherence_sweep(star_theta(), star_edges(), {0.1});
  CHECK(sweep.reports.size() == 1);
  CHECK(sweep.crossings.empty());
  CHECK(sweep.reports[0].M == doctest::Approx(0.1));
}

TEST_CASE("sweep serial and parallel paths agree") {
  const auto grid = uniform_grid(0.01, 0.25, 16);
  const IncoherenceSweep par =
      incoherence_sweep(diamond_theta(), diamond_edges(), grid, true);
  const IncoherenceSweep ser =
      incoherence_sweep(diamond_theta(), diamond_edges(), grid, false);
  REQUIRE(par.reports.size() == ser.reports.size());
  for (size_t i = 0; i < par.reports.size(); ++i)
    CHECK(par.reports[i].value == ser.reports[i].value);
  REQUIRE(par.crossings.size() == ser.crossings.size());
  for (size_t i = 0; i < par.crossings.size(); ++i)
    CHECK(par.crossings[i] == ser.crossings[i]);
}

TEST_CASE("value is continuous along a fine grid") {
  const auto grid = uniform_grid(0.05, 0.5, 100);
  const IncoherenceSweep sweep =
      incoherence_sweep(star_theta(), star_edges(), grid);
  double max_jump = 0.0;
  for (size_t i = 1; i + 1 < sweep.reports.size(); ++i) {
    const double left =
        std::abs(sweep.reports[i].value - sweep.reports[i - 1].value);
    const double right =
        std::abs(sweep.reports[i + 1].value - sweep.reports[i].value);
    max_jump = std::max(max_jump, std::min(left, right) > 0
                                      ? std::max(left, right) /
                                            std::min(left, right)
                                      : 1.0);
  }
  CHECK(max_jump < 10.0);
}

TEST_CASE("Kronecker identity spot check") {
  std::mt19937_64 rng(7);
  const PrecisionTheta theta = testutil::random_laplacian_theta(4, rng);
  const Eigen::MatrixXd sigma_star =
      sigma_star_from_theta(theta, 0.3).entries;
  const Eigen::MatrixXd omega =
      Eigen::kroneckerProduct(sigma_star, sigma_star);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd delta(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) delta(i, j) = normal(rng);
  const Eigen::MatrixXd product = sigma_star * delta * sigma_star;
  const Eigen::VectorXd lhs =
      omega * Eigen::Map<const Eigen::VectorXd>(delta.data(), 16);
  const Eigen::VectorXd rhs =
      Eigen::Map<const Eigen::VectorXd>(product.data(), 16);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gamma_upper_bound on the star fixture") {
  const GammaBound b = gamma_upper_bound(star_theta(), star_edges(), 0.25, 0.5);
  CHECK(b.upper > 0.0);
  CHECK(b.max_degree == 3);
  CHECK(b.sigma_star_opnorm > 0.0);
  CHECK(b.omega_ee_inv_opnorm > 0.0);

  // direct formula recomputation from the reported norms
  const IncoherenceReport r =
      mutual_incoherence(star_theta(), star_edges(), 0.25);
  const double alpha = r.alpha, eps = 0.5;
  const double expect =
      (1 - eps) * alpha * (1 - alpha) /
      (b.max_degree * b.sigma_star_opnorm * b.omega_ee_inv_opnorm *
       ((1 - eps) * alpha +
        b.sigma_star_opnorm * b.sigma_star_opnorm * b.omega_ee_inv_opnorm));
  CHECK(b.upper == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("gamma_upper_bound vanishes as epsilon approaches one") {
  const double near_one =
      gamma_upper_bound(star_theta(), star_edges(), 0.25, 1.0 - 1e-9).upper;
  CHECK(near_one < 1e-6);
  CHECK(near_one >= 0.0);
  const double mid =
      gamma_upper_bound(star_theta(), star_edges(), 0.25, 0.5).upper;
  CHECK(mid > near_one);
}

TEST_CASE("gamma_upper_bound rejects violated incoherence") {
  CHECK_THROWS(gamma_upper_bound(star_theta(), star_edges(), 0.5, 0.5));
  CHECK_THROWS(gamma_upper_bound(star_theta(), star_edges(), 0.25, 0.0));
  CHECK_THROWS(gamma_upper_bound(star_theta(), star_edges(), 0.25, 1.0));
}
