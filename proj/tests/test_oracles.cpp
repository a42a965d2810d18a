// The oracles referee the implementation, so each one is pinned against
// closed forms that are independent of everything else in the project.
#include <doctest.h>

#include <cmath>

#include "helice/sto.hpp"
#include "oracles/grid_rdm.hpp"
#include "oracles/hylleraas.hpp"
#include "oracles/quadrature.hpp"
#include "oracles/spherical.hpp"

using namespace helice;

TEST_CASE("quadrature: polynomial-times-exponential moments are exact") {
  // int_0^inf r^a e^{-b r} dr = a!/b^(a+1), checked without the library
  for (const auto& [a, b] : {std::pair{0, 1.0}, {4, 0.7}, {9, 3.2}}) {
    double fact = 1.0;
    for (int i = 2; i <= a; ++i) fact *= i;
    const double exact = fact / std::pow(b, a + 1);
    const double quad = oracle::integrate_radial(
        [&, aa = a, bb = b](double r) { return std::pow(r, aa) * std::exp(-bb * r); }, b, a / 4);
    CHECK(quad == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("two-electron kernel oracle: monopole of two unit 1s densities") {
  // the classic 5 xi / 8 repulsion of two normalized 1s clouds
  const double xi = 1.7;
  const double n2 = 4.0 * xi * xi * xi;  // 1s normalization squared
  auto density = [&](double r) { return n2 * std::exp(-2.0 * xi * r) * r * r; };
  const double value = oracle::two_electron_kernel(density, density, 0, 2.0 * xi, 2.0 * xi);
  CHECK(value == doctest::Approx(5.0 * xi / 8.0).epsilon(1e-12));
}

TEST_CASE("spherical harmonics: orthonormality on the quadrature grid") {
  // <(ll)00 | P_0 | (lp lp)00> is exactly delta(l, lp)
  for (int l = 0; l <= 3; ++l)
    for (int lp = l; lp <= 3; ++lp) {
      const double value = oracle::coupled_pk_element(0, l, lp);
      CHECK(value == doctest::Approx(l == lp ? 1.0 : 0.0).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("hylleraas oracle: single-term limit reproduces the 27/16 optimum") {
  const auto result = oracle::hylleraas_ground_state(2.0, 0);
  CHECK(result.terms == 1);
  CHECK(result.energy == doctest::Approx(-2.84765625).epsilon(1e-9));
  CHECK(result.k == doctest::Approx(27.0 / 8.0).epsilon(1e-4));  // k = 2 xi*
}

TEST_CASE("hylleraas oracle: low orders bracket the exact helium energy") {
  const double exact = -2.9037243;
  double previous = 0.0;
  for (int order : {1, 2, 3, 4}) {
    const auto result = oracle::hylleraas_ground_state(2.0, order);
    CHECK(result.energy > exact - 1e-9);  // variational upper bound
    if (order > 1) CHECK(result.energy <= previous + 1e-12);
    previous = result.energy;
  }
  // order 2 holds the classic handful-of-terms accuracy
  const auto six = oracle::hylleraas_ground_state(2.0, 2);
  CHECK(six.energy == doctest::Approx(-2.9032).epsilon(2e-4));
  // order 4 sits within half a millihartree of the exact value
  const auto rich = oracle::hylleraas_ground_state(2.0, 4);
  CHECK(std::abs(rich.energy - exact) < 5e-4);
}

TEST_CASE("hylleraas oracle: helium-like scaling at Z = 3") {
  // Li+ ground state, exact -7.2799134; a small expansion gets millihartrees
  const auto result = oracle::hylleraas_ground_state(3.0, 3);
  CHECK(result.energy > -7.2799134 - 1e-9);
  CHECK(result.energy == doctest::Approx(-7.2799).epsilon(5e-5));
}

TEST_CASE("grid partial-trace oracle: unit trace on a hand-built state") {
  std::vector<OrthonormalRadialBasis> bases = {orthonormalize({{1, 0, 2.0}, {2, 0, 1.2}})};
  const auto configs = enumerate_configurations({2}, 0, SpatialSector::symmetric);
  CiState state;
  state.sector = SpatialSector::symmetric;
  state.coefficients = Eigen::VectorXd::Zero(3);
  state.coefficients << 0.8, 0.6, 0.0;  // unit norm across (1,1) and (1,2)
  const auto blocks = oracle::grid_reduced_density_blocks(state, configs, bases);
  CHECK(blocks[0].trace() == doctest::Approx(1.0).epsilon(1e-8));
}
