#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "helice/errors.hpp"
#include "helice/sto.hpp"
#include "oracles/quadrature.hpp"

using namespace helice;

namespace {

double sto_value(const StoOrbital& o, double r) {
  return std::pow(r, o.n + o.l - 1) * std::exp(-o.xi * r);
}

}  // namespace

TEST_CASE("radial_moment_integral: closed form vs quadrature") {
  CHECK(radial_moment_integral(0, 1.0) == 1.0);
  CHECK(radial_moment_integral(2, 1.0) == 2.0);
  CHECK(radial_moment_integral(5, 2.5) == doctest::Approx(0.49152).epsilon(1e-12));
  CHECK_THROWS_AS(radial_moment_integral(-1, 1.0), ArgumentError);
  CHECK_THROWS_AS(radial_moment_integral(2, 0.0), ArgumentError);
  CHECK_THROWS_AS(radial_moment_integral(2, -1.0), ArgumentError);

  for (const auto& [a, b] : {std::pair{0, 0.1}, {3, 0.5}, {7, 2.0}, {12, 6.0}, {20, 17.0}}) {
    const double quad =
        oracle::integrate_radial([&](double r) { return std::pow(r, a) * std::exp(-b * r); }, b,
                                 a / 4);
    CHECK(radial_moment_integral(a, b) == doctest::Approx(quad).epsilon(1e-12));
  }
}

TEST_CASE("overlap: closed forms, symmetry, quadrature oracle") {
  const StoOrbital s1{1, 0, 2.0};
  CHECK(overlap(s1, s1) == doctest::Approx(0.03125).epsilon(1e-15));  // 2!/4^3

  // normalized <1s|2s> at equal exponents is sqrt(3)/2 for any xi
  for (double xi : {0.7, 1.0, 2.0, 5.5}) {
    const StoOrbital a{1, 0, xi}, b{2, 0, xi};
    CHECK(overlap_normalized(a, b) == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
  }

  // normalized 1s-1s overlap at different exponents: (2 sqrt(x1 x2)/(x1+x2))^3
  const StoOrbital a{1, 0, 1.0}, b{1, 0, 2.0};
  CHECK(overlap_normalized(a, b) == doctest::Approx(0.8380524814).epsilon(1e-9));

  CHECK_THROWS_AS(overlap(StoOrbital{1, 0, 1.0}, StoOrbital{1, 1, 1.0}), ArgumentError);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> xi_dist(0.1, 20.0);
  std::uniform_int_distribution<int> n_dist(1, 20), l_dist(0, 3);
  for (int trial = 0; trial < 30; ++trial) {
    const int l = l_dist(rng);
    const StoOrbital o1{n_dist(rng), l, xi_dist(rng)};
    const StoOrbital o2{n_dist(rng), l, xi_dist(rng)};
    CHECK(overlap(o1, o2) == overlap(o2, o1));
    const double quad = oracle::integrate_radial(
        [&](double r) { return sto_value(o1, r) * sto_value(o2, r) * r * r; },
        o1.xi + o2.xi, (o1.n + o2.n + o1.l + o2.l) / 4);
    CHECK(overlap(o1, o2) == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("orthonormalize: single orbital, invariant, drops") {
  const StoOrbital o{1, 0, 2.0};
  const auto single = orthonormalize({o});
  CHECK(single.retained == 1);
  CHECK(single.transform(0, 0) == doctest::Approx(1.0 / std::sqrt(overlap(o, o))).epsilon(1e-14));

  const auto pair = orthonormalize({{1, 0, 2.0}, {2, 0, 2.0}});
  CHECK(pair.retained == 2);
  CHECK(orthonormality_defect(pair) < 1e-12);

  const auto big = orthonormalize(even_tempered_set(0, 20, 2.0, 0.6), 1e-10);
  CHECK(big.retained <= 20);
  CHECK(big.retained >= 10);
  CHECK(orthonormality_defect(big) <= 1e-10);
  MESSAGE("retained ", big.retained, " of 20 even-tempered functions");

  CHECK_THROWS_AS(orthonormalize({}), ArgumentError);
  // two copies of the same orbital: one survives, one is dropped
  const auto degenerate = orthonormalize({{1, 0, 2.0}, {1, 0, 2.0}});
  CHECK(degenerate.retained == 1);
  // a threshold above the whole overlap spectrum empties the basis
  CHECK_THROWS_AS(orthonormalize({{1, 0, 2.0}, {2, 0, 1.0}}, 10.0), DegenerateBasisError);
}

TEST_CASE("orthonormalize: span invariant under input reordering") {
  const auto orbitals = even_tempered_set(0, 8, 2.0, 0.8);
  auto reversed = orbitals;
  std::reverse(reversed.begin(), reversed.end());
  const auto basis_a = orthonormalize(orbitals);
  const auto basis_b = orthonormalize(reversed);
  REQUIRE(basis_a.retained == basis_b.retained);

  // Compare projectors on a radial sample: P(r, r') = sum_j f_j(r) f_j(r').
  for (double r : {0.2, 0.9, 1.7, 3.0}) {
    for (double rp : {0.5, 1.3, 4.2}) {
      double pa = 0.0, pb = 0.0;
      for (int j = 0; j < basis_a.retained; ++j) {
        pa += evaluate_radial(basis_a, j, r) * evaluate_radial(basis_a, j, rp);
        pb += evaluate_radial(basis_b, j, r) * evaluate_radial(basis_b, j, rp);
      }
      CHECK(pa == doctest::Approx(pb).epsilon(1e-8));
    }
  }
}

TEST_CASE("evaluate_radial: normalization, origin behavior, orthogonality") {
  const auto basis_1s = orthonormalize({{1, 0, 2.0}});
  // normalized 1s value at the origin: 2 xi^(3/2)
  CHECK(evaluate_radial(basis_1s, 0, 0.0) ==
        doctest::Approx(2.0 * std::pow(2.0, 1.5)).epsilon(1e-12));

  const auto basis_p = orthonormalize(even_tempered_set(1, 3, 1.5, 0.8));
  for (int j = 0; j < basis_p.retained; ++j) CHECK(evaluate_radial(basis_p, j, 0.0) == 0.0);

  const auto basis = orthonormalize(even_tempered_set(0, 6, 2.0, 0.75));
  for (int i = 0; i < basis.retained; ++i)
    for (int j = i; j < basis.retained; ++j) {
      const double quad = oracle::integrate_radial(
          [&](double r) {
            return evaluate_radial(basis, i, r) * evaluate_radial(basis, j, r) * r * r;
          },
          0.7, 4);
      CHECK(quad == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-8));
    }

  CHECK_THROWS_AS(evaluate_radial(basis, basis.retained, 1.0), ArgumentError);
  CHECK_THROWS_AS(evaluate_radial(basis, 0, -0.5), ArgumentError);
}

TEST_CASE("even_tempered_set and explicit_set build the Slater ladder") {
  const auto set = even_tempered_set(1, 4, 2.0, 0.5);
  REQUIRE(set.size() == 4);
  CHECK(set[0].n == 1);
  CHECK(set[3].n == 4);
  CHECK(set[3].l == 1);
  CHECK(set[3].xi == doctest::Approx(0.25));
  CHECK_THROWS_AS(even_tempered_set(0, 0, 2.0, 0.5), ArgumentError);
  CHECK_THROWS_AS(even_tempered_set(0, 3, -1.0, 0.5), ArgumentError);

  const auto expl = explicit_set(2, {3.0, 1.0});
  REQUIRE(expl.size() == 2);
  CHECK(expl[1].n == 2);
  CHECK(expl[1].l == 2);
  CHECK(expl[1].xi == 1.0);
}

TEST_CASE("write_radial_functions emits a two-column-per-function table") {
  const auto basis = orthonormalize({{1, 0, 2.0}});
  std::ostringstream out;
  write_radial_functions(basis, 2.0, 5, out);
  std::istringstream in(out.str());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    double r, f;
    std::istringstream fields(line);
    fields >> r >> f;
    CHECK(f == doctest::Approx(evaluate_radial(basis, 0, r)).epsilon(1e-12));
    ++rows;
  }
  CHECK(rows == 5);
}
