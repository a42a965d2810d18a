#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <random>

#include "helice/angular.hpp"
#include "helice/ci.hpp"
#include "helice/entanglement.hpp"
#include "helice/sto.hpp"

using namespace helice;

namespace {

std::vector<OrthonormalRadialBasis> shared_bases(int n_s, int n_pd, double Z = 2.0) {
  std::vector<OrthonormalRadialBasis> bases;
  bases.push_back(order_for_spectroscopy(orthonormalize(even_tempered_set(0, n_s, 2.0, 0.84)), Z));
  bases.push_back(order_for_spectroscopy(orthonormalize(even_tempered_set(1, n_pd, 3.5, 0.8)), Z));
  bases.push_back(order_for_spectroscopy(orthonormalize(even_tempered_set(2, n_pd, 4.5, 0.8)), Z));
  return bases;
}

}  // namespace

static void SlaterRadialIntegral(benchmark::State& state) {
  const StoOrbital a{3, 1, 2.2}, b{5, 1, 0.9}, c{2, 1, 1.4}, d{7, 1, 0.5};
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(slater_radial_integral(k, a, b, c, d));
}
BENCHMARK(SlaterRadialIntegral)->Arg(0)->Arg(2);

static void AngularCoefficientLookup(benchmark::State& state) {
  for (auto _ : state)
    for (int k = 0; k <= 4; ++k)
      for (int l = 0; l <= 4; ++l)
        for (int lp = 0; lp <= 4; ++lp)
          benchmark::DoNotOptimize(angular_coupling_coefficient(k, l, lp));
}
BENCHMARK(AngularCoefficientLookup);

static void Orthonormalize20(benchmark::State& state) {
  const auto orbitals = even_tempered_set(0, 20, 2.0, 0.84);
  for (auto _ : state) benchmark::DoNotOptimize(orthonormalize(orbitals));
}
BENCHMARK(Orthonormalize20);

static void TwoElectronTableBuild(benchmark::State& state) {
  const auto bases = shared_bases(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0)));
  for (auto _ : state) {
    TwoElectronTable table(bases, /*serial=*/true);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(TwoElectronTableBuild)->Arg(8)->Arg(12);

static void AssembleHamiltonian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto bases = shared_bases(n, n);
  std::vector<int> retained;
  for (const auto& b : bases) retained.push_back(b.retained);
  const auto configs = enumerate_configurations(retained, 2, SpatialSector::symmetric);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_hamiltonian(configs, bases, AssemblyOptions{}));
  }
}
BENCHMARK(AssembleHamiltonian)->Arg(8)->Arg(12);

static void Diagonalize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = gauss(rng);
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(diagonalize(sym));
}
BENCHMARK(Diagonalize)->Arg(100)->Arg(300)->Arg(600);

static void ReducedDensityGroundState(benchmark::State& state) {
  const auto bases = shared_bases(10, 8);
  std::vector<int> retained;
  for (const auto& b : bases) retained.push_back(b.retained);
  const auto configs = enumerate_configurations(retained, 2, SpatialSector::symmetric);
  const auto states =
      label_states(diagonalize(assemble_hamiltonian(configs, bases, AssemblyOptions{})), configs);
  for (auto _ : state) {
    const auto rho = reduced_density(states[0], configs, bases);
    benchmark::DoNotOptimize(von_neumann_entropy(rho.spectrum));
  }
}
BENCHMARK(ReducedDensityGroundState);

BENCHMARK_MAIN();
