#include "helice/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "helice/errors.hpp"

namespace helice {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

ReducedDensity reduced_density(const CiState& state, const std::vector<Configuration>& configs,
                               const std::vector<OrthonormalRadialBasis>& bases) {
  const int dim = static_cast<int>(configs.size());
  if (state.coefficients.size() != dim)
    throw ArgumentError("reduced_density: coefficient count does not match configurations");
  if (std::abs(state.coefficients.squaredNorm() - 1.0) > 1e-12)
    throw ArgumentError("reduced_density: state coefficients are not unit-norm");

  const int l_count = static_cast<int>(bases.size());
  for (const auto& cfg : configs)
    if (cfg.l < 0 || cfg.l >= l_count || cfg.n1 < 1 || cfg.n2 < cfg.n1 ||
        cfg.n2 > bases[cfg.l].retained)
      throw ArgumentError("reduced_density: configuration outside the basis set");

  ReducedDensity rho;
  rho.blocks.resize(l_count);
  rho.multiplicity.resize(l_count);

  // Expansion matrix D_l over radial product states |n1 n2>: a configuration
  // (a,b) contributes c/sqrt(2) to (a,b) and +-c/sqrt(2) to (b,a), or c to
  // the diagonal when doubly occupied.  The (l,m) block of rho1 is then
  // D D^t / (2l+1) for every one of the 2l+1 values of m.
  std::vector<Eigen::MatrixXd> d(l_count);
  for (int l = 0; l < l_count; ++l) d[l] = Eigen::MatrixXd::Zero(bases[l].retained, bases[l].retained);

  for (int i = 0; i < dim; ++i) {
    const auto& cfg = configs[i];
    const double c = state.coefficients(i);
    const int a = cfg.n1 - 1, b = cfg.n2 - 1;
    if (cfg.sector == SpatialSector::symmetric) {
      if (a == b) {
        d[cfg.l](a, a) += c;
      } else {
        d[cfg.l](a, b) += c * kInvSqrt2;
        d[cfg.l](b, a) += c * kInvSqrt2;
      }
    } else {
      d[cfg.l](a, b) += c * kInvSqrt2;
      d[cfg.l](b, a) -= c * kInvSqrt2;
    }
  }

  for (int l = 0; l < l_count; ++l) {
    rho.multiplicity[l] = 2 * l + 1;
    if (bases[l].retained == 0) continue;
    const Eigen::MatrixXd shell = d[l] * d[l].transpose();  // aggregated over m
    rho.blocks[l] = shell / (2.0 * l + 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(shell);
    if (es.info() != Eigen::Success)
      throw NumericalError("reduced_density: block eigendecomposition failed");
    for (int i = 0; i < es.eigenvalues().size(); ++i) rho.spectrum.push_back(es.eigenvalues()(i));
  }
  std::sort(rho.spectrum.begin(), rho.spectrum.end(), std::greater<double>());

  double trace = 0.0;
  for (double v : rho.spectrum) trace += v;
  if (std::abs(trace - 1.0) > 1e-12)
    throw ConsistencyError("reduced_density: trace deviates from one beyond 1e-12");
  return rho;
}

double von_neumann_entropy(const std::vector<double>& spectrum) {
  double trace = 0.0;
  double entropy = 0.0;
  for (double v : spectrum) {
    if (v < -1e-12)
      throw ConsistencyError("von_neumann_entropy: negative eigenvalue beyond tolerance");
    trace += v;
    if (v < 1e-14) continue;  // 0 log 0 := 0
    entropy -= v * std::log2(v);
  }
  if (std::abs(trace - 1.0) > 1e-10)
    throw ConsistencyError("von_neumann_entropy: spectrum trace deviates from one");
  return entropy;
}

double linear_entropy(const std::vector<double>& spectrum) {
  double trace = 0.0;
  double purity = 0.0;
  for (double v : spectrum) {
    if (v < -1e-12)
      throw ConsistencyError("linear_entropy: negative eigenvalue beyond tolerance");
    trace += v;
    purity += v * v;
  }
  if (std::abs(trace - 1.0) > 1e-10)
    throw ConsistencyError("linear_entropy: spectrum trace deviates from one");
  return 1.0 - purity;
}

double reference_entropy(const CiState& state) {
  if (state.dominant_weight < 0.5)
    throw AmbiguityError(
        "reference_entropy: dominant configuration weight below 0.5, reference state ambiguous");
  if (state.sector == SpatialSector::symmetric && state.dominant.n1 == state.dominant.n2)
    return 0.0;
  return 1.0;
}

double entanglement_measure(double s_vn, double s0) {
  if (s0 != 0.0 && s0 != 1.0)
    throw ArgumentError("entanglement_measure: reference entropy must be 0 or 1");
  return std::abs(s_vn - s0);
}

double dehesa_measure(const std::vector<double>& spectrum, SpatialSector sector) {
  double purity = 0.0;
  for (double v : spectrum) purity += v * v;
  const double spin_purity = sector == SpatialSector::symmetric ? 0.5 : 1.0;
  return 1.0 - 2.0 * purity * spin_purity;
}

double inverse_participation_ratio(const std::vector<double>& spectrum) {
  double purity = 0.0;
  for (double v : spectrum) purity += v * v;
  if (purity <= 0.0) throw ArgumentError("inverse_participation_ratio: empty spectrum");
  return 1.0 / purity;
}

EntropyReport make_entropy_report(const CiState& state, const std::vector<Configuration>& configs,
                                  const std::vector<OrthonormalRadialBasis>& bases) {
  const ReducedDensity rho = reduced_density(state, configs, bases);
  EntropyReport report;
  report.label = state.label;
  report.energy = state.energy;
  report.spectrum = rho.spectrum;
  report.s_vn = von_neumann_entropy(rho.spectrum);
  report.s_lin = linear_entropy(rho.spectrum);
  report.s0 = reference_entropy(state);
  report.entanglement = entanglement_measure(report.s_vn, report.s0);
  report.dehesa = dehesa_measure(rho.spectrum, state.sector);
  report.ipr = inverse_participation_ratio(rho.spectrum);
  if (state.sector == SpatialSector::antisymmetric) {
    report.fermionic = report.s_vn - 1.0;
    report.has_fermionic = true;
  }
  return report;
}

}  // namespace helice
