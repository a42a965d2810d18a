#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "helice/ci.hpp"

namespace helice {

/// Single-electron reduced density matrix of a CI state, obtained by an
/// algebraic partial trace over the second electron.  It is exactly
/// block-diagonal in (l,m); the m-blocks within one l are identical, so one
/// matrix per l is stored together with its multiplicity 2l+1, and
/// sum_l multiplicity(l) * tr(block_l) = 1.
///
/// The reported spectrum aggregates each shell: lambda_k is the total
/// occupation of the k-th radial natural orbital of one l shell (its 2l+1
/// degenerate m-resolved eigenvalues summed), listed descending.  The
/// aggregated spectrum also sums to one, and it is the quantity entering
/// every entropy and every spectrum dump.
struct ReducedDensity {
  std::vector<Eigen::MatrixXd> blocks;  // m-resolved blocks, indexed by l
  std::vector<int> multiplicity;        // 2l+1
  std::vector<double> spectrum;         // shell-aggregated occupations, descending
};

ReducedDensity reduced_density(const CiState& state, const std::vector<Configuration>& configs,
                               const std::vector<OrthonormalRadialBasis>& bases);

/// -sum lambda log2 lambda in bits.  Eigenvalues below 1e-14 contribute
/// nothing; eigenvalues below -1e-12 or a trace off unity by more than
/// 1e-10 raise ConsistencyError (the spectrum is never silently fixed up).
double von_neumann_entropy(const std::vector<double>& spectrum);

/// 1 - sum lambda^2, the purity deficit.
double linear_entropy(const std::vector<double>& spectrum);

/// Entropy of the non-interacting reference state: 0 bits when the dominant
/// configuration is doubly occupied in the symmetric sector, 1 bit for any
/// open-shell or antisymmetric-sector state.  Dominant weight below 0.5
/// puts the state outside the weakly perturbed regime and raises
/// AmbiguityError.
double reference_entropy(const CiState& state);

/// |S_vn - S0| in bits.
double entanglement_measure(double s_vn, double s0);

/// Comparison measure using the full (orbital x spin) reduced density:
/// 1 - 2 Tr(R1^2) with Tr(R1^2) = Tr(rho1^2) Tr(rho_s1^2).  For the singlet
/// this reduces to the linear entropy of rho1; for the product triplet
/// states (spin factor 1) it is 1 - 2 Tr(rho1^2).
double dehesa_measure(const std::vector<double>& spectrum, SpatialSector sector);

/// 1 / sum lambda^2 of the reduced single-particle spectrum.
double inverse_participation_ratio(const std::vector<double>& spectrum);

/// Everything the reporting layer needs about one state's entanglement.
struct EntropyReport {
  std::string label;
  double energy = 0.0;  // hartree
  std::vector<double> spectrum;
  double s_vn = 0.0;           // bits
  double s_lin = 0.0;
  double s0 = 0.0;             // bits, 0 or 1
  double entanglement = 0.0;   // |s_vn - s0|, bits
  double dehesa = 0.0;
  double ipr = 0.0;
  double fermionic = 0.0;      // s_vn - 1; informational, antisymmetric sector only
  bool has_fermionic = false;
};

EntropyReport make_entropy_report(const CiState& state, const std::vector<Configuration>& configs,
                                  const std::vector<OrthonormalRadialBasis>& bases);

}  // namespace helice
