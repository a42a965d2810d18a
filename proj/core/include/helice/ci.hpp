#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "helice/sto.hpp"

namespace helice {

/// Exchange symmetry of the two-electron spatial wavefunction.  The
/// symmetric sector pairs with the spin singlet, the antisymmetric sector
/// with the spin triplet.
enum class SpatialSector { symmetric, antisymmetric };

std::string sector_name(SpatialSector sector);

/// A symmetrized two-electron L=0 basis state: radial indices (n1 <= n2)
/// into the orthonormal basis of angular momentum l, with the sector fixing
/// the radial exchange symmetry.  Antisymmetric configurations require
/// n1 < n2.
struct Configuration {
  int n1 = 1;
  int n2 = 1;
  int l = 0;
  SpatialSector sector = SpatialSector::symmetric;

  bool operator==(const Configuration&) const = default;
};

/// One CI eigenstate: energy, unit-norm coefficients over the configuration
/// list, sector, and a spectroscopic label assigned from the dominant
/// configuration.
struct CiState {
  double energy = 0.0;               // hartree
  Eigen::VectorXd coefficients;      // over the configuration list
  SpatialSector sector = SpatialSector::symmetric;
  std::string label;
  int ordinal = 0;                   // 1-based energy rank within the sector
  Configuration dominant;
  double dominant_weight = 0.0;      // |c|^2 of the dominant configuration
};

/// All configurations for the given per-l radial counts, ordered by
/// (l, n1, n2).  Per l there are n(n+1)/2 symmetric and n(n-1)/2
/// antisymmetric configurations.
std::vector<Configuration> enumerate_configurations(const std::vector<int>& n_per_l, int l_max,
                                                    SpatialSector sector);

/// Radial matrix of -1/2 (d^2/dr^2 + (2/r) d/dr - l(l+1)/r^2) - Z/r in the
/// orthonormal basis, evaluated in closed form.  Exactly symmetric.
Eigen::MatrixXd one_electron_matrix(const OrthonormalRadialBasis& basis, double Z);

/// Single element <f_i| h |f_j> of the matrix above.
double one_electron_matrix_element(const OrthonormalRadialBasis& basis, int i, int j, double Z);

/// Closed-form raw Slater radial integral
///   R^k(ab;cd) = int int  a(r1) c(r1)  [r<^k / r>^(k+1)]  b(r2) d(r2) r1^2 r2^2 dr1 dr2
/// over unnormalized Slater orbitals; a,c share one l, b,d another.
double slater_radial_integral(int k, const StoOrbital& a, const StoOrbital& b,
                              const StoOrbital& c, const StoOrbital& d);

/// Precomputed two-electron integrals in the orthonormal radial bases.
/// Entry (k, l, lp) holds W[(a,c),(b,d)] = R^k over orthonormal functions
/// with a,b in basis l and c,d in basis lp (l <= lp), pair indices
/// flattened as a*retained(lp)+c.
class TwoElectronTable {
 public:
  TwoElectronTable() = default;

  /// Builds every (k,l,lp) block allowed by parity and triangle rules.
  TwoElectronTable(const std::vector<OrthonormalRadialBasis>& bases, bool serial);

  /// R^k with bra-side functions (a,b) in basis l and ket-side (c,d) in lp.
  double value(int k, int l, int lp, int a, int b, int c, int d) const;

  bool empty() const { return blocks_.empty(); }

 private:
  struct BlockKey {
    int k, l, lp;
    bool operator<(const BlockKey& o) const {
      if (k != o.k) return k < o.k;
      if (l != o.l) return l < o.l;
      return lp < o.lp;
    }
  };
  std::map<BlockKey, Eigen::MatrixXd> blocks_;
  std::vector<int> sizes_;
};

struct AssemblyOptions {
  double Z = 2.0;
  bool include_interaction = true;
  bool serial = true;
};

/// Full CI Hamiltonian over the configuration list; exactly symmetric by
/// construction (upper triangle computed, then mirrored).
Eigen::MatrixXd assemble_hamiltonian(const std::vector<Configuration>& configs,
                                     const std::vector<OrthonormalRadialBasis>& bases,
                                     const AssemblyOptions& options);

struct EigenSolution {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal
};

/// Dense symmetric eigendecomposition with ascending eigenvalues.  Input
/// asymmetry beyond 1e-12 (relative to the largest element) is an error.
EigenSolution diagonalize(const Eigen::MatrixXd& H);

/// Rotates the retained functions so dominant-configuration labels carry
/// principal-quantum-number meaning: f_1 diagonalizes the bare one-electron
/// operator (the core orbital sees the full charge Z), and the remaining
/// functions diagonalize the screened operator with charge Z-1 inside the
/// orthogonal complement, ordered by ascending orbital energy -- the field
/// an outer electron actually sees in a singly excited state.  Spans and
/// all observables are unchanged by this rotation.
OrthonormalRadialBasis order_for_spectroscopy(const OrthonormalRadialBasis& basis, double Z);

/// Spectroscopic orbital name for 1-based radial index n in shell l
/// ("1s", "2p", ...; the displayed principal number is n + l).
std::string orbital_name(int n, int l);

/// Label for a dominant configuration, e.g. "(1s)2 1S" or "1s2s 3S".
/// Superscripts are written with UTF-8 characters.
std::string configuration_label(const Configuration& config);

/// Canonical form used when matching user-supplied labels (case-folded,
/// superscripts mapped to digits, parentheses stripped).
std::string normalize_label(const std::string& label);

/// Wraps every eigenpair into a labeled CiState.  States are ordered by
/// ascending energy; each is labeled by its dominant configuration, with
/// |c| ties broken by lower (n1,n2,l).
std::vector<CiState> label_states(const EigenSolution& solution,
                                  const std::vector<Configuration>& configs);

}  // namespace helice
