#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace helice {

/// An unnormalized Slater-type radial orbital, R(r) = r^(n+l-1) exp(-xi r).
/// n is the principal-like index (>= 1), l the angular momentum, xi the
/// exponent in inverse bohr.
struct StoOrbital {
  int n = 1;
  int l = 0;
  double xi = 1.0;
};

/// Orthonormal radial basis for one angular momentum l, built from raw
/// Slater orbitals.  Column j of `transform` gives the expansion of the
/// j-th orthonormal function f_j over the raw orbitals, so that
/// T^t S T = I on the retained subspace, with S the raw overlap matrix.
struct OrthonormalRadialBasis {
  int l = 0;
  std::vector<StoOrbital> orbitals;
  Eigen::MatrixXd transform;  // raw-count x retained
  int retained = 0;
};

/// Closed form of the one-dimensional moment integral
///   int_0^inf r^a exp(-b r) dr = a! / b^(a+1).
double radial_moment_integral(int a, double b);

/// Raw overlap <o1|o2> with the r^2 dr measure.  Orbitals must share l.
double overlap(const StoOrbital& o1, const StoOrbital& o2);

/// Overlap between unit-normalized copies of o1 and o2.
double overlap_normalized(const StoOrbital& o1, const StoOrbital& o2);

/// Canonical (Loewdin-style) orthonormalization: eigendecompose the
/// normalized overlap matrix, drop eigenvalues below drop_threshold, and
/// scale the remaining eigenvectors by inverse square roots.  Throws
/// DegenerateBasisError when nothing survives the threshold.
OrthonormalRadialBasis orthonormalize(const std::vector<StoOrbital>& orbitals,
                                      double drop_threshold = 1e-10);

/// Value of the index-th orthonormal radial function at r.
double evaluate_radial(const OrthonormalRadialBasis& basis, int index, double r);

/// max |T^t S T - I| over the retained subspace, with S the raw overlap.
double orthonormality_defect(const OrthonormalRadialBasis& basis);

/// Even-tempered exponent schedule xi_n = alpha * beta^(n-1) applied to the
/// Slater ladder (n, l) for n = 1..n_max.
std::vector<StoOrbital> even_tempered_set(int l, int n_max, double alpha, double beta);

/// Explicit per-n exponent list applied to the same ladder.
std::vector<StoOrbital> explicit_set(int l, const std::vector<double>& xis);

/// Two-column (r, f(r)) dump of every retained radial function, for plotting.
void write_radial_functions(const OrthonormalRadialBasis& basis, double r_max, int n_points,
                            std::ostream& out);

}  // namespace helice
