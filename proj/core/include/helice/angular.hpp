#pragma once

#include <vector>

namespace helice {

/// Multipole coupling coefficient A_k(l,lp) between two equal-l electron
/// pairs coupled to total L=0.  The interelectronic repulsion expands as
///
///   1/r12 = sum_k  r<^k / r>^(k+1)  P_k(cos th12),
///
/// and the matrix element of each P_k between |(ll)L=0> and |(lp lp)L=0>
/// angular states factorizes as A_k(l,lp) times a radial Slater integral.
struct AngularCoefficient {
  int k = 0;
  int l = 0;
  int lp = 0;
  double value = 0.0;
};

/// a! computed in exact integer arithmetic, converted to double once at the
/// end.  Valid for 0 <= a <= 170 (171! overflows double).
double factorial_exact(int a);

/// Clebsch-Gordan coefficient <l m; l -m | L=0 M=0> = (-1)^(l-m)/sqrt(2l+1).
/// Couples two equal-l electrons to a total angular momentum singlet.
double cg_zero_coupling(int l, int m);

/// A_k(l,lp) for the multipole expansion above.  Exact rational 3j algebra
/// internally; returns 0 whenever k+l+lp is odd or the triangle rule
/// |l-lp| <= k <= l+lp fails.  Values are memoized (the domain is tiny).
double angular_coupling_coefficient(int k, int l, int lp);

/// All nonzero coefficients for a given (l,lp) shell pair, ascending in k.
std::vector<AngularCoefficient> angular_coupling_coefficients(int l, int lp);

}  // namespace helice
