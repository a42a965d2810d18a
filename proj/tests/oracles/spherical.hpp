// Brute-force angular oracle: matrix elements of P_k(cos theta_12) between
// L=0-coupled pair states, integrated over both solid angles with explicit
// spherical harmonics on a product quadrature grid.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "helice/angular.hpp"
#include "oracles/quadrature.hpp"

namespace oracle {

// Associated Legendre P_l^m(x) for m >= 0, Condon-Shortley phase included.
inline double assoc_legendre(int l, int m, double x) {
  double pmm = 1.0;
  if (m > 0) {
    const double somx2 = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 0; i < m; ++i) {
      pmm *= -fact * somx2;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pmmp1 = x * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pmmp1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = (x * (2.0 * ll - 1.0) * pmmp1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  const int am = std::abs(m);
  double norm = (2.0 * l + 1.0) / (4.0 * M_PI);
  for (int i = l - am + 1; i <= l + am; ++i) norm /= i;
  const double plm = assoc_legendre(l, am, std::cos(theta));
  std::complex<double> y =
      std::sqrt(norm) * plm * std::exp(std::complex<double>(0.0, am * phi));
  if (m < 0) {
    y = std::conj(y);
    if (am % 2 == 1) y = -y;
  }
  return y;
}

inline double legendre_p(int k, double x) {
  double p0 = 1.0, p1 = x;
  if (k == 0) return p0;
  if (k == 1) return p1;
  for (int j = 2; j <= k; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// <(l l) L=0 | P_k(cos theta_12) | (lp lp) L=0> over both solid angles with
// explicit spherical harmonics: Gauss-Legendre in cos theta_1, cos theta_2
// and trapezoid in the azimuth.  The integrand depends on the azimuths only
// through phi_1 - phi_2, so phi_1 is pinned at zero and the measure carries
// a factor 2 pi.
inline double coupled_pk_element(int k, int l, int lp, int n_phi = 24) {
  std::vector<double> ct, wt;
  for (const auto& [x, w] : gauss_legendre_unit()) {
    ct.push_back(2.0 * x - 1.0);
    wt.push_back(2.0 * w);
  }
  const double dphi = 2.0 * M_PI / n_phi;

  auto coupled = [&](int shell, double th1, double ph1, double th2, double ph2) {
    std::complex<double> value = 0.0;
    for (int m = -shell; m <= shell; ++m)
      value += helice::cg_zero_coupling(shell, m) * spherical_harmonic(shell, m, th1, ph1) *
               spherical_harmonic(shell, -m, th2, ph2);
    return value;
  };

  std::complex<double> total = 0.0;
  for (std::size_t i1 = 0; i1 < ct.size(); ++i1) {
    const double th1 = std::acos(ct[i1]);
    for (std::size_t i2 = 0; i2 < ct.size(); ++i2) {
      const double th2 = std::acos(ct[i2]);
      for (int j2 = 0; j2 < n_phi; ++j2) {
        const double ph2 = j2 * dphi;
        const double cos12 = ct[i1] * ct[i2] + std::sqrt(1.0 - ct[i1] * ct[i1]) *
                                                   std::sqrt(1.0 - ct[i2] * ct[i2]) *
                                                   std::cos(ph2);
        total += wt[i1] * wt[i2] * (2.0 * M_PI) * dphi *
                 std::conj(coupled(l, th1, 0.0, th2, ph2)) * legendre_p(k, cos12) *
                 coupled(lp, th1, 0.0, th2, ph2);
      }
    }
  }
  return total.real();
}

}  // namespace oracle
