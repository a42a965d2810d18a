#include "helice/sto.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "helice/angular.hpp"
#include "helice/errors.hpp"

namespace helice {

namespace {

void check_orbital(const StoOrbital& o) {
  if (o.n < 1) throw ArgumentError("StoOrbital: n must be >= 1");
  if (o.l < 0) throw ArgumentError("StoOrbital: l must be >= 0");
  if (!(o.xi > 0.0)) throw ArgumentError("StoOrbital: xi must be positive");
}

}  // namespace

double radial_moment_integral(int a, double b) {
  if (a < 0) throw ArgumentError("radial_moment_integral: a must be >= 0");
  if (!(b > 0.0)) throw ArgumentError("radial_moment_integral: b must be positive");
  const double value = factorial_exact(a) / std::pow(b, a + 1);
  if (!std::isfinite(value))
    throw NumericalError("radial_moment_integral: overflow, exponents too extreme");
  return value;
}

double overlap(const StoOrbital& o1, const StoOrbital& o2) {
  check_orbital(o1);
  check_orbital(o2);
  if (o1.l != o2.l) throw ArgumentError("overlap: orbitals must share l");
  // r^(n1+l-1) r^(n2+l-1) r^2 = r^(n1+n2+2l)
  return radial_moment_integral(o1.n + o2.n + 2 * o1.l, o1.xi + o2.xi);
}

double overlap_normalized(const StoOrbital& o1, const StoOrbital& o2) {
  return overlap(o1, o2) / std::sqrt(overlap(o1, o1) * overlap(o2, o2));
}

OrthonormalRadialBasis orthonormalize(const std::vector<StoOrbital>& orbitals,
                                      double drop_threshold) {
  if (orbitals.empty()) throw ArgumentError("orthonormalize: empty orbital list");
  const int l = orbitals.front().l;
  for (const auto& o : orbitals)
    if (o.l != l) throw ArgumentError("orthonormalize: all orbitals must share l");

  const int n = static_cast<int>(orbitals.size());
  Eigen::VectorXd norms(n);
  for (int i = 0; i < n; ++i) norms(i) = 1.0 / std::sqrt(overlap(orbitals[i], orbitals[i]));

  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const double v = overlap(orbitals[i], orbitals[j]) * norms(i) * norms(j);
      s(i, j) = v;
      s(j, i) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw NumericalError("orthonormalize: overlap eigendecomposition failed");

  // Eigenvalues ascending from Eigen; keep those above threshold, largest first.
  std::vector<int> kept;
  for (int i = n - 1; i >= 0; --i)
    if (es.eigenvalues()(i) >= drop_threshold) kept.push_back(i);
  if (kept.empty())
    throw DegenerateBasisError(
        "orthonormalize: every overlap eigenvalue fell below the drop threshold; lower "
        "drop_threshold or change the exponent schedule");

  // The invariant T^t S T = I to 1e-10 caps how small a retained overlap
  // eigenvalue can be at double precision; keep dropping the smallest until
  // the realized defect honors it.
  Eigen::MatrixXd t_norm;
  while (true) {
    const int retained = static_cast<int>(kept.size());
    t_norm.resize(n, retained);
    for (int j = 0; j < retained; ++j)
      t_norm.col(j) = es.eigenvectors().col(kept[j]) / std::sqrt(es.eigenvalues()(kept[j]));
    const double defect =
        ((t_norm.transpose() * s * t_norm) - Eigen::MatrixXd::Identity(retained, retained))
            .cwiseAbs()
            .maxCoeff();
    if (defect <= 1e-10 || retained == 1) break;
    kept.pop_back();
  }

  OrthonormalRadialBasis basis;
  basis.l = l;
  basis.orbitals = orbitals;
  basis.retained = static_cast<int>(kept.size());
  basis.transform = norms.asDiagonal() * t_norm;
  return basis;
}

double orthonormality_defect(const OrthonormalRadialBasis& basis) {
  const int n = static_cast<int>(basis.orbitals.size());
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = overlap(basis.orbitals[i], basis.orbitals[j]);
      s(i, j) = v;
      s(j, i) = v;
    }
  const Eigen::MatrixXd r = basis.transform.transpose() * s * basis.transform;
  return (r - Eigen::MatrixXd::Identity(basis.retained, basis.retained)).cwiseAbs().maxCoeff();
}

double evaluate_radial(const OrthonormalRadialBasis& basis, int index, double r) {
  if (index < 0 || index >= basis.retained)
    throw ArgumentError("evaluate_radial: index out of range");
  if (r < 0.0) throw ArgumentError("evaluate_radial: r must be >= 0");
  double value = 0.0;
  for (std::size_t i = 0; i < basis.orbitals.size(); ++i) {
    const auto& o = basis.orbitals[i];
    value += basis.transform(static_cast<int>(i), index) *
             std::pow(r, o.n + o.l - 1) * std::exp(-o.xi * r);
  }
  return value;
}

std::vector<StoOrbital> even_tempered_set(int l, int n_max, double alpha, double beta) {
  if (n_max < 1) throw ArgumentError("even_tempered_set: n_max must be >= 1");
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ArgumentError("even_tempered_set: alpha and beta must be positive");
  std::vector<StoOrbital> out;
  out.reserve(n_max);
  double xi = alpha;
  for (int n = 1; n <= n_max; ++n) {
    out.push_back({n, l, xi});
    xi *= beta;
  }
  return out;
}

std::vector<StoOrbital> explicit_set(int l, const std::vector<double>& xis) {
  if (xis.empty()) throw ArgumentError("explicit_set: empty exponent list");
  std::vector<StoOrbital> out;
  out.reserve(xis.size());
  for (std::size_t i = 0; i < xis.size(); ++i) out.push_back({static_cast<int>(i) + 1, l, xis[i]});
  return out;
}

void write_radial_functions(const OrthonormalRadialBasis& basis, double r_max, int n_points,
                            std::ostream& out) {
  if (n_points < 2) throw ArgumentError("write_radial_functions: need at least two points");
  const double dr = r_max / (n_points - 1);
  char buf[40];
  for (int p = 0; p < n_points; ++p) {
    const double r = p * dr;
    std::snprintf(buf, sizeof buf, "%.12g", r);
    out << buf;
    for (int j = 0; j < basis.retained; ++j) {
      std::snprintf(buf, sizeof buf, "%.12g", evaluate_radial(basis, j, r));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

}  // namespace helice
