#include "helice/ci.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>
#include <tuple>

#include "helice/angular.hpp"
#include "helice/errors.hpp"

namespace helice {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Runs fn(0..count-1), interleaved over threads unless serial.  Work items
// must write to disjoint locations.  The first exception thrown by a worker
// is rethrown on the calling thread after every worker has joined.
void parallel_for(int count, bool serial, const std::function<void(int)>& fn) {
  unsigned threads = serial ? 1u : std::max(1u, std::thread::hardware_concurrency());
  if (threads <= 1 || count < 4) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::mutex error_mutex;
  std::exception_ptr error;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = static_cast<int>(t); i < count; i += static_cast<int>(threads)) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Symmetrization factor of a configuration: 1/sqrt(2) for open pairs,
// 1/2 for doubly occupied symmetric pairs (whose state carries no sqrt(2)).
double norm_factor(const Configuration& c) {
  return (c.sector == SpatialSector::symmetric && c.n1 == c.n2) ? 0.5 : kInvSqrt2;
}

double sector_sign(SpatialSector s) { return s == SpatialSector::symmetric ? 1.0 : -1.0; }

// Raw <S_i| -1/2 (d2/dr2 + (2/r) d/dr - l(l+1)/r^2) - Z/r |S_j> with the
// r^2 dr measure, for unnormalized Slater orbitals sharing l.
double raw_one_electron(const StoOrbital& oi, const StoOrbital& oj, double Z) {
  const int l = oi.l;
  const int pi = oi.n + l - 1;
  const int pj = oj.n + l - 1;
  const double b = oi.xi + oj.xi;
  // Applying the kinetic operator to the ket gives three powers of r.
  const double c0 = static_cast<double>(pj) * (pj + 1) - static_cast<double>(l) * (l + 1);
  const double kinetic = -0.5 * (c0 * radial_moment_integral(pi + pj, b) -
                                 2.0 * oj.xi * (pj + 1) * radial_moment_integral(pi + pj + 1, b) +
                                 oj.xi * oj.xi * radial_moment_integral(pi + pj + 2, b));
  const double nuclear = -Z * radial_moment_integral(pi + pj + 1, b);
  return kinetic + nuclear;
}

// Two-region reduction of the R^k kernel integral with charge distributions
// r^A exp(-b r) on particle 1 and r^B exp(-d r) on particle 2.  Both pieces
// are sums of positive terms; the inner-region piece is evaluated as the
// tail series of the incomplete gamma function to avoid the cancellation
// that the textbook two-term form suffers for mixed tight/diffuse exponents.
double slater_kernel(int k, int A, double b, int B, double d) {
  // Region r2 > r1:  sum_{j=0}^{B-k-1} ...
  double term_outer = 0.0;
  {
    double u = factorial_exact(B - k - 1) / std::pow(d, B - k) * factorial_exact(A + k) /
               std::pow(b + d, A + k + 1);
    for (int j = 0;; ++j) {
      term_outer += u;
      if (j == B - k - 1) break;
      u *= d * (A + k + j + 1) / ((j + 1) * (b + d));
    }
  }
  // Region r2 < r1:  prefactor times the gamma tail sum_{j=B+k+1}^inf.
  double term_inner = 0.0;
  {
    const int j0 = B + k + 1;
    double t = std::pow(d, j0) / factorial_exact(j0) * factorial_exact(A + B) /
               std::pow(b + d, A + B + 1);
    double sum = 0.0;
    for (int j = j0; j < 200000; ++j) {
      sum += t;
      t *= d * (A - k + j) / ((j + 1) * (b + d));
      if (t < sum * 1e-18) break;
    }
    term_inner = factorial_exact(B + k) / std::pow(d, B + k + 1) * sum;
  }
  const double value = term_outer + term_inner;
  if (!std::isfinite(value))
    throw NumericalError("slater integral: overflow, exponents too extreme");
  return value;
}

// Fallback for k at or beyond the closed-form domain (angular selection
// rules never produce such k; the integral is still finite).  Panelled
// Gauss-Legendre with the inner integral split at r1, so every piece is
// smooth.
double slater_numeric(int k, int A, double b, int B, double d) {
  static const auto nodes = [] {
    // 32-point Gauss-Legendre on [0,1] via Newton iteration on P_32.
    std::array<std::pair<double, double>, 32> nw{};
    const int n = 32;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      nw[i] = {0.5 * (x + 1.0), 1.0 / ((1.0 - x * x) * dp * dp)};
    }
    return nw;
  }();

  const double r1_max = (A + 60.0) / b;
  const double r2_max = (B + 60.0) / d;
  auto inner = [&](double r1) {
    double low = 0.0, high = 0.0;
    // [0, r1] piece and [r1, r2_max] piece, 4 panels each.
    for (int p = 0; p < 4; ++p) {
      const double a0 = r1 * p / 4.0, a1 = r1 * (p + 1) / 4.0;
      for (const auto& [x, w] : nodes) {
        const double r2 = a0 + (a1 - a0) * x;
        low += w * (a1 - a0) * std::pow(r2, B + k) * std::exp(-d * r2);
      }
      const double b0 = r1 + (r2_max - r1) * p / 4.0, b1 = r1 + (r2_max - r1) * (p + 1) / 4.0;
      for (const auto& [x, w] : nodes) {
        const double r2 = b0 + (b1 - b0) * x;
        high += w * (b1 - b0) * std::pow(r2, B) * std::pow(r2 / r1, -(k + 1)) * std::exp(-d * r2) /
                r1;
      }
    }
    return low / std::pow(r1, k + 1) + high;
  };
  double total = 0.0;
  for (int p = 0; p < 8; ++p) {
    const double a0 = r1_max * p / 8.0, a1 = r1_max * (p + 1) / 8.0;
    for (const auto& [x, w] : nodes) {
      const double r1 = a0 + (a1 - a0) * x;
      if (r1 <= 0.0) continue;
      total += w * (a1 - a0) * std::pow(r1, A) * std::exp(-b * r1) * inner(r1);
    }
  }
  return total;
}

}  // namespace

std::string sector_name(SpatialSector sector) {
  return sector == SpatialSector::symmetric ? "singlet" : "triplet";
}

std::vector<Configuration> enumerate_configurations(const std::vector<int>& n_per_l, int l_max,
                                                    SpatialSector sector) {
  if (l_max < 0) throw ArgumentError("enumerate_configurations: l_max must be >= 0");
  if (static_cast<int>(n_per_l.size()) < l_max + 1)
    throw ArgumentError("enumerate_configurations: need a radial count for every l <= l_max");
  std::vector<Configuration> configs;
  for (int l = 0; l <= l_max; ++l) {
    const int n = n_per_l[l];
    if (n < 1) throw ArgumentError("enumerate_configurations: radial counts must be >= 1");
    for (int n1 = 1; n1 <= n; ++n1) {
      const int first = (sector == SpatialSector::antisymmetric) ? n1 + 1 : n1;
      for (int n2 = first; n2 <= n; ++n2) configs.push_back({n1, n2, l, sector});
    }
  }
  return configs;
}

Eigen::MatrixXd one_electron_matrix(const OrthonormalRadialBasis& basis, double Z) {
  const int raw = static_cast<int>(basis.orbitals.size());
  Eigen::MatrixXd h_raw(raw, raw);
  for (int i = 0; i < raw; ++i)
    for (int j = i; j < raw; ++j) {
      const double v = raw_one_electron(basis.orbitals[i], basis.orbitals[j], Z);
      h_raw(i, j) = v;
      h_raw(j, i) = v;
    }
  Eigen::MatrixXd h = basis.transform.transpose() * h_raw * basis.transform;
  return 0.5 * (h + h.transpose());  // kill GEMM round-off asymmetry
}

double one_electron_matrix_element(const OrthonormalRadialBasis& basis, int i, int j, double Z) {
  if (i < 0 || j < 0 || i >= basis.retained || j >= basis.retained)
    throw ArgumentError("one_electron_matrix_element: index out of range");
  const int raw = static_cast<int>(basis.orbitals.size());
  double value = 0.0;
  for (int p = 0; p < raw; ++p)
    for (int q = p; q < raw; ++q) {
      const double h_pq = raw_one_electron(basis.orbitals[p], basis.orbitals[q], Z);
      const double w = basis.transform(p, i) * basis.transform(q, j) +
                       (p == q ? 0.0 : basis.transform(q, i) * basis.transform(p, j));
      value += w * h_pq;
    }
  return value;
}

double slater_radial_integral(int k, const StoOrbital& a, const StoOrbital& b,
                              const StoOrbital& c, const StoOrbital& d) {
  if (k < 0) throw ArgumentError("slater_radial_integral: k must be >= 0");
  for (const auto* o : {&a, &b, &c, &d})
    if (!(o->xi > 0.0) || o->n < 1 || o->l < 0)
      throw ArgumentError("slater_radial_integral: invalid orbital");
  int A = a.n + c.n + a.l + c.l;
  int B = b.n + d.n + b.l + d.l;
  double bsum = a.xi + c.xi;
  double dsum = b.xi + d.xi;
  // Canonical distribution order makes the electron-swap symmetry bit-exact.
  if (std::tie(B, dsum) < std::tie(A, bsum)) {
    std::swap(A, B);
    std::swap(bsum, dsum);
  }
  if (k <= std::min(A, B) - 1) return slater_kernel(k, A, bsum, B, dsum);
  return slater_numeric(k, A, bsum, B, dsum);
}

TwoElectronTable::TwoElectronTable(const std::vector<OrthonormalRadialBasis>& bases, bool serial) {
  const int l_count = static_cast<int>(bases.size());
  sizes_.resize(l_count);
  for (int l = 0; l < l_count; ++l) sizes_[l] = bases[l].retained;

  struct Job {
    int k, l, lp;
  };
  std::vector<Job> jobs;
  for (int l = 0; l < l_count; ++l)
    for (int lp = l; lp < l_count; ++lp) {
      if (bases[l].retained == 0 || bases[lp].retained == 0) continue;
      for (int k = lp - l; k <= l + lp; k += 2) jobs.push_back({k, l, lp});
    }

  std::vector<Eigen::MatrixXd> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), serial, [&](int idx) {
    const auto [k, l, lp] = jobs[idx];
    const auto& raw_l = bases[l].orbitals;
    const auto& raw_lp = bases[lp].orbitals;
    const int nl = static_cast<int>(raw_l.size());
    const int nlp = static_cast<int>(raw_lp.size());
    const int pairs = nl * nlp;

    // Raw kernel over ordered (p in l, q in lp) charge distributions; it is
    // symmetric under p<->q within a distribution only when l == lp, but is
    // always symmetric under swapping the two distributions.
    Eigen::MatrixXd kernel(pairs, pairs);
    for (int p = 0; p < nl; ++p)
      for (int q = 0; q < nlp; ++q) {
        const int row = p * nlp + q;
        const int A = raw_l[p].n + raw_lp[q].n + l + lp;
        const double bsum = raw_l[p].xi + raw_lp[q].xi;
        for (int r = 0; r < nl; ++r)
          for (int s = 0; s < nlp; ++s) {
            const int col = r * nlp + s;
            if (col < row) continue;
            const int B = raw_l[r].n + raw_lp[s].n + l + lp;
            const double dsum = raw_l[r].xi + raw_lp[s].xi;
            const double v = slater_kernel(k, A, bsum, B, dsum);
            kernel(row, col) = v;
            kernel(col, row) = v;
          }
      }

    // Half transforms into the orthonormal functions: U = T_l (x) T_lp.
    const int rl = bases[l].retained;
    const int rlp = bases[lp].retained;
    Eigen::MatrixXd u(pairs, rl * rlp);
    for (int p = 0; p < nl; ++p)
      for (int q = 0; q < nlp; ++q)
        for (int acol = 0; acol < rl; ++acol)
          for (int ccol = 0; ccol < rlp; ++ccol)
            u(p * nlp + q, acol * rlp + ccol) =
                bases[l].transform(p, acol) * bases[lp].transform(q, ccol);
    results[idx] = u.transpose() * (kernel * u);
  });

  for (std::size_t i = 0; i < jobs.size(); ++i)
    blocks_.emplace(BlockKey{jobs[i].k, jobs[i].l, jobs[i].lp}, std::move(results[i]));
}

double TwoElectronTable::value(int k, int l, int lp, int a, int b, int c, int d) const {
  if (l > lp) return value(k, lp, l, c, d, a, b);
  auto it = blocks_.find(BlockKey{k, l, lp});
  if (it == blocks_.end()) throw ArgumentError("TwoElectronTable: no block for (k,l,lp)");
  const int rlp = sizes_[lp];
  return it->second(a * rlp + c, b * rlp + d);
}

Eigen::MatrixXd assemble_hamiltonian(const std::vector<Configuration>& configs,
                                     const std::vector<OrthonormalRadialBasis>& bases,
                                     const AssemblyOptions& options) {
  const int dim = static_cast<int>(configs.size());
  if (dim == 0) throw ArgumentError("assemble_hamiltonian: empty configuration list");
  const int l_count = static_cast<int>(bases.size());
  for (const auto& c : configs) {
    if (c.l < 0 || c.l >= l_count)
      throw ArgumentError("assemble_hamiltonian: configuration l outside the basis set");
    if (c.n1 < 1 || c.n2 < c.n1 || c.n2 > bases[c.l].retained)
      throw ArgumentError("assemble_hamiltonian: configuration indices outside the basis");
    if (c.sector != configs.front().sector)
      throw ArgumentError("assemble_hamiltonian: mixed sectors in one configuration list");
    if (c.sector == SpatialSector::antisymmetric && c.n1 == c.n2)
      throw ArgumentError("assemble_hamiltonian: antisymmetric configuration with n1 == n2");
  }

  std::vector<Eigen::MatrixXd> h_one(l_count);
  for (int l = 0; l < l_count; ++l)
    if (bases[l].retained > 0) h_one[l] = one_electron_matrix(bases[l], options.Z);

  TwoElectronTable table;
  if (options.include_interaction) table = TwoElectronTable(bases, options.serial);

  const double sigma = sector_sign(configs.front().sector);
  Eigen::MatrixXd H(dim, dim);

  parallel_for(dim, options.serial, [&](int row) {
    const auto& p = configs[row];
    const int a = p.n1 - 1, b = p.n2 - 1;
    for (int col = row; col < dim; ++col) {
      const auto& q = configs[col];
      const int c = q.n1 - 1, d = q.n2 - 1;
      double element = 0.0;

      if (p.l == q.l) {
        const auto& h = h_one[p.l];
        double one = 0.0;
        if (b == d) one += h(a, c);
        if (a == c) one += h(b, d);
        if (b == c) one += sigma * h(a, d);
        if (a == d) one += sigma * h(b, c);
        element += one;
      }

      if (options.include_interaction) {
        double two = 0.0;
        for (int k = std::abs(p.l - q.l); k <= p.l + q.l; k += 2) {
          const double ak = angular_coupling_coefficient(k, p.l, q.l);
          if (ak == 0.0) continue;
          const double direct = table.value(k, p.l, q.l, a, b, c, d);
          const double exchange = table.value(k, p.l, q.l, a, b, d, c);
          two += ak * (direct + sigma * exchange);
        }
        element += two;
      }

      element *= 2.0 * norm_factor(p) * norm_factor(q);
      H(row, col) = element;
    }
  });

  for (int row = 0; row < dim; ++row)
    for (int col = row + 1; col < dim; ++col) H(col, row) = H(row, col);
  return H;
}

EigenSolution diagonalize(const Eigen::MatrixXd& H) {
  if (H.rows() != H.cols()) throw ArgumentError("diagonalize: matrix must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  const double asym = (H - H.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw ArgumentError("diagonalize: input is not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("diagonalize: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

OrthonormalRadialBasis order_for_spectroscopy(const OrthonormalRadialBasis& basis, double Z) {
  if (basis.retained <= 1) return basis;
  const Eigen::MatrixXd h_core = one_electron_matrix(basis, Z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> core(h_core);
  if (core.info() != Eigen::Success)
    throw NumericalError("order_for_spectroscopy: eigensolver failed");

  const int n = basis.retained;
  Eigen::MatrixXd rotation(n, n);
  rotation.col(0) = core.eigenvectors().col(0);

  const double screened = Z - 1.0;
  if (screened > 0.0) {
    const Eigen::MatrixXd complement = core.eigenvectors().rightCols(n - 1);
    const Eigen::MatrixXd h_outer = one_electron_matrix(basis, screened);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> outer(complement.transpose() * h_outer *
                                                         complement);
    if (outer.info() != Eigen::Success)
      throw NumericalError("order_for_spectroscopy: eigensolver failed");
    rotation.rightCols(n - 1) = complement * outer.eigenvectors();
  } else {
    rotation.rightCols(n - 1) = core.eigenvectors().rightCols(n - 1);
  }

  OrthonormalRadialBasis out = basis;
  out.transform = basis.transform * rotation;
  // Deterministic sign: largest raw expansion coefficient positive.
  for (int j = 0; j < out.retained; ++j) {
    int arg = 0;
    out.transform.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.transform(arg, j) < 0.0) out.transform.col(j) = -out.transform.col(j);
  }
  return out;
}

std::string orbital_name(int n, int l) {
  static const char letters[] = "spdfghikl";
  if (n < 1 || l < 0) throw ArgumentError("orbital_name: invalid quantum numbers");
  const char letter = l < 9 ? letters[l] : '?';
  return std::to_string(n + l) + letter;
}

std::string configuration_label(const Configuration& config) {
  const char* mult = config.sector == SpatialSector::symmetric ? "¹S" : "³S";
  if (config.n1 == config.n2)
    return "(" + orbital_name(config.n1, config.l) + ")² " + mult;
  return orbital_name(config.n1, config.l) + orbital_name(config.n2, config.l) + " " + mult;
}

std::string normalize_label(const std::string& label) {
  std::string out;
  for (std::size_t i = 0; i < label.size(); ++i) {
    const unsigned char ch = static_cast<unsigned char>(label[i]);
    if (ch == 0xC2 && i + 1 < label.size()) {
      const unsigned char next = static_cast<unsigned char>(label[i + 1]);
      if (next == 0xB9) out += '1';
      if (next == 0xB2) out += '2';
      if (next == 0xB3) out += '3';
      ++i;
      continue;
    }
    if (std::isspace(ch) || ch == '(' || ch == ')' || ch == '^' || ch == ',') continue;
    out += static_cast<char>(std::tolower(ch));
  }
  return out;
}

std::vector<CiState> label_states(const EigenSolution& solution,
                                  const std::vector<Configuration>& configs) {
  const int dim = static_cast<int>(configs.size());
  if (solution.eigenvectors.rows() != dim)
    throw ArgumentError("label_states: eigenvector dimension does not match configurations");

  std::vector<CiState> states;
  states.reserve(solution.eigenvalues.size());
  for (int col = 0; col < solution.eigenvalues.size(); ++col) {
    CiState state;
    state.energy = solution.eigenvalues(col);
    state.coefficients = solution.eigenvectors.col(col);
    state.sector = configs.front().sector;
    state.ordinal = col + 1;

    int best = 0;
    for (int i = 1; i < dim; ++i) {
      const double ci = std::abs(state.coefficients(i));
      const double cb = std::abs(state.coefficients(best));
      if (ci > cb) {
        best = i;
      } else if (ci == cb) {
        const auto& a = configs[i];
        const auto& b = configs[best];
        if (std::tie(a.n1, a.n2, a.l) < std::tie(b.n1, b.n2, b.l)) best = i;
      }
    }
    if (state.coefficients(best) < 0.0) state.coefficients = -state.coefficients;
    state.dominant = configs[best];
    state.dominant_weight = state.coefficients(best) * state.coefficients(best);
    state.label = configuration_label(state.dominant);
    states.push_back(std::move(state));
  }
  return states;
}

}  // namespace helice
