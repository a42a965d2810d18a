#include "helice/angular.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <mutex>
#include <unordered_map>

#include "helice/errors.hpp"

namespace helice {

namespace {

using boost::multiprecision::cpp_int;

cpp_int factorial_int(int a) {
  cpp_int f = 1;
  for (int i = 2; i <= a; ++i) f *= i;
  return f;
}

// Squared 3j symbol (l k lp; 0 0 0) as an exact rational p/q.
// Nonzero only for even J = l + k + lp within the triangle rule, where
//   3j(000)^2 = D * [g! / ((g-l)! (g-k)! (g-lp)!)]^2,
//   D = (J-2l)! (J-2k)! (J-2lp)! / (J+1)!,   g = J/2.
void threej000_squared(int l, int k, int lp, cpp_int& num, cpp_int& den) {
  const int J = l + k + lp;
  const int g = J / 2;
  const cpp_int t = factorial_int(g) / (factorial_int(g - l) * factorial_int(g - k) *
                                        factorial_int(g - lp));
  num = factorial_int(J - 2 * l) * factorial_int(J - 2 * k) * factorial_int(J - 2 * lp) * t * t;
  den = factorial_int(J + 1);
}

struct KeyHash {
  std::size_t operator()(std::uint64_t v) const noexcept { return std::hash<std::uint64_t>{}(v); }
};

std::uint64_t pack_key(int k, int l, int lp) {
  return (static_cast<std::uint64_t>(k) << 40) | (static_cast<std::uint64_t>(l) << 20) |
         static_cast<std::uint64_t>(lp);
}

std::mutex g_cache_mutex;
std::unordered_map<std::uint64_t, double, KeyHash> g_cache;

}  // namespace

double factorial_exact(int a) {
  if (a < 0 || a > 170) throw ArgumentError("factorial_exact: argument must be in [0, 170]");
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    cpp_int f = 1;
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i) {
      f *= i;
      t[i] = f.convert_to<double>();
    }
    return t;
  }();
  return table[a];
}

double cg_zero_coupling(int l, int m) {
  if (l < 0 || std::abs(m) > l) throw ArgumentError("cg_zero_coupling: require |m| <= l");
  const double sign = ((l - m) % 2 == 0) ? 1.0 : -1.0;
  return sign / std::sqrt(2.0 * l + 1.0);
}

double angular_coupling_coefficient(int k, int l, int lp) {
  if (k < 0 || l < 0 || lp < 0)
    throw ArgumentError("angular_coupling_coefficient: indices must be non-negative");
  if ((k + l + lp) % 2 != 0) return 0.0;           // parity selection rule
  if (k < std::abs(l - lp) || k > l + lp) return 0.0;  // triangle rule

  const std::uint64_t key = pack_key(k, l, lp);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }

  cpp_int num, den;
  threej000_squared(l, k, lp, num, den);
  // A_k = (-1)^k sqrt((2l+1)(2lp+1)) 3j(000)^2, with the sign fixed by the
  // (-1)^(l-m)/sqrt(2l+1) coupling convention of cg_zero_coupling.
  const double ratio = num.convert_to<double>() / den.convert_to<double>();
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double value = sign * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) * ratio;

  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_cache.emplace(key, value);
  g_cache.emplace(pack_key(k, lp, l), value);  // A_k(l,lp) = A_k(lp,l)
  return value;
}

std::vector<AngularCoefficient> angular_coupling_coefficients(int l, int lp) {
  std::vector<AngularCoefficient> out;
  for (int k = std::abs(l - lp); k <= l + lp; k += 2)
    out.push_back({k, l, lp, angular_coupling_coefficient(k, l, lp)});
  return out;
}

}  // namespace helice
