#include "helice/fit.hpp"

#include <cmath>

#include "helice/errors.hpp"

namespace helice {

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  PowerLawFit fit;
  std::vector<double> x, y;
  for (const auto& [n, e] : points) {
    if (!(n > 0.0)) throw ArgumentError("fit_power_law: n must be positive");
    if (!(e > 0.0)) {
      fit.warnings.push_back("skipped n=" + std::to_string(n) + ": non-positive value");
      continue;
    }
    x.push_back(std::log(n));
    y.push_back(std::log(e));
    fit.used_n.push_back(n);
  }
  const std::size_t m = x.size();
  if (m < 3) throw ArgumentError("fit_power_law: need at least three positive points");

  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= m;
  ym /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx == 0.0) throw ArgumentError("fit_power_law: degenerate abscissae");

  fit.exponent = sxy / sxx;
  fit.prefactor = std::exp(ym - fit.exponent * xm);
  fit.residuals.resize(m);
  const double lna = ym - fit.exponent * xm;
  for (std::size_t i = 0; i < m; ++i) fit.residuals[i] = y[i] - (lna + fit.exponent * x[i]);
  return fit;
}

}  // namespace helice
