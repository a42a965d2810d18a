#pragma once

#include <string>
#include <utility>
#include <vector>

namespace helice {

/// Least-squares power law E = a * n^b fitted on (ln n, ln E).
struct PowerLawFit {
  double prefactor = 0.0;  // a
  double exponent = 0.0;   // b
  std::vector<double> residuals;  // ln E_i - (ln a + b ln n_i), per used point
  std::vector<double> used_n;
  std::vector<std::string> warnings;  // skipped points
};

/// Fits points (n, E).  Points with E <= 0 are skipped with a warning; at
/// least three usable points are required.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

}  // namespace helice
