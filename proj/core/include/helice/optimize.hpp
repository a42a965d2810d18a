#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

namespace helice {

/// Derivative-free minimization problem over strictly positive parameters.
/// The objective is typically the k-th ascending CI eigenvalue for a chosen
/// sector; evaluation failures (e.g. a degenerate basis after drops) are
/// treated as +inf, never as a crash.
struct OptimizationProblem {
  std::function<double(const std::vector<double>&)> objective;
  std::vector<double> lower;  // positive box bounds
  std::vector<double> upper;
  int budget = 2000;          // maximum objective evaluations
};

struct OptimizationStep {
  int eval_index = 0;  // 0-based objective evaluation counter
  std::vector<double> params;
  double energy = 0.0;
};

struct OptimizationResult {
  std::vector<double> best_params;
  double best_energy = 0.0;
  std::vector<OptimizationStep> trace;  // accepted (improving) steps, non-increasing energy
  int evaluations = 0;
};

/// Nelder-Mead simplex over log-parameters (positivity comes for free),
/// restarting around the incumbent with a shrunken step on stagnation until
/// the budget is spent.  Deterministic for a given seed and budget.
OptimizationResult optimize(const OptimizationProblem& problem, const std::vector<double>& seed);

/// Trace as CSV: eval,p0,p1,...,energy.
void write_trace_csv(const OptimizationResult& result, std::ostream& out);

}  // namespace helice
