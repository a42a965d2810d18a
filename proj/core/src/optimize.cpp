#include "helice/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "helice/errors.hpp"

namespace helice {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tracker {
  const OptimizationProblem* problem = nullptr;
  int evaluations = 0;
  std::vector<double> best_params;
  double best_energy = kInf;
  std::vector<OptimizationStep> trace;

  bool exhausted() const { return evaluations >= problem->budget; }

  // Evaluates in parameter space (exp of the working coordinates); failures
  // become +inf so the simplex simply moves away from them.  The budget is a
  // hard ceiling: once spent, no further objective calls happen and the
  // request reads as a rejected point.
  double eval(const std::vector<double>& y) {
    if (exhausted()) return kInf;
    std::vector<double> x(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::exp(y[i]);
    double value = kInf;
    try {
      value = problem->objective(x);
      if (std::isnan(value)) value = kInf;
    } catch (const Error&) {
      value = kInf;
    }
    const int index = evaluations++;
    if (value < best_energy) {
      best_energy = value;
      best_params = x;
      trace.push_back({index, x, value});
    }
    return value;
  }
};

}  // namespace

OptimizationResult optimize(const OptimizationProblem& problem, const std::vector<double>& seed) {
  const int n = static_cast<int>(seed.size());
  if (n == 0) throw ArgumentError("optimize: empty parameter vector");
  if (problem.budget < 1) throw ArgumentError("optimize: budget must be >= 1");
  if (!problem.objective) throw ArgumentError("optimize: missing objective");
  if (problem.lower.size() != seed.size() || problem.upper.size() != seed.size())
    throw ArgumentError("optimize: bounds must match the parameter count");

  std::vector<double> ylo(n), yhi(n), y0(n);
  for (int i = 0; i < n; ++i) {
    if (!(problem.lower[i] > 0.0) || !(problem.upper[i] > problem.lower[i]))
      throw ArgumentError("optimize: bounds must satisfy 0 < lower < upper");
    if (seed[i] < problem.lower[i] || seed[i] > problem.upper[i])
      throw ArgumentError("optimize: seed outside bounds");
    ylo[i] = std::log(problem.lower[i]);
    yhi[i] = std::log(problem.upper[i]);
    y0[i] = std::log(seed[i]);
  }
  auto clamp = [&](std::vector<double>& y) {
    for (int i = 0; i < n; ++i) y[i] = std::clamp(y[i], ylo[i], yhi[i]);
  };

  Tracker tracker;
  tracker.problem = &problem;
  tracker.best_params = seed;  // keeps restarts well-defined if every evaluation fails
  tracker.eval(y0);

  constexpr double alpha = 1.0, gamma = 2.0, beta = 0.5, delta = 0.5;
  double step = 0.25;  // initial simplex edge in log space
  std::vector<double> center = y0;

  while (!tracker.exhausted()) {
    // Fresh simplex around the incumbent.
    std::vector<std::vector<double>> pts(n + 1, center);
    std::vector<double> f(n + 1);
    for (int i = 0; i < n; ++i) {
      pts[i + 1][i] += step;
      clamp(pts[i + 1]);
    }
    std::fill(f.begin(), f.end(), kInf);
    for (int v = 0; v <= n && !tracker.exhausted(); ++v) f[v] = tracker.eval(pts[v]);

    while (!tracker.exhausted()) {
      std::vector<int> order(n + 1);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });

      const int best = order[0], worst = order[n], second = order[n - 1];
      double spread = 0.0;
      for (int i = 0; i < n; ++i)
        spread = std::max(spread, std::abs(pts[worst][i] - pts[best][i]));
      if (std::abs(f[worst] - f[best]) < 1e-13 && spread < 1e-10) break;
      if (spread < 1e-12) break;

      std::vector<double> centroid(n, 0.0);
      for (int v = 0; v <= n; ++v)
        if (v != worst)
          for (int i = 0; i < n; ++i) centroid[i] += pts[v][i] / n;

      auto blend = [&](double coef) {
        std::vector<double> p(n);
        for (int i = 0; i < n; ++i) p[i] = centroid[i] + coef * (centroid[i] - pts[worst][i]);
        clamp(p);
        return p;
      };

      auto reflect = blend(alpha);
      const double fr = tracker.eval(reflect);
      if (fr < f[best] && !tracker.exhausted()) {
        auto expand = blend(gamma);
        const double fe = tracker.eval(expand);
        if (fe < fr) {
          pts[worst] = expand;
          f[worst] = fe;
        } else {
          pts[worst] = reflect;
          f[worst] = fr;
        }
      } else if (fr < f[second]) {
        pts[worst] = reflect;
        f[worst] = fr;
      } else if (!tracker.exhausted()) {
        auto contract = blend(fr < f[worst] ? beta : -beta);
        const double fc = tracker.eval(contract);
        if (fc < std::min(fr, f[worst])) {
          pts[worst] = contract;
          f[worst] = fc;
        } else {
          // Shrink toward the best vertex.
          for (int v = 0; v <= n && !tracker.exhausted(); ++v) {
            if (v == best) continue;
            for (int i = 0; i < n; ++i)
              pts[v][i] = pts[best][i] + delta * (pts[v][i] - pts[best][i]);
            clamp(pts[v]);
            f[v] = tracker.eval(pts[v]);
          }
        }
      }
    }

    // Restart around the best point seen so far with a smaller step.
    center.assign(n, 0.0);
    for (int i = 0; i < n; ++i) center[i] = std::log(tracker.best_params[i]);
    clamp(center);
    step *= 0.5;
    if (step < 1e-8) step = 0.25;  // cycle step sizes if budget remains
  }

  OptimizationResult result;
  result.best_params = tracker.best_params;
  result.best_energy = tracker.best_energy;
  result.trace = std::move(tracker.trace);
  result.evaluations = tracker.evaluations;
  return result;
}

void write_trace_csv(const OptimizationResult& result, std::ostream& out) {
  const std::size_t n = result.best_params.size();
  out << "eval";
  for (std::size_t i = 0; i < n; ++i) out << ",p" << i;
  out << ",energy\n";
  char buf[64];
  for (const auto& step : result.trace) {
    out << step.eval_index;
    for (double p : step.params) {
      std::snprintf(buf, sizeof buf, "%.12g", p);
      out << ',' << buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", step.energy);
    out << ',' << buf << '\n';
  }
}

}  // namespace helice
