#include "cqt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "cqt/constants.hpp"
#include "cqt/errors.hpp"

namespace cqt {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5)); // Tricomi-style guess
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x; // ascending order
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { // worst error first
    return error > o.error || (error == o.error && a < o.a);
  }
};

Interval evaluate(const std::function<double(double)>& f, double a, double b,
                  const QuadratureRule& lo, const QuadratureRule& hi) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double coarse = 0.0, fine = 0.0;
  for (size_t i = 0; i < lo.nodes.size(); ++i)
    coarse += lo.weights[i] * f(mid + half * lo.nodes[i]);
  for (size_t i = 0; i < hi.nodes.size(); ++i)
    fine += hi.weights[i] * f(mid + half * hi.nodes[i]);
  coarse *= half;
  fine *= half;
  return {a, b, fine, std::abs(fine - coarse)};
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::vector<double> breakpoints, double rel_tol,
                                    int max_intervals) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_adaptive: need at least two breakpoints");

  static const QuadratureRule g7 = gauss_legendre(7);
  static const QuadratureRule g15 = gauss_legendre(15);

  std::multiset<Interval> queue;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    queue.insert(evaluate(f, breakpoints[i], breakpoints[i + 1], g7, g15));

  const double abs_floor = 1e-300;
  while (true) {
    double value = 0.0, error = 0.0;
    for (const Interval& iv : queue) {
      value += iv.value;
      error += iv.error;
    }
    if (error <= rel_tol * std::abs(value) + abs_floor)
      return {value, error, static_cast<int>(queue.size())};
    if (static_cast<int>(queue.size()) >= max_intervals)
      throw NumericsError("integrate_adaptive: no convergence with " +
                          std::to_string(queue.size()) + " intervals (estimate " +
                          std::to_string(error) + " of " + std::to_string(value) + ")");
    const Interval worst = *queue.begin();
    queue.erase(queue.begin());
    const double mid = 0.5 * (worst.a + worst.b);
    queue.insert(evaluate(f, worst.a, mid, g7, g15));
    queue.insert(evaluate(f, mid, worst.b, g7, g15));
  }
}

} // namespace cqt
