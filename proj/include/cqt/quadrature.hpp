#pragma once

#include <functional>
#include <vector>

namespace cqt {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], generated
// by Newton iteration on the Legendre polynomial (no tabulated constants).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int n);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0; // estimated absolute error
  int intervals = 0;
};

// Adaptive integration over the piecewise intervals given by ascending
// breakpoints.  Each interval is estimated by nested 7- and 15-point Gauss
// rules; the worst interval is split until the summed error estimate drops
// below rel_tol * |value| (or an absolute floor for near-zero integrals).
// Throws NumericsError with the achieved estimate on non-convergence.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    std::vector<double> breakpoints, double rel_tol,
                                    int max_intervals = 4000);

} // namespace cqt
