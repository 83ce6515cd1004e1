#pragma once

#include <stdexcept>
#include <string>

namespace cqt {

// Numerical non-convergence or loss of validity (quadrature, eigensolves,
// truncation, integrator drift).  CLI maps this to exit code 3.
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cqt
