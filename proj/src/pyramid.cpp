#include "bb84/pyramid.hpp"

#include <cmath>
#include <string>

#include "bb84/errors.hpp"

namespace bb84 {

void walsh_hadamard(std::span<double> v) {
  const std::size_t n = v.size();
  for (std::size_t h = 1; h < n; h *= 2) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = v[j];
        const double y = v[j + h];
        v[j] = x + y;
        v[j + h] = x - y;
      }
    }
  }
}

std::vector<double> xor_set_coefficients(std::span<const double> overlaps) {
  const std::size_t n = overlaps.size();
  std::vector<double> lambda(overlaps.begin(), overlaps.end());
  walsh_hadamard(lambda);  // eigenvalues of the unit Gram, indexed by character

  for (std::size_t x = 0; x < n; ++x) {
    if (lambda[x] < -1e-12) {
      throw InfeasibilityError("xor_set_coefficients: no states with these overlaps exist "
                               "(radicand " + std::to_string(lambda[x]) + ")");
    }
    lambda[x] = std::sqrt(std::max(0.0, lambda[x]));
  }
  walsh_hadamard(lambda);
  for (double& c : lambda) c /= static_cast<double>(n);
  return lambda;
}

PyramidSolution pyramid_solve(double k1, double k2, double k3) {
  // Overlap between states i and i^x: x=1 -> k1, x=2 -> k3, x=3 -> k2
  // (the coefficient matrix row (a,b,c,d) pairs b with k1, c with k3, d with k2).
  const double g[4] = {1.0, k1, k3, k2};
  const auto coeff = xor_set_coefficients(std::span<const double>(g, 4));
  PyramidSolution s{coeff[0], coeff[1], coeff[2], coeff[3]};

  const double norm = s.a * s.a + s.b * s.b + s.c * s.c + s.d * s.d;
  if (std::abs(norm - 1.0) > 1e-12) {
    throw InternalError("pyramid_solve: coefficient norm " + std::to_string(norm));
  }
  return s;
}

}  // namespace bb84
