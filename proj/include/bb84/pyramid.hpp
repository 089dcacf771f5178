#pragma once

#include <span>
#include <vector>

namespace bb84 {

/// Four unit vectors with prescribed pairwise overlaps, written in the
/// orthonormal basis aligned with them. The apex coefficient a is the largest
/// coordinate; a^2 is the probability of identifying a state by measuring in
/// that basis.
struct PyramidSolution {
  double a, b, c, d;
};

/// Solve a^2+b^2+c^2+d^2 = 1, 2(ab+cd) = k1, 2(ad+bc) = k2, 2(ac+bd) = k3
/// for the branch with a >= b, c, d. The four radicands 1 +/- k1 +/- k2 +/- k3
/// (even sign patterns) must be >= -1e-12; tiny negatives are clipped.
PyramidSolution pyramid_solve(double k1, double k2, double k3);

/// In-place Walsh-Hadamard transform (unnormalized); v.size() must be a
/// power of two.
void walsh_hadamard(std::span<double> v);

/// Coefficients of 2^k states whose overlap depends only on the XOR of their
/// indices: overlaps[x] = <s_i|s_{i^x}> with overlaps[0] = 1. Returns
/// coeff[x] such that s_i = sum_x coeff[i^x] e_x for an orthonormal basis e.
/// coeff[0] is the apex coefficient.
std::vector<double> xor_set_coefficients(std::span<const double> overlaps);

}  // namespace bb84
