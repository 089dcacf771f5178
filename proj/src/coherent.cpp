#include "bb84/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bb84/entropy.hpp"
#include "bb84/errors.hpp"
#include "bb84/pyramid.hpp"

namespace bb84 {
namespace {

constexpr double kDegenerate = 1e-12;

// In-set overlap by member XOR: row m of this table is (diag, xor1, xor2, xor3).
// S2 is S1 with the roles of B1 and B3 exchanged (qubit order).
std::array<std::array<double, 4>, 4> set_coefficients(const CoherentParams& p) {
  return {{{p.A, p.A1, p.A1, p.A2},
           {p.B, p.B1, p.B3, p.B2},
           {p.B, p.B3, p.B1, p.B2},
           {p.C, p.C1, p.C1, p.C2}}};
}

void check_feasible(const CoherentParams& p, double tol) {
  if (p.A < -tol) throw InfeasibilityError("coherent attack: negative set probability A=" +
                                           std::to_string(p.A));
  if (p.B < -tol) throw InfeasibilityError("coherent attack: negative set probability B=" +
                                           std::to_string(p.B));
  if (p.C < -tol) throw InfeasibilityError("coherent attack: negative set probability C=" +
                                           std::to_string(p.C));
  const auto eig = set_block_eigenvalues(p);
  for (int m = 0; m < 4; ++m) {
    double lo = eig[4 * m];
    for (int x = 1; x < 4; ++x) lo = std::min(lo, eig[4 * m + x]);
    if (lo < -tol) {
      throw InfeasibilityError("coherent attack: set S" + std::to_string(m) +
                               " Gram block not PSD, min eigenvalue " + std::to_string(lo));
    }
  }
}

}  // namespace

std::array<double, 5> relation_residuals(const CoherentParams& p) {
  return {p.A + 2.0 * p.B + p.C - 1.0,
          (p.B - p.C) - (p.B3 + p.C1),
          (p.A - p.B) - (p.A1 + p.B1),
          (p.A1 - p.A2) - (p.B2 + p.B3),
          (p.B1 - p.C2) - (p.B2 + p.C1)};
}

std::array<double, 4> set_weights(const CoherentParams& p) {
  return {p.A, p.B, p.B, p.C};
}

std::array<double, 16> set_block_eigenvalues(const CoherentParams& p) {
  const auto coeff = set_coefficients(p);
  std::array<double, 16> out{};
  for (int m = 0; m < 4; ++m) {
    double v[4] = {coeff[m][0], coeff[m][1], coeff[m][2], coeff[m][3]};
    walsh_hadamard(std::span<double>(v, 4));
    for (int x = 0; x < 4; ++x) out[4 * m + x] = v[x];
  }
  return out;
}

CoherentParams solve_free_chart(double B, double C, double A1, double B2, double C1) {
  CoherentParams p{};
  p.B = B;
  p.C = C;
  p.A1 = A1;
  p.B2 = B2;
  p.C1 = C1;
  p.A = 1.0 - 2.0 * B - C;
  p.B3 = B - C - C1;
  p.B1 = p.A - B - A1;
  p.A2 = A1 - B2 - p.B3;
  p.C2 = p.B1 - B2 - C1;
  return p;
}

CoherentParams from_free(double B, double C, double A1, double B2, double C1, double tol) {
  CoherentParams p = solve_free_chart(B, C, A1, B2, C1);
  check_feasible(p, tol);
  return p;
}

CoherentParams from_ten(const CoherentParams& p, double rel_tol, double psd_tol) {
  const auto res = relation_residuals(p);
  for (int k = 0; k < 5; ++k) {
    if (std::abs(res[k]) > rel_tol) {
      throw InfeasibilityError("coherent attack: relation " + std::to_string(k + 1) +
                               " violated, residual " + std::to_string(res[k]));
    }
  }
  check_feasible(p, psd_tol);
  return p;
}

double disturbance(const CoherentParams& p) {
  return 1.0 - (p.A + p.B);
}

std::array<SetOverlaps, 4> set_overlaps(const CoherentParams& p) {
  std::array<SetOverlaps, 4> out{};
  const double w[4] = {p.A, p.B, p.B, p.C};
  const double t[4][3] = {{p.A1, p.A2, p.A1},
                          {p.B1, p.B2, p.B3},
                          {p.B1, p.B2, p.B3},
                          {p.C1, p.C2, p.C1}};
  for (int m = 0; m < 4; ++m) {
    if (w[m] <= kDegenerate) {
      out[m] = SetOverlaps{true, 0.0, 0.0, 0.0};
    } else {
      out[m] = SetOverlaps{false, t[m][0] / w[m], t[m][1] / w[m], t[m][2] / w[m]};
    }
  }
  return out;
}

double eve_pair_success(const CoherentParams& p) {
  const auto ov = set_overlaps(p);
  const auto w = set_weights(p);
  double s = 0.0;
  for (int m = 0; m < 4; ++m) {
    if (ov[m].degenerate) continue;
    const PyramidSolution sol = pyramid_solve(ov[m].k1, ov[m].k2, ov[m].k3);
    s += w[m] * sol.a * sol.a;
  }
  return s;
}

double eve_pair_information(const CoherentParams& p) {
  const auto ov = set_overlaps(p);
  const auto w = set_weights(p);
  double info = 0.0;
  for (int m = 0; m < 4; ++m) {
    if (ov[m].degenerate) continue;
    const PyramidSolution sol = pyramid_solve(ov[m].k1, ov[m].k2, ov[m].k3);
    const double dist[4] = {sol.a * sol.a, sol.b * sol.b, sol.c * sol.c, sol.d * sol.d};
    info += w[m] * (2.0 - shannon_entropy(std::span<const double>(dist, 4)));
  }
  return info;
}

double bob_pair_success(const CoherentParams& p) {
  return p.A;
}

CoherentParams product_embedding(const IncoherentParams& q) {
  CoherentParams p{};
  p.A = q.F * q.F;
  p.A1 = q.F * q.F1;
  p.A2 = q.F1 * q.F1;
  p.B = q.F * q.D;
  p.B1 = q.F * q.D1;
  p.B2 = q.F1 * q.D1;
  p.B3 = q.F1 * q.D;
  p.C = q.D * q.D;
  p.C1 = q.D * q.D1;
  p.C2 = q.D1 * q.D1;
  return p;
}

GramMatrix gram16(const CoherentParams& p) {
  const auto coeff = set_coefficients(p);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(16, 16);
  for (int m = 0; m < 4; ++m) {
    for (int i = 0; i < 4; ++i) {
      for (int k = 0; k < 4; ++k) {
        const int row = 4 * i + (i ^ m);
        const int col = 4 * k + (k ^ m);
        g(row, col) = coeff[m][i ^ k];
      }
    }
  }
  return GramMatrix(g);
}

PairMetrics pair_metrics(const CoherentParams& p) {
  return PairMetrics{disturbance(p), eve_pair_success(p), eve_pair_information(p),
                     bob_pair_success(p)};
}

}  // namespace bb84
