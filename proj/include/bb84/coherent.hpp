#pragma once

#include <array>

#include "bb84/gram.hpp"
#include "bb84/incoherent.hpp"

namespace bb84 {

/// Symmetric two-qubit attack: the ten probe-state inner products. Five
/// relations tie them together, so (B, C, A1, B2, C1) is a free chart:
///   A + 2B + C = 1        B - C  = B3 + C1      A - B   = A1 + B1
///   A1 - A2 = B2 + B3     B1 - C2 = B2 + C1
struct CoherentParams {
  double A, A1, A2;
  double B, B1, B2, B3;
  double C, C1, C2;
};

/// Within-set overlap triple (cos theta_1, cos theta_2, cos theta_3).
/// Sets of weight zero are degenerate and contribute nothing downstream.
struct SetOverlaps {
  bool degenerate;
  double k1, k2, k3;
};

struct PairMetrics {
  double disturbance;            // per qubit
  double eve_pair_success;       // both qubits guessed
  double eve_pair_information;   // bits, out of 2
  double bob_pair_success;       // both qubits received intact
};

/// Solve the remaining five scalars from the free chart without any
/// feasibility checks (the relations then hold exactly).
CoherentParams solve_free_chart(double B, double C, double A1, double B2, double C1);

/// Solve the remaining five scalars from the free chart and validate:
/// A, B, C >= 0 and every syndrome-set Gram block PSD within tol.
CoherentParams from_free(double B, double C, double A1, double B2, double C1,
                         double tol = 1e-9);

/// Validate a full ten-scalar parameter set: the five relations must hold
/// within rel_tol, then the same feasibility checks as from_free.
CoherentParams from_ten(const CoherentParams& p, double rel_tol = 1e-9,
                        double psd_tol = 1e-9);

/// Residuals of the five relations, in the order listed above.
std::array<double, 5> relation_residuals(const CoherentParams& p);

/// Weights of the four syndrome sets: (A, B, B, C).
std::array<double, 4> set_weights(const CoherentParams& p);

/// Eigenvalues of the four 4x4 in-set Gram blocks (closed form), 4 per set.
std::array<double, 16> set_block_eigenvalues(const CoherentParams& p);

/// Disturbance per qubit: 1 - (A + B), equivalently B + C.
double disturbance(const CoherentParams& p);

/// Overlap triples for S0..S3: (A1/A, A2/A, A1/A), (B1/B, B2/B, B3/B) twice,
/// (C1/C, C2/C, C1/C).
std::array<SetOverlaps, 4> set_overlaps(const CoherentParams& p);

/// Probability of guessing the full two-qubit message with the per-set
/// aligned-basis measurement: sum of weight * apex^2 over the sets.
double eve_pair_success(const CoherentParams& p);

/// Mutual information between the four-symbol message and Eve's
/// (set, outcome) result: sum of weight * (2 - H4(a^2, b^2, c^2, d^2)).
double eve_pair_information(const CoherentParams& p);

/// Probability Bob receives both qubits undisturbed: A.
double bob_pair_success(const CoherentParams& p);

/// The coherent attack that applies an independent copy of a single-qubit
/// attack to each qubit. Satisfies all five relations exactly.
CoherentParams product_embedding(const IncoherentParams& q);

/// 16x16 Gram over |E_{i,j}>, flat index 4i+j. Nonzero only inside syndrome
/// sets (i XOR j constant); in-set entries depend on the member-index XOR.
GramMatrix gram16(const CoherentParams& p);

PairMetrics pair_metrics(const CoherentParams& p);

}  // namespace bb84
