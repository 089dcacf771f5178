#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bb84/coherent.hpp"
#include "bb84/gram.hpp"
#include "bb84/incoherent.hpp"

namespace bb84 {

/// One of the protocol's involutive message-space operations: it squares to
/// the identity and maps Alice's state set onto itself (up to sign).
struct ProtocolTransform {
  enum class Kind { BitFlip, BasisSwap, QubitExchange };
  Kind kind;
  int qubit;  // -1 for QubitExchange
  int n;
  Eigen::MatrixXd matrix;  // 2^n x 2^n, symmetric involution
};

ProtocolTransform bit_flip(int n, int qubit);
ProtocolTransform basis_swap(int n, int qubit);
ProtocolTransform qubit_exchange();  // two qubits only

/// {bit-flip, basis-swap} for n=1; per-qubit flips and swaps plus the qubit
/// exchange for n=2.
std::vector<ProtocolTransform> generator_set(int n);

/// One projective measurement: orthonormal columns spanning the probe space,
/// each mapped to a message guess.
struct MeasurementBasis {
  Eigen::MatrixXd vectors;
  std::vector<int> guesses;
};

/// One coherent branch of an eavesdropping strategy: probe-state matrix in
/// the z basis plus Eve's measurement for each announced basis.
struct AttackBranch {
  double weight = 1.0;
  Eigen::MatrixXd probe;  // dim x M^2, column i*M+j = |E_{i,j}>
  std::vector<MeasurementBasis> measurement;  // per basis mask
};

/// A general (not necessarily symmetric) attack. Symmetrization products are
/// kept as weighted branches: Eve measures the ancilla registers first, which
/// select a branch, so every averaged quantity is the weighted branch sum and
/// the Gram matrix is the weighted sum of branch Grams.
struct RawAttack {
  int n = 1;
  int M = 2;
  std::vector<AttackBranch> branches;

  GramMatrix gram() const;
};

/// Conjugate the attack: probe matrices become T E T, measurements are
/// relabeled through the induced permutation of Alice's states.
RawAttack apply_transform(const ProtocolTransform& t, const RawAttack& a);

/// The ancilla construction: an equal-weight mixture of the attack and its
/// t-conjugate. Symmetric with respect to t and preserves every averaged
/// metric.
RawAttack symmetrize_step(const RawAttack& a, const ProtocolTransform& t);

/// True iff gram(a) and gram(apply_transform(t, a)) agree entrywise.
bool is_symmetric(const RawAttack& a, const ProtocolTransform& t, double tol = 1e-9);

/// Symmetrize with respect to the whole group generated by generator_set(n)
/// (8 elements for n=1, 128 for n=2): one branch per group element. The
/// result passes is_symmetric for every generator.
RawAttack full_symmetrize(const RawAttack& a);

enum class AveragedMetric { Disturbance, EveSuccess, EveInformation };

/// Uniform average over Alice's 4^n states of the per-state quantity
/// (for information: mutual information per announced basis, averaged).
double averaged_metric(const RawAttack& a, AveragedMetric metric);

/// Bridges from the symmetric families, using the aligned optimal
/// measurement in every basis.
RawAttack raw_from_incoherent(const IncoherentParams& p);
RawAttack raw_from_coherent(const CoherentParams& p);

}  // namespace bb84
