#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bb84/gram.hpp"

namespace bb84 {

/// Basis-change matrix V_beta on the 2^n message space. Bit q of basis_mask
/// selects the x basis for qubit q; message index m encodes
/// (qubit-0 bit) + 2*(qubit-1 bit).
Eigen::MatrixXd basis_change(int n, int basis_mask);

/// kron(R, R) on flattened (i, j) pairs: the map taking the probe-state
/// matrix E to R E R^T acts on columns as probe * pair_conjugation(R)^T.
Eigen::MatrixXd pair_conjugation(const Eigen::MatrixXd& R);

/// A symmetric attack realized in coordinates, ready for sampling and
/// enumeration. The probe lives in M^2 coordinates: realized directions
/// first, then notional axes completing rank-deficient syndrome sets so that
/// every aligned measurement is a genuine orthonormal basis.
struct RealizedProbe {
  int n = 1;
  int M = 2;    // 2^n
  int dim = 4;  // M^2

  /// Column i*M+j = |E_{i,j}> in the z...z basis.
  Eigen::MatrixXd probe;

  /// Per basis mask: the conjugated probe matrix V E V.
  std::vector<Eigen::MatrixXd> probe_in_basis;

  /// Per basis mask: orthonormal columns, column m*M+k = cartesian vector k
  /// of syndrome set m.
  std::vector<Eigen::MatrixXd> measurement;
};

/// Realize a symmetric attack from its Gram matrix (size M^2) and build the
/// per-basis aligned measurements. Verifies block structure and
/// orthonormality; throws InfeasibilityError / InternalError.
RealizedProbe realize_symmetric_attack(const GramMatrix& g, int n, double tol = 1e-9);

/// For one basis: the aligned per-set measurement of a probe matrix whose
/// syndrome sets are mutually orthogonal. extra_start names the first unused
/// coordinate available for notional axes. Columns are orthonormal.
Eigen::MatrixXd aligned_measurement(const Eigen::MatrixXd& probe, int M, int extra_start,
                                    double null_tol = 1e-8);

}  // namespace bb84
