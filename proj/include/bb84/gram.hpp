#pragma once

#include <Eigen/Dense>

namespace bb84 {

/// Symmetric matrix of probe-state inner products. Positive semidefiniteness
/// is the exact condition for the probe states to exist.
struct GramMatrix {
  Eigen::MatrixXd entries;

  explicit GramMatrix(Eigen::MatrixXd m);
  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Real coordinate realization of a set of states with prescribed products.
struct StateSet {
  Eigen::MatrixXd vectors;  // row i = coordinates of state i

  int count() const { return static_cast<int>(vectors.rows()); }
  int dim() const { return static_cast<int>(vectors.cols()); }
  Eigen::MatrixXd products() const { return vectors * vectors.transpose(); }
};

/// True iff the smallest eigenvalue of g is >= -tol.
bool is_psd(const GramMatrix& g, double tol = 1e-9);

/// Smallest eigenvalue of g.
double min_eigenvalue(const GramMatrix& g);

/// Factor g into explicit state vectors (dim <= rank). Eigenvalues in
/// [-tol, 0] are clipped to zero; anything below -tol is an infeasibility.
/// Deterministic for identical input.
StateSet realize_gram(const GramMatrix& g, double tol = 1e-9);

}  // namespace bb84
