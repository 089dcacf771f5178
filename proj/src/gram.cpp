#include "bb84/gram.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bb84/errors.hpp"

namespace bb84 {

GramMatrix::GramMatrix(Eigen::MatrixXd m) : entries(std::move(m)) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw std::invalid_argument("GramMatrix: matrix must be square and nonempty");
  }
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw std::invalid_argument("GramMatrix: matrix not symmetric, max asymmetry " +
                                std::to_string(asym));
  }
  entries = ((entries + entries.transpose()) / 2.0).eval();
  for (int i = 0; i < entries.rows(); ++i) {
    const double d = entries(i, i);
    if (d < -1e-12 || d > 1.0 + 1e-9) {
      throw std::invalid_argument("GramMatrix: diagonal entry " + std::to_string(d) +
                                  " outside [0,1]");
    }
  }
}

double min_eigenvalue(const GramMatrix& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_psd(const GramMatrix& g, double tol) {
  return min_eigenvalue(g) >= -tol;
}

StateSet realize_gram(const GramMatrix& g, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.entries);
  const Eigen::VectorXd& lambda = es.eigenvalues();  // ascending
  if (lambda(0) < -tol) {
    throw InfeasibilityError("realize_gram: Gram matrix not PSD, min eigenvalue " +
                             std::to_string(lambda(0)));
  }

  const int n = g.dim();
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    if (lambda(k) > tol) ++rank;
  }

  StateSet out;
  out.vectors.resize(n, rank);
  out.vectors.setZero();
  // Columns ordered by descending eigenvalue.
  for (int c = 0; c < rank; ++c) {
    const int k = n - 1 - c;
    const double s = std::sqrt(lambda(k));
    out.vectors.col(c) = es.eigenvectors().col(k) * s;
  }

  const double err = (out.products() - g.entries).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw InternalError("realize_gram: reconstruction error " + std::to_string(err));
  }
  return out;
}

}  // namespace bb84
