#include "bb84/protocol.hpp"

#include <cmath>
#include <string>

#include "bb84/errors.hpp"
#include "bb84/pyramid.hpp"

namespace bb84 {
namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd basis_change(int n, int basis_mask) {
  Eigen::MatrixXd h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);

  // Message index m = bit0 + 2*bit1: qubit 0 is the fast index, so it is the
  // right-hand kron factor.
  Eigen::MatrixXd v = (basis_mask & 1) ? h : eye;
  for (int q = 1; q < n; ++q) {
    v = kron((basis_mask >> q) & 1 ? h : eye, v);
  }
  return v;
}

Eigen::MatrixXd pair_conjugation(const Eigen::MatrixXd& R) {
  return kron(R, R);
}

Eigen::MatrixXd aligned_measurement(const Eigen::MatrixXd& probe, int M, int extra_start,
                                    double null_tol) {
  const int dim = static_cast<int>(probe.rows());
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(dim, M * M);
  int next_extra = extra_start;

  for (int m = 0; m < M; ++m) {
    // Character vectors t_x = sum_i H(x,i) s_i of the normalized set members;
    // ||t_x||^2 = M * lambda_x for the unit in-set Gram.
    double weight = 0.0;
    for (int i = 0; i < M; ++i) weight += probe.col(i * M + (i ^ m)).squaredNorm();
    weight /= M;

    Eigen::MatrixXd g(dim, M);  // orthonormal character directions
    for (int x = 0; x < M; ++x) {
      Eigen::VectorXd t = Eigen::VectorXd::Zero(dim);
      if (weight > 1e-12) {
        for (int i = 0; i < M; ++i) {
          const double sign = __builtin_popcount(static_cast<unsigned>(x & i)) % 2 ? -1.0 : 1.0;
          t += sign * probe.col(i * M + (i ^ m)) / std::sqrt(weight);
        }
      }
      const double norm = t.norm();
      if (norm * norm <= static_cast<double>(M) * null_tol) {
        if (next_extra >= dim) {
          throw InternalError("aligned_measurement: ran out of notional axes");
        }
        g.col(x) = Eigen::VectorXd::Unit(dim, next_extra++);
      } else {
        g.col(x) = t / norm;
      }
    }
    // Rotate character directions back to the cartesian (aligned) basis.
    for (int k = 0; k < M; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
      for (int x = 0; x < M; ++x) {
        const double sign = __builtin_popcount(static_cast<unsigned>(k & x)) % 2 ? -1.0 : 1.0;
        e += sign * g.col(x);
      }
      basis.col(m * M + k) = e / std::sqrt(static_cast<double>(M));
    }
  }

  const double ortho_err =
      (basis.transpose() * basis - Eigen::MatrixXd::Identity(M * M, M * M)).cwiseAbs().maxCoeff();
  if (ortho_err > 1e-8) {
    throw InternalError("aligned_measurement: basis not orthonormal, error " +
                        std::to_string(ortho_err));
  }
  return basis;
}

RealizedProbe realize_symmetric_attack(const GramMatrix& g, int n, double tol) {
  const int M = 1 << n;
  const int dim = M * M;
  if (g.dim() != dim) {
    throw std::invalid_argument("realize_symmetric_attack: Gram must be " + std::to_string(dim) +
                                "x" + std::to_string(dim));
  }

  const StateSet states = realize_gram(g, tol);
  RealizedProbe out;
  out.n = n;
  out.M = M;
  out.dim = dim;
  out.probe = Eigen::MatrixXd::Zero(dim, dim);
  out.probe.topRows(states.dim()) = states.vectors.transpose();
  const int rank = states.dim();

  out.probe_in_basis.resize(M);
  out.measurement.resize(M);
  for (int mask = 0; mask < M; ++mask) {
    const Eigen::MatrixXd v = basis_change(n, mask);
    out.probe_in_basis[mask] = out.probe * pair_conjugation(v).transpose();
    out.measurement[mask] = aligned_measurement(out.probe_in_basis[mask], M, rank);
  }
  return out;
}

}  // namespace bb84
