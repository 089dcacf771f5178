#include "bb84/symmetrize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bb84/entropy.hpp"
#include "bb84/errors.hpp"
#include "bb84/protocol.hpp"

namespace bb84 {
namespace {

// Permutation of Alice's labeled states (basis mask, message) induced by an
// orthogonal map that preserves the state set up to sign.
struct StatePermutation {
  std::vector<int> basis;                 // basis' per basis mask
  std::vector<std::vector<int>> message;  // message'[mask][msg]
};

StatePermutation state_permutation(int n, const Eigen::MatrixXd& R, double tol = 1e-9) {
  const int M = 1 << n;
  std::vector<Eigen::MatrixXd> v(M);
  for (int mask = 0; mask < M; ++mask) v[mask] = basis_change(n, mask);

  StatePermutation perm;
  perm.basis.assign(M, -1);
  perm.message.assign(M, std::vector<int>(M, -1));
  for (int mask = 0; mask < M; ++mask) {
    for (int msg = 0; msg < M; ++msg) {
      const Eigen::VectorXd y = R * v[mask].col(msg);
      for (int mask2 = 0; mask2 < M && perm.message[mask][msg] < 0; ++mask2) {
        for (int msg2 = 0; msg2 < M; ++msg2) {
          if (std::abs(std::abs(y.dot(v[mask2].col(msg2))) - 1.0) < tol) {
            if (perm.basis[mask] >= 0 && perm.basis[mask] != mask2) {
              throw InternalError("state_permutation: basis image not message-independent");
            }
            perm.basis[mask] = mask2;
            perm.message[mask][msg] = msg2;
            break;
          }
        }
      }
      if (perm.message[mask][msg] < 0) {
        throw std::invalid_argument("state_permutation: transform does not map Alice's state "
                                    "set onto itself");
      }
    }
  }
  return perm;
}

// Conjugate one branch by R: E -> R E R^T, with Eve's rule relabeled so that
// she plays the original strategy as if Alice had prepared R^T |alpha>.
AttackBranch conjugate_branch(int n, const Eigen::MatrixXd& R, const AttackBranch& b) {
  const int M = 1 << n;
  const StatePermutation fwd = state_permutation(n, R);
  const StatePermutation bwd = state_permutation(n, R.transpose());

  AttackBranch out;
  out.weight = b.weight;
  out.probe = b.probe * pair_conjugation(R).transpose();
  out.measurement.resize(M);
  for (int mask = 0; mask < M; ++mask) {
    const int source = bwd.basis[mask];  // basis Eve pretends was announced
    const MeasurementBasis& m = b.measurement[source];
    MeasurementBasis relabeled;
    relabeled.vectors = m.vectors;
    relabeled.guesses.resize(m.guesses.size());
    for (std::size_t k = 0; k < m.guesses.size(); ++k) {
      relabeled.guesses[k] = fwd.message[source][m.guesses[k]];
    }
    out.measurement[mask] = std::move(relabeled);
  }
  return out;
}

void validate_branch(int n, const AttackBranch& b) {
  const int M = 1 << n;
  if (b.probe.cols() != M * M) {
    throw std::invalid_argument("RawAttack: probe must have M^2 columns");
  }
  // Isometry trace structure: sum_j <E_ij|E_kj> = delta_ik.
  for (int i = 0; i < M; ++i) {
    for (int k = 0; k < M; ++k) {
      double s = 0.0;
      for (int j = 0; j < M; ++j) s += b.probe.col(i * M + j).dot(b.probe.col(k * M + j));
      if (std::abs(s - (i == k ? 1.0 : 0.0)) > 1e-8) {
        throw std::invalid_argument("RawAttack: probe columns are not an isometry");
      }
    }
  }
  if (b.measurement.size() != static_cast<std::size_t>(M)) {
    throw std::invalid_argument("RawAttack: need one measurement per basis mask");
  }
  for (const MeasurementBasis& m : b.measurement) {
    if (m.vectors.rows() != b.probe.rows() ||
        m.vectors.cols() != static_cast<Eigen::Index>(m.guesses.size())) {
      throw std::invalid_argument("RawAttack: measurement shape mismatch");
    }
    if (m.vectors.cols() != b.probe.rows()) {
      throw std::invalid_argument("RawAttack: measurement must be a complete basis of the "
                                  "probe space");
    }
    const double err = (m.vectors.transpose() * m.vectors -
                        Eigen::MatrixXd::Identity(m.vectors.cols(), m.vectors.cols()))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > 1e-8) {
      throw std::invalid_argument("RawAttack: measurement not orthonormal, error " +
                                  std::to_string(err));
    }
    for (int g : m.guesses) {
      if (g < 0 || g >= M) throw std::invalid_argument("RawAttack: guess out of range");
    }
  }
}

bool same_up_to_sign(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() < tol || (a + b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace

ProtocolTransform bit_flip(int n, int qubit) {
  const int M = 1 << n;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(M, M);
  for (int m = 0; m < M; ++m) t(m ^ (1 << qubit), m) = 1.0;
  return ProtocolTransform{ProtocolTransform::Kind::BitFlip, qubit, n, std::move(t)};
}

ProtocolTransform basis_swap(int n, int qubit) {
  Eigen::MatrixXd h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const Eigen::MatrixXd factor = q == qubit ? h : Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd next(t.rows() * 2, t.cols() * 2);
    for (int i = 0; i < t.rows(); ++i) {
      for (int j = 0; j < t.cols(); ++j) {
        next.block(i * 2, j * 2, 2, 2) = t(i, j) * factor;
      }
    }
    t = std::move(next);
  }
  return ProtocolTransform{ProtocolTransform::Kind::BasisSwap, qubit, n, std::move(t)};
}

ProtocolTransform qubit_exchange() {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4, 4);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) t(b2 + 2 * b1, b1 + 2 * b2) = 1.0;
  }
  return ProtocolTransform{ProtocolTransform::Kind::QubitExchange, -1, 2, std::move(t)};
}

std::vector<ProtocolTransform> generator_set(int n) {
  std::vector<ProtocolTransform> gens;
  for (int q = 0; q < n; ++q) gens.push_back(bit_flip(n, q));
  for (int q = 0; q < n; ++q) gens.push_back(basis_swap(n, q));
  if (n == 2) gens.push_back(qubit_exchange());
  return gens;
}

GramMatrix RawAttack::gram() const {
  const int size = M * M;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size, size);
  for (const AttackBranch& b : branches) {
    g += b.weight * (b.probe.transpose() * b.probe);
  }
  return GramMatrix(g);
}

RawAttack apply_transform(const ProtocolTransform& t, const RawAttack& a) {
  if (t.n != a.n) throw std::invalid_argument("apply_transform: dimension mismatch");
  RawAttack out;
  out.n = a.n;
  out.M = a.M;
  out.branches.reserve(a.branches.size());
  for (const AttackBranch& b : a.branches) {
    out.branches.push_back(conjugate_branch(a.n, t.matrix, b));
  }
  return out;
}

RawAttack symmetrize_step(const RawAttack& a, const ProtocolTransform& t) {
  if (t.n != a.n) throw std::invalid_argument("symmetrize_step: dimension mismatch");
  RawAttack out;
  out.n = a.n;
  out.M = a.M;
  out.branches.reserve(2 * a.branches.size());
  for (const AttackBranch& b : a.branches) {
    AttackBranch half = b;
    half.weight *= 0.5;
    out.branches.push_back(std::move(half));
  }
  for (const AttackBranch& b : a.branches) {
    AttackBranch half = conjugate_branch(a.n, t.matrix, b);
    half.weight *= 0.5;
    out.branches.push_back(std::move(half));
  }
  return out;
}

bool is_symmetric(const RawAttack& a, const ProtocolTransform& t, double tol) {
  const GramMatrix g = a.gram();
  const GramMatrix h = apply_transform(t, a).gram();
  return (g.entries - h.entries).cwiseAbs().maxCoeff() <= tol;
}

RawAttack full_symmetrize(const RawAttack& a) {
  // Closure of the generator set: one conjugation per group element, uniform
  // weights. A single pass over the generators is not enough; conjugating by
  // one generator can break the symmetry established by an earlier one.
  std::vector<Eigen::MatrixXd> group;
  group.push_back(Eigen::MatrixXd::Identity(a.M, a.M));
  const auto gens = generator_set(a.n);
  std::size_t frontier_begin = 0;
  while (frontier_begin < group.size()) {
    const std::size_t frontier_end = group.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const ProtocolTransform& t : gens) {
        Eigen::MatrixXd candidate = t.matrix * group[i];
        bool known = false;
        for (const Eigen::MatrixXd& r : group) {
          if (same_up_to_sign(candidate, r, 1e-9)) {
            known = true;
            break;
          }
        }
        if (!known) group.push_back(std::move(candidate));
      }
    }
    frontier_begin = frontier_end;
  }

  RawAttack out;
  out.n = a.n;
  out.M = a.M;
  const double scale = 1.0 / static_cast<double>(group.size());
  out.branches.reserve(group.size() * a.branches.size());
  for (const Eigen::MatrixXd& r : group) {
    for (const AttackBranch& b : a.branches) {
      AttackBranch conj = conjugate_branch(a.n, r, b);
      conj.weight *= scale;
      out.branches.push_back(std::move(conj));
    }
  }
  return out;
}

double averaged_metric(const RawAttack& a, AveragedMetric metric) {
  const int n = a.n;
  const int M = a.M;
  for (const AttackBranch& b : a.branches) validate_branch(n, b);

  double total = 0.0;
  for (const AttackBranch& b : a.branches) {
    double branch_value = 0.0;
    for (int mask = 0; mask < M; ++mask) {
      const Eigen::MatrixXd probe = b.probe * pair_conjugation(basis_change(n, mask)).transpose();
      const MeasurementBasis& meas = b.measurement[mask];
      const int outcomes = static_cast<int>(meas.guesses.size());

      if (metric == AveragedMetric::Disturbance) {
        double acc = 0.0;
        for (int alpha = 0; alpha < M; ++alpha) {
          for (int j = 0; j < M; ++j) {
            const double pj = probe.col(alpha * M + j).squaredNorm();
            acc += pj * __builtin_popcount(static_cast<unsigned>(alpha ^ j));
          }
        }
        branch_value += acc / (M * n);
      } else if (metric == AveragedMetric::EveSuccess) {
        double acc = 0.0;
        for (int alpha = 0; alpha < M; ++alpha) {
          for (int o = 0; o < outcomes; ++o) {
            if (meas.guesses[o] != alpha) continue;
            for (int j = 0; j < M; ++j) {
              const double amp = meas.vectors.col(o).dot(probe.col(alpha * M + j));
              acc += amp * amp;
            }
          }
        }
        branch_value += acc / M;
      } else {
        // Mutual information between the uniform message and Eve's outcome.
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(M, outcomes);
        for (int alpha = 0; alpha < M; ++alpha) {
          for (int o = 0; o < outcomes; ++o) {
            for (int j = 0; j < M; ++j) {
              const double amp = meas.vectors.col(o).dot(probe.col(alpha * M + j));
              p(alpha, o) += amp * amp;
            }
          }
        }
        double mi = 0.0;
        for (int o = 0; o < outcomes; ++o) {
          const double po = p.col(o).sum() / M;
          for (int alpha = 0; alpha < M; ++alpha) {
            const double joint = p(alpha, o) / M;
            if (joint > 1e-300 && po > 0.0) {
              mi += joint * std::log2(p(alpha, o) / po);
            }
          }
        }
        branch_value += mi;
      }
    }
    total += b.weight * branch_value / M;  // average over basis masks
  }
  return total;
}

namespace {

RawAttack raw_from_realized(const RealizedProbe& core) {
  RawAttack out;
  out.n = core.n;
  out.M = core.M;
  AttackBranch branch;
  branch.weight = 1.0;
  branch.probe = core.probe;
  branch.measurement.resize(core.M);
  for (int mask = 0; mask < core.M; ++mask) {
    MeasurementBasis m;
    m.vectors = core.measurement[mask];
    m.guesses.resize(core.M * core.M);
    for (int set = 0; set < core.M; ++set) {
      for (int k = 0; k < core.M; ++k) m.guesses[set * core.M + k] = k;
    }
    branch.measurement[mask] = std::move(m);
  }
  out.branches.push_back(std::move(branch));
  return out;
}

}  // namespace

RawAttack raw_from_incoherent(const IncoherentParams& p) {
  return raw_from_realized(realize_symmetric_attack(gram4(p), 1));
}

RawAttack raw_from_coherent(const CoherentParams& p) {
  return raw_from_realized(realize_symmetric_attack(gram16(p), 2));
}

}  // namespace bb84
