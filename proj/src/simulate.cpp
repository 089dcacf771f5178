#include "bb84/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "bb84/errors.hpp"
#include "bb84/rng.hpp"

namespace bb84 {
namespace {

Eigen::MatrixXd stack_isometry(const RealizedProbe& core) {
  const int M = core.M;
  Eigen::MatrixXd iso(core.dim * M, M);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      iso.block(core.dim * j, i, core.dim, 1) = core.probe.col(i * M + j);
    }
  }
  const double err =
      (iso.transpose() * iso - Eigen::MatrixXd::Identity(M, M)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw InternalError("build_isometry: columns not orthonormal, error " + std::to_string(err));
  }
  return iso;
}

double se(double p, long shots) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(shots));
}

}  // namespace

RealizedAttack build_isometry(const IncoherentParams& p) {
  RealizedAttack out;
  out.core = realize_symmetric_attack(gram4(p), 1);
  out.isometry = stack_isometry(out.core);
  out.analytic_disturbance = p.D;
  out.analytic_bob_success = p.F;
  out.analytic_eve_success = eve_success(p);
  out.analytic_eve_information = eve_information(p);
  return out;
}

RealizedAttack build_isometry(const CoherentParams& p) {
  RealizedAttack out;
  out.core = realize_symmetric_attack(gram16(p), 2);
  out.isometry = stack_isometry(out.core);
  out.analytic_disturbance = disturbance(p);
  out.analytic_bob_success = bob_pair_success(p);
  out.analytic_eve_success = eve_pair_success(p);
  out.analytic_eve_information = eve_pair_information(p);
  return out;
}

SimulationReport simulate(const RealizedAttack& attack, long shots, std::uint64_t seed) {
  if (shots < 1) throw std::domain_error("simulate: shots must be >= 1");
  const RealizedProbe& core = attack.core;
  const int n = core.n;
  const int M = core.M;

  // Joint distribution over (bob outcome j, eve outcome k) per (basis, alice
  // message). Eve's syndrome outcome equals alice XOR bob exactly because the
  // sets are mutually orthogonal; verified below.
  // cumulative[mask][alpha] has M*M entries, outcome id = j*M + k.
  std::vector<std::vector<std::vector<double>>> cumulative(
      M, std::vector<std::vector<double>>(M, std::vector<double>(M * M, 0.0)));
  for (int mask = 0; mask < M; ++mask) {
    const Eigen::MatrixXd& probe = core.probe_in_basis[mask];
    const Eigen::MatrixXd& meas = core.measurement[mask];
    for (int alpha = 0; alpha < M; ++alpha) {
      double norm = 0.0;
      for (int j = 0; j < M; ++j) norm += probe.col(alpha * M + j).squaredNorm();
      if (std::abs(norm - 1.0) > 1e-10) {
        throw InternalError("simulate: joint state norm " + std::to_string(norm));
      }
      auto& cum = cumulative[mask][alpha];
      double running = 0.0;
      double off_set = 0.0;
      for (int j = 0; j < M; ++j) {
        const Eigen::VectorXd psi = probe.col(alpha * M + j);
        const int m = alpha ^ j;
        for (int mm = 0; mm < M; ++mm) {
          for (int k = 0; k < M; ++k) {
            const double amp = meas.col(mm * M + k).dot(psi);
            if (mm == m) {
              running += amp * amp;
              cum[j * M + k] = running;
            } else {
              off_set += amp * amp;
            }
          }
        }
      }
      if (off_set > 1e-10 || std::abs(running - 1.0) > 1e-9) {
        throw InternalError("simulate: syndrome sets not orthogonal (leak " +
                            std::to_string(off_set) + ")");
      }
      cum.back() = 1.0;
    }
  }

  SimulationReport rep;
  rep.n = n;
  rep.M = M;
  rep.shots = shots;
  rep.seed = seed;
  rep.syndrome_counts.assign(M, 0);
  rep.shots_by_basis.assign(M, 0);
  rep.shots_by_message.assign(M, 0);

  std::vector<long> flips_by_basis(M, 0), flips_by_message(M, 0);
  std::vector<long> bob_ok_by_message(M, 0), eve_ok_by_message(M, 0);
  std::vector<std::vector<long>> joint_counts(M, std::vector<long>(M * M, 0));
  long bob_ok = 0, eve_ok = 0, qubit_flips = 0;

  Xoshiro256pp rng(seed, 0);
  for (long s = 0; s < shots; ++s) {
    const int alpha = static_cast<int>(rng.next_pow2(static_cast<std::uint32_t>(M)));
    const int mask = static_cast<int>(rng.next_pow2(static_cast<std::uint32_t>(M)));
    const double u = rng.next_double();
    const auto& cum = cumulative[mask][alpha];
    int outcome = 0;
    while (outcome < M * M - 1 && u >= cum[outcome]) ++outcome;
    const int j = outcome / M;
    const int k = outcome % M;
    const int syndrome = alpha ^ j;

    rep.syndrome_counts[syndrome] += 1;
    rep.shots_by_basis[mask] += 1;
    rep.shots_by_message[alpha] += 1;
    const int flips = __builtin_popcount(static_cast<unsigned>(syndrome));
    qubit_flips += flips;
    flips_by_basis[mask] += flips;
    flips_by_message[alpha] += flips;
    if (j == alpha) {
      ++bob_ok;
      bob_ok_by_message[alpha] += 1;
    }
    if (k == alpha) {
      ++eve_ok;
      eve_ok_by_message[alpha] += 1;
    }
    joint_counts[alpha][syndrome * M + k] += 1;
  }

  const double total = static_cast<double>(shots);
  rep.disturbance = static_cast<double>(qubit_flips) / (total * n);
  rep.disturbance_se = se(rep.disturbance, shots);
  rep.bob_success = static_cast<double>(bob_ok) / total;
  rep.bob_success_se = se(rep.bob_success, shots);
  rep.eve_success = static_cast<double>(eve_ok) / total;
  rep.eve_success_se = se(rep.eve_success, shots);

  rep.disturbance_by_basis.assign(M, 0.0);
  rep.disturbance_by_message.assign(M, 0.0);
  rep.bob_success_by_message.assign(M, 0.0);
  rep.eve_success_by_message.assign(M, 0.0);
  for (int v = 0; v < M; ++v) {
    if (rep.shots_by_basis[v] > 0) {
      rep.disturbance_by_basis[v] =
          static_cast<double>(flips_by_basis[v]) / (static_cast<double>(rep.shots_by_basis[v]) * n);
    }
    if (rep.shots_by_message[v] > 0) {
      const double mshots = static_cast<double>(rep.shots_by_message[v]);
      rep.disturbance_by_message[v] = static_cast<double>(flips_by_message[v]) / (mshots * n);
      rep.bob_success_by_message[v] = static_cast<double>(bob_ok_by_message[v]) / mshots;
      rep.eve_success_by_message[v] = static_cast<double>(eve_ok_by_message[v]) / mshots;
    }
  }

  // Plug-in mutual information between the message and Eve's (set, outcome).
  std::vector<double> p_outcome(M * M, 0.0);
  double info = 0.0;
  for (int a = 0; a < M; ++a) {
    for (int o = 0; o < M * M; ++o) {
      p_outcome[o] += static_cast<double>(joint_counts[a][o]) / total;
    }
  }
  for (int a = 0; a < M; ++a) {
    const double pa = static_cast<double>(rep.shots_by_message[a]) / total;
    if (pa <= 0.0) continue;
    for (int o = 0; o < M * M; ++o) {
      const double pj = static_cast<double>(joint_counts[a][o]) / total;
      if (pj > 0.0) info += pj * std::log2(pj / (pa * p_outcome[o]));
    }
  }
  rep.eve_information = info;
  return rep;
}

}  // namespace bb84
