#pragma once

#include <cstdint>
#include <vector>

#include "bb84/coherent.hpp"
#include "bb84/incoherent.hpp"
#include "bb84/protocol.hpp"

namespace bb84 {

/// Explicit isometry realization of an attack plus Eve's per-basis aligned
/// measurements, with the analytic metrics the realization should reproduce.
struct RealizedAttack {
  RealizedProbe core;

  /// Column i = joint (probe tensor message) state for z-basis message i;
  /// columns are orthonormal.
  Eigen::MatrixXd isometry;

  double analytic_disturbance = 0.0;
  double analytic_bob_success = 1.0;
  double analytic_eve_success = 0.0;
  double analytic_eve_information = 0.0;
};

struct SimulationReport {
  int n = 1;
  int M = 2;
  long shots = 0;
  std::uint64_t seed = 0;

  double disturbance = 0.0, disturbance_se = 0.0;  // per qubit
  double bob_success = 0.0, bob_success_se = 0.0;  // full message intact
  double eve_success = 0.0, eve_success_se = 0.0;  // full message guessed
  double eve_information = 0.0;                    // plug-in estimate, bits

  /// Counts of alice XOR bob error patterns; for n=2 these are the joint
  /// per-qubit failure counts (none, first, second, both).
  std::vector<long> syndrome_counts;

  /// Conditioned tallies for the symmetry diagnostics.
  std::vector<long> shots_by_basis;
  std::vector<double> disturbance_by_basis;
  std::vector<long> shots_by_message;
  std::vector<double> disturbance_by_message;
  std::vector<double> bob_success_by_message;
  std::vector<double> eve_success_by_message;
};

RealizedAttack build_isometry(const IncoherentParams& p);
RealizedAttack build_isometry(const CoherentParams& p);

/// Sample the sifted protocol: Alice draws a uniform message and per-qubit
/// basis, Bob measures in Alice's basis, Eve learns the basis and measures
/// the set projector followed by the aligned basis. Deterministic per seed.
SimulationReport simulate(const RealizedAttack& attack, long shots, std::uint64_t seed);

}  // namespace bb84
