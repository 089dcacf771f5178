#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bb84/coherent.hpp"
#include "bb84/incoherent.hpp"
#include "bb84/simulate.hpp"

using namespace bb84;

namespace {

constexpr long kShots = 100000;

double sigma(double p, long shots) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(shots));
}

void check_within_3_sigma(const SimulationReport& rep, const RealizedAttack& attack) {
  CHECK(std::abs(rep.disturbance - attack.analytic_disturbance) <=
        3.0 * sigma(attack.analytic_disturbance, rep.shots) + 1e-12);
  CHECK(std::abs(rep.bob_success - attack.analytic_bob_success) <=
        3.0 * sigma(attack.analytic_bob_success, rep.shots) + 1e-12);
  CHECK(std::abs(rep.eve_success - attack.analytic_eve_success) <=
        3.0 * sigma(attack.analytic_eve_success, rep.shots) + 1e-12);
}

}  // namespace

TEST_CASE("isometry columns are orthonormal") {
  for (double d : {0.0, 0.05, 0.25, 0.4}) {
    const RealizedAttack a = build_isometry(optimal_attack(d));
    const Eigen::MatrixXd gram = a.isometry.transpose() * a.isometry;
    CHECK((gram - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const RealizedAttack pair = build_isometry(product_embedding(optimal_attack(0.25)));
  const Eigen::MatrixXd gram = pair.isometry.transpose() * pair.isometry;
  CHECK((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("identity attack simulates with no disturbance") {
  const RealizedAttack a = build_isometry(new_params(0.0, 0.0));
  const SimulationReport rep = simulate(a, 500, 7);
  CHECK(rep.disturbance == 0.0);
  CHECK(rep.bob_success == 1.0);
  CHECK(rep.syndrome_counts[0] == 500);
}

TEST_CASE("realized product attack reproduces the tensor of single-qubit statistics") {
  // The joint (bob, eve) tables of the realized pair attack factor into the
  // single-qubit tables; comparing the derived marginal metrics covers the
  // index bookkeeping end to end.
  const IncoherentParams q = optimal_attack(0.25);
  const RealizedAttack single = build_isometry(q);
  const RealizedAttack pair = build_isometry(product_embedding(q));
  CHECK(pair.analytic_eve_success ==
        doctest::Approx(single.analytic_eve_success * single.analytic_eve_success)
            .epsilon(1e-12));
  CHECK(pair.analytic_bob_success ==
        doctest::Approx(single.analytic_bob_success * single.analytic_bob_success)
            .epsilon(1e-12));
  CHECK(pair.analytic_eve_information ==
        doctest::Approx(2.0 * single.analytic_eve_information).epsilon(1e-12));
}

TEST_CASE("incoherent attack at D = 1/4 matches analytic values at 1e5 shots") {
  const RealizedAttack a = build_isometry(optimal_attack(0.25));
  const SimulationReport rep = simulate(a, kShots, 20240517);
  check_within_3_sigma(rep, a);
  CHECK(std::abs(rep.eve_information - a.analytic_eve_information) <= 0.02);
}

TEST_CASE("coherent product attack at D = 1/4 matches analytic values at 1e5 shots") {
  const RealizedAttack a = build_isometry(product_embedding(optimal_attack(0.25)));
  const SimulationReport rep = simulate(a, kShots, 20240518);
  check_within_3_sigma(rep, a);
  CHECK(std::abs(rep.eve_information - a.analytic_eve_information) <= 0.02);
}

TEST_CASE("general feasible attacks match analytic values") {
  const RealizedAttack skew = build_isometry(new_params(0.3, -0.12));
  const SimulationReport rep = simulate(skew, kShots, 99);
  check_within_3_sigma(rep, skew);

  const RealizedAttack coh = build_isometry(from_free(0.1, 0.05, 0.6, 0.01, 0.01));
  const SimulationReport rep2 = simulate(coh, kShots, 100);
  check_within_3_sigma(rep2, coh);
}

TEST_CASE("basis independence of the empirical disturbance") {
  const RealizedAttack a = build_isometry(optimal_attack(0.25));
  const SimulationReport rep = simulate(a, kShots, 4242);
  for (int mask = 0; mask < rep.M; ++mask) {
    const long shots = rep.shots_by_basis[mask];
    CHECK(std::abs(rep.disturbance_by_basis[mask] - a.analytic_disturbance) <=
          3.0 * sigma(a.analytic_disturbance, shots));
  }
}

TEST_CASE("bit independence of the empirical metrics") {
  const RealizedAttack a = build_isometry(optimal_attack(0.25));
  const SimulationReport rep = simulate(a, kShots, 777);
  for (int msg = 0; msg < rep.M; ++msg) {
    const long shots = rep.shots_by_message[msg];
    CHECK(std::abs(rep.disturbance_by_message[msg] - a.analytic_disturbance) <=
          3.0 * sigma(a.analytic_disturbance, shots));
    CHECK(std::abs(rep.bob_success_by_message[msg] - a.analytic_bob_success) <=
          3.0 * sigma(a.analytic_bob_success, shots));
    CHECK(std::abs(rep.eve_success_by_message[msg] - a.analytic_eve_success) <=
          3.0 * sigma(a.analytic_eve_success, shots));
  }
}

TEST_CASE("simulate requires at least one shot") {
  const RealizedAttack a = build_isometry(new_params(0.0, 0.0));
  CHECK_THROWS_AS(simulate(a, 0, 1), std::domain_error);
}

TEST_CASE("simulation is deterministic per seed") {
  const RealizedAttack a = build_isometry(optimal_attack(0.1));
  const SimulationReport r1 = simulate(a, 20000, 5);
  const SimulationReport r2 = simulate(a, 20000, 5);
  CHECK(r1.eve_success == r2.eve_success);
  CHECK(r1.disturbance == r2.disturbance);
  CHECK(r1.eve_information == r2.eve_information);
  const SimulationReport r3 = simulate(a, 20000, 6);
  CHECK(r1.eve_success != r3.eve_success);
}

TEST_CASE("pair failure counts are reported for two qubits") {
  const RealizedAttack a = build_isometry(product_embedding(optimal_attack(0.25)));
  const SimulationReport rep = simulate(a, 50000, 11);
  REQUIRE(rep.syndrome_counts.size() == 4);
  long total = 0;
  for (long c : rep.syndrome_counts) total += c;
  CHECK(total == 50000);
  // Syndrome probabilities are (A, B, B, C) = (0.5625, 0.1875, 0.1875, 0.0625).
  CHECK(std::abs(rep.syndrome_counts[0] / 50000.0 - 0.5625) <= 3.0 * sigma(0.5625, 50000));
  CHECK(std::abs(rep.syndrome_counts[3] / 50000.0 - 0.0625) <= 3.0 * sigma(0.0625, 50000));
}
