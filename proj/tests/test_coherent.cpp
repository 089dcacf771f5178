#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bb84/coherent.hpp"
#include "bb84/errors.hpp"
#include "bb84/gram.hpp"
#include "bb84/incoherent.hpp"
#include "bb84/rng.hpp"

using namespace bb84;

namespace {

IncoherentParams random_single(Xoshiro256pp& rng) {
  const double d = rng.next_double();
  const double lo = -d;
  const double hi = std::min(d, 2.0 - 3.0 * d);
  return new_params(d, lo + rng.next_double() * (hi - lo));
}

// Independent oracle for gram16 of a product attack: the Kronecker square of
// the single-qubit Gram, reindexed from (pair_1, pair_2) to (i, j).
Eigen::MatrixXd tensor_square_gram(const IncoherentParams& q) {
  const Eigen::MatrixXd g1 = gram4(q).entries;
  Eigen::MatrixXd big(16, 16);
  const auto kron_index = [](int n) {
    const int i = n / 4, j = n % 4;
    const int i1 = i & 1, i2 = (i >> 1) & 1;
    const int j1 = j & 1, j2 = (j >> 1) & 1;
    return 4 * (2 * i1 + j1) + (2 * i2 + j2);
  };
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      const int kr = kron_index(r), kc = kron_index(c);
      big(r, c) = g1(kr / 4, kc / 4) * g1(kr % 4, kc % 4);
    }
  }
  return big;
}

}  // namespace

TEST_CASE("identity attack from the free chart") {
  const CoherentParams p = from_free(0.0, 0.0, 1.0, 0.0, 0.0);
  CHECK(p.A == 1.0);
  CHECK(p.A1 == 1.0);
  CHECK(p.A2 == 1.0);
  CHECK(p.B1 == 0.0);
  CHECK(p.B3 == 0.0);
  CHECK(p.C2 == 0.0);
  CHECK(disturbance(p) == 0.0);
}

TEST_CASE("free chart reproduces the product attack at D = 1/4") {
  const CoherentParams p = from_free(0.1875, 0.0625, 0.28125, 0.046875, 0.03125);
  CHECK(p.A == doctest::Approx(0.5625).epsilon(1e-15));
  CHECK(p.B1 == doctest::Approx(0.09375).epsilon(1e-15));
  CHECK(p.B3 == doctest::Approx(0.09375).epsilon(1e-15));
  CHECK(p.A2 == doctest::Approx(0.140625).epsilon(1e-15));
  CHECK(p.C2 == doctest::Approx(0.015625).epsilon(1e-15));
  for (double r : relation_residuals(p)) CHECK(std::abs(r) < 1e-15);
  CHECK(disturbance(p) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("free chart rejects a negative set probability") {
  CHECK_THROWS_WITH_AS(from_free(0.6, 0.1, 0.0, 0.0, 0.0) /* A = -0.3 */,
                       doctest::Contains("negative set probability A"), InfeasibilityError);
}

TEST_CASE("from_ten validates the relations") {
  CoherentParams p = product_embedding(optimal_attack(0.25));
  CHECK_NOTHROW(from_ten(p));
  p.B1 += 0.01;
  CHECK_THROWS_WITH_AS(from_ten(p), doctest::Contains("relation 3"), InfeasibilityError);
}

TEST_CASE("disturbance equals B + C through the closure relation") {
  Xoshiro256pp rng(41);
  for (int i = 0; i < 100; ++i) {
    const CoherentParams p = product_embedding(random_single(rng));
    CHECK(disturbance(p) == doctest::Approx(p.B + p.C).epsilon(1e-12));
  }
  const CoherentParams flat = solve_free_chart(0.25, 0.25, 0.0, 0.0, 0.0);
  CHECK(disturbance(flat) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("set overlaps of the product attack at D = 1/4") {
  const CoherentParams p = product_embedding(optimal_attack(0.25));
  const auto ov = set_overlaps(p);
  CHECK_FALSE(ov[0].degenerate);
  CHECK(ov[0].k1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ov[0].k2 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ov[0].k3 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ov[1].k1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ov[1].k2 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ov[1].k3 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("identity attack has one live set") {
  const CoherentParams p = from_free(0.0, 0.0, 1.0, 0.0, 0.0);
  const auto ov = set_overlaps(p);
  CHECK_FALSE(ov[0].degenerate);
  CHECK(ov[0].k1 == doctest::Approx(1.0));
  CHECK(ov[0].k2 == doctest::Approx(1.0));
  CHECK(ov[0].k3 == doctest::Approx(1.0));
  CHECK(ov[1].degenerate);
  CHECK(ov[2].degenerate);
  CHECK(ov[3].degenerate);
}

TEST_CASE("eve pair success") {
  CHECK(eve_pair_success(from_free(0.0, 0.0, 1.0, 0.0, 0.0)) == doctest::Approx(0.25).epsilon(1e-13));
  const double pa = (2.0 + std::sqrt(3.0)) / 4.0;
  CHECK(eve_pair_success(product_embedding(optimal_attack(0.25))) ==
        doctest::Approx(pa * pa).epsilon(1e-13));
  // Orthogonal-probe limit: A = B = C = 1/4, every overlap zero.
  CHECK(eve_pair_success(from_free(0.25, 0.25, 0.0, 0.0, 0.0)) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("eve pair information") {
  CHECK(eve_pair_information(from_free(0.0, 0.0, 1.0, 0.0, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK(eve_pair_information(product_embedding(optimal_attack(0.25))) ==
        doctest::Approx(1.290842194669460).epsilon(1e-12));
  CHECK(eve_pair_information(from_free(0.25, 0.25, 0.0, 0.0, 0.0)) ==
        doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("bob pair success") {
  CHECK(bob_pair_success(from_free(0.0, 0.0, 1.0, 0.0, 0.0)) == 1.0);
  CHECK(bob_pair_success(product_embedding(optimal_attack(0.25))) ==
        doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(bob_pair_success(from_free(0.25, 0.25, 0.0, 0.0, 0.0)) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("product embedding preserves the relations and reduces the metrics") {
  Xoshiro256pp rng(43);
  for (int i = 0; i < 100; ++i) {
    const IncoherentParams q = random_single(rng);
    const CoherentParams p = product_embedding(q);
    for (double r : relation_residuals(p)) CHECK(std::abs(r) <= 1e-12);
    CHECK(disturbance(p) == doctest::Approx(q.D).epsilon(1e-10));
    const double ps = eve_success(q);
    CHECK(eve_pair_success(p) == doctest::Approx(ps * ps).epsilon(1e-10));
    CHECK(eve_pair_information(p) == doctest::Approx(2.0 * eve_information(q)).epsilon(1e-10));
    CHECK(bob_pair_success(p) == doctest::Approx(q.F * q.F).epsilon(1e-12));
  }
}

TEST_CASE("product embedding at the extremes") {
  const CoherentParams id = product_embedding(new_params(0.0, 0.0));
  CHECK(id.A == 1.0);
  CHECK(id.A1 == 1.0);
  CHECK(id.A2 == 1.0);
  CHECK(id.B == 0.0);

  const CoherentParams half = product_embedding(optimal_attack(0.5));
  CHECK(half.A == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(half.B == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(half.C == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(half.A1) < 1e-15);
  CHECK(std::abs(half.B2) < 1e-15);
}

TEST_CASE("gram16 matches the explicit tensor square for product attacks") {
  Xoshiro256pp rng(47);
  for (int i = 0; i < 25; ++i) {
    const IncoherentParams q = random_single(rng);
    const Eigen::MatrixXd ours = gram16(product_embedding(q)).entries;
    const Eigen::MatrixXd oracle = tensor_square_gram(q);
    CHECK((ours - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("gram16 block structure") {
  const CoherentParams id = from_free(0.0, 0.0, 1.0, 0.0, 0.0);
  const Eigen::MatrixXd g = gram16(id).entries;
  // Identity attack: S0 block is all ones (rank one), everything else zero.
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      CHECK(g(4 * i + i, 4 * k + k) == 1.0);
    }
  }
  CHECK(g.cwiseAbs().sum() == doctest::Approx(16.0));

  Xoshiro256pp rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const CoherentParams p = product_embedding(random_single(rng));
    const Eigen::MatrixXd h = gram16(p).entries;
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 16; ++c) {
        const int syn_r = (r / 4) ^ (r % 4);
        const int syn_c = (c / 4) ^ (c % 4);
        if (syn_r != syn_c) CHECK(h(r, c) == 0.0);
      }
    }
    CHECK(is_psd(GramMatrix(h)));
  }
}

TEST_CASE("closed-form block eigenvalues agree with the dense solver") {
  Xoshiro256pp rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    const CoherentParams p = product_embedding(random_single(rng));
    const auto eigs = set_block_eigenvalues(p);
    double closed_min = eigs[0];
    for (double e : eigs) closed_min = std::min(closed_min, e);
    const double dense_min = min_eigenvalue(gram16(p));
    CHECK(closed_min == doctest::Approx(dense_min).epsilon(1e-10));
  }
}

TEST_CASE("from_free output is always PSD") {
  Xoshiro256pp rng(61);
  int built = 0;
  while (built < 50) {
    const double b = 0.3 * rng.next_double();
    const double c = 0.3 * rng.next_double();
    const double a1 = rng.next_double();
    const double b2 = 0.2 * (2.0 * rng.next_double() - 1.0);
    const double c1 = 0.2 * (2.0 * rng.next_double() - 1.0);
    try {
      const CoherentParams p = from_free(b, c, a1, b2, c1);
      ++built;
      CHECK(is_psd(gram16(p)));
    } catch (const InfeasibilityError&) {
    }
  }
}
