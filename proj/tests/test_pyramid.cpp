#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

#include "bb84/errors.hpp"
#include "bb84/pyramid.hpp"
#include "bb84/rng.hpp"

using namespace bb84;

namespace {

std::array<double, 3> residuals(const PyramidSolution& s, double k1, double k2, double k3) {
  return {2.0 * (s.a * s.b + s.c * s.d) - k1,
          2.0 * (s.a * s.d + s.b * s.c) - k2,
          2.0 * (s.a * s.c + s.b * s.d) - k3};
}

bool feasible_triple(double k1, double k2, double k3) {
  return 1.0 + k1 + k2 + k3 >= 0.0 && 1.0 + k1 - k2 - k3 >= 0.0 &&
         1.0 - k1 + k2 - k3 >= 0.0 && 1.0 - k1 - k2 + k3 >= 0.0;
}

}  // namespace

TEST_CASE("orthogonal states give a deterministic measurement") {
  const PyramidSolution s = pyramid_solve(0.0, 0.0, 0.0);
  CHECK(s.a == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(s.b) < 1e-14);
  CHECK(std::abs(s.c) < 1e-14);
  CHECK(std::abs(s.d) < 1e-14);
}

TEST_CASE("identical states give the uniform pyramid") {
  const PyramidSolution s = pyramid_solve(1.0, 1.0, 1.0);
  CHECK(s.a == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.b == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.c == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s.d == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("the square-base pyramid of the product attack at D = 1/4") {
  const PyramidSolution s = pyramid_solve(0.5, 0.25, 0.5);
  CHECK(s.a == doctest::Approx((2.0 + std::sqrt(3.0)) / 4.0).epsilon(1e-12));
  const auto r = residuals(s, 0.5, 0.25, 0.5);
  CHECK(std::abs(r[0]) < 1e-12);
  CHECK(std::abs(r[1]) < 1e-12);
  CHECK(std::abs(r[2]) < 1e-12);
  CHECK(s.a * s.a + s.b * s.b + s.c * s.c + s.d * s.d == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.a >= s.b);
  CHECK(s.a >= s.c);
  CHECK(s.a >= s.d);
}

TEST_CASE("geometric infeasibility is reported") {
  CHECK_THROWS_AS(pyramid_solve(1.0, -1.0, 1.0), InfeasibilityError);
  CHECK_THROWS_AS(pyramid_solve(-0.9, -0.9, -0.9), InfeasibilityError);
}

TEST_CASE("random feasible triples reconstruct and keep the apex on top") {
  Xoshiro256pp rng(29);
  int tested = 0;
  while (tested < 1000) {
    const double k1 = 2.0 * rng.next_double() - 1.0;
    const double k2 = 2.0 * rng.next_double() - 1.0;
    const double k3 = 2.0 * rng.next_double() - 1.0;
    if (!feasible_triple(k1, k2, k3)) continue;
    ++tested;
    const PyramidSolution s = pyramid_solve(k1, k2, k3);
    const auto r = residuals(s, k1, k2, k3);
    CHECK(std::abs(r[0]) <= 1e-12);
    CHECK(std::abs(r[1]) <= 1e-12);
    CHECK(std::abs(r[2]) <= 1e-12);
    CHECK(s.a >= std::max({s.b, s.c, s.d}));
    CHECK(s.a * s.a + s.b * s.b + s.c * s.c + s.d * s.d == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("xor coefficients cover the two-state case") {
  // Two states with overlap c: apex (sqrt(1+c) + sqrt(1-c))/2, success
  // probability apex^2 = (1 + sin)/2.
  Xoshiro256pp rng(31);
  for (int i = 0; i < 100; ++i) {
    const double c = 2.0 * rng.next_double() - 1.0;
    const double overlaps[2] = {1.0, c};
    const auto coeff = xor_set_coefficients(std::span<const double>(overlaps, 2));
    const double expect = (std::sqrt(1.0 + c) + std::sqrt(1.0 - c)) / 2.0;
    CHECK(coeff[0] == doctest::Approx(expect).epsilon(1e-12));
    const double sin_gamma = std::sqrt(1.0 - c * c);
    CHECK(coeff[0] * coeff[0] == doctest::Approx((1.0 + sin_gamma) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("walsh transform is an involution up to scale") {
  Xoshiro256pp rng(37);
  std::array<double, 8> v{};
  for (double& x : v) x = rng.next_normal();
  std::array<double, 8> w = v;
  walsh_hadamard(w);
  walsh_hadamard(w);
  for (int i = 0; i < 8; ++i) CHECK(w[i] == doctest::Approx(8.0 * v[i]).epsilon(1e-12));
}
