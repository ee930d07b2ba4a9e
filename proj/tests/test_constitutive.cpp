#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cfem/constitutive.hpp"

#include <cmath>
#include <random>

using namespace cfem;

namespace {

SymTensor2 random_tensor(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SymTensor2 t{n(rng), n(rng), n(rng)};
  const double s = scale * std::pow(u(rng), 3) / std::max(t.norm(), 1e-300);
  return t * s;
}

}  // namespace

TEST_CASE("phi") {
  const StrainLimitParams p11{1.0, 1.0};
  CHECK(phi(0.0, p11) == 1.0);
  CHECK(phi(0.0, {2.0, 3.0}) == 1.0);
  CHECK(phi(0.5, p11) == doctest::Approx(2.0).epsilon(1e-15));
  // arbitrary-precision reference 1/sqrt(3/4)
  CHECK(std::abs(phi(0.5, {2.0, 1.0}) - 1.1547005383792515290) <= 1e-15);
  CHECK_THROWS_AS(phi(1.0, p11), StrainLimitError);
  CHECK_THROWS_AS(phi(0.6, {1.0, 2.0}), StrainLimitError);
  try {
    phi(2.0, p11);
  } catch (const StrainLimitError& e) {
    CHECK(e.scaled_strain() == 2.0);
  }
  CHECK(phi(5.0, {1.0, 0.0}) == 1.0);
  double prev = 1.0;
  for (int k = 1; k < 1000; ++k) {
    const double v = phi(k / 1000.0, p11);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(phi(1.0 - 1e-12, p11) > 1e11);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(StrainLimitParams({0.0, 1.0}).validate(), ConfigError);
  CHECK_THROWS_AS(StrainLimitParams({1.0, -1.0}).validate(), ConfigError);
  CHECK_NOTHROW(StrainLimitParams({1.0, 0.0}).validate());
}

TEST_CASE("strain from stress") {
  const StrainLimitParams p{1.0, 1.0};
  const auto z = strain_from_stress({0, 0, 0}, p);
  CHECK(z.norm() == 0.0);
  const SymTensor2 t{1.5, -0.7, 2.0};
  const auto id = strain_from_stress(t, {2.0, 0.0});
  CHECK((id - t).norm() == 0.0);
  const auto e = strain_from_stress({3, 0, 0}, p);
  CHECK(e.t11 == doctest::Approx(0.75));
  CHECK(e.t12 == 0.0);
  CHECK(e.t22 == 0.0);
}

TEST_CASE("stress from strain and round trips") {
  const StrainLimitParams p{1.0, 1.0};
  const SymTensor2 e{0.5 / std::sqrt(2.0), 0.0, 0.5 / std::sqrt(2.0)};
  REQUIRE(e.norm() == doctest::Approx(0.5));
  const auto t = stress_from_strain(e, p);
  CHECK((t - e * 2.0).norm() <= 1e-15);
  CHECK(t.norm() == doctest::Approx(1.0));
  CHECK((strain_from_stress(t, p) - e).norm() <= 1e-15);

  std::mt19937_64 rng(21);
  for (double alpha : {1.0, 2.0}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      const StrainLimitParams q{alpha, beta};
      for (int k = 0; k < 100; ++k) {
        const auto ek = random_tensor(rng, 0.9 / beta);
        CHECK((strain_from_stress(stress_from_strain(ek, q), q) - ek).norm() <= 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(stress_from_strain({1, 0, 1}, p), StrainLimitError);
}

TEST_CASE("bounded map properties") {
  std::mt19937_64 rng(33);
  for (double a : {1.0, 2.0}) {
    for (double beta : {0.5, 1.0, 2.0}) {
      const StrainLimitParams p{a, beta};
      for (int k = 0; k < 2000; ++k) {
        const auto t1 = random_tensor(rng, 1e6);
        const auto t2 = random_tensor(rng, 10.0);
        CHECK(strain_from_stress(t1, p).norm() <= 1.0 / beta + 1e-12);
        const auto df = strain_from_stress(t1, p) - strain_from_stress(t2, p);
        const auto dt = t1 - t2;
        const double inner = contract(df, dt);
        CHECK(inner >= -1e-12);
        if (dt.norm() > 0.0) CHECK(inner / (dt.norm() * dt.norm()) <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("stress from strain is isotropic") {
  const StrainLimitParams p{2.0, 1.0};
  const SymTensor2 e{0.2, 0.1, -0.3};
  for (double th : {0.3, 1.1, 2.5}) {
    const auto lhs = stress_from_strain(rotate(e, th), p);
    const auto rhs = rotate(stress_from_strain(e, p), th);
    CHECK((lhs - rhs).norm() <= 1e-15);
    CHECK(rotate(e, th).norm() == doctest::Approx(e.norm()).epsilon(1e-15));
  }
}

TEST_CASE("anti-plane strain") {
  const auto z = anti_plane_strain(Vec2(0, 0));
  CHECK(z.norm == 0.0);
  const auto a = anti_plane_strain(Vec2(1, 0));
  CHECK(a.e13 == 0.5);
  CHECK(a.e23 == 0.0);
  CHECK(a.norm == doctest::Approx(1.0 / std::sqrt(2.0)));
  // full 3x3 Frobenius norm: e13 and e31 both count
  CHECK(std::sqrt(2 * a.e13 * a.e13 + 2 * a.e23 * a.e23) == doctest::Approx(a.norm));
  CHECK(anti_plane_strain(Vec2(3, 4)).norm == doctest::Approx(5.0 / std::sqrt(2.0)));
}
