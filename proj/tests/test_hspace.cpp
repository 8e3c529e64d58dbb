#include "spherelab/hspace.hpp"

#include "spherelab/acs.hpp"
#include "spherelab/algebra.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace spherelab;

TEST_CASE("e is a two-sided identity for both multiplications", "[hspace]") {
  for (int lv = 2; lv <= 3; ++lv) {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(lv));
    const int len = J.sphere().vec_len();
    const Vec e = axis_vector(len, 0);
    const HMultiplication mhat = ambient_multiplication(J);
    const HMultiplication m = sphere_multiplication(J);
    SplitMix64 rng(kDefaultSeed);
    const Sphere fs = Sphere::unit(len);
    for (int rep = 0; rep < 100; ++rep) {
      const Vec y = sample_point(rng, fs).vec();
      REQUIRE((multiply_h(mhat, e, y) - y).cwiseAbs().maxCoeff() <= 1e-12);
      REQUIRE((multiply_h(mhat, y, e) - y).cwiseAbs().maxCoeff() <= 1e-12);
      REQUIRE((multiply_h(m, e, y) - y).cwiseAbs().maxCoeff() <= 1e-12);
      REQUIRE((multiply_h(m, y, e) - y).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("norm product rule for hermitian structures", "[hspace]") {
  for (int lv = 2; lv <= 3; ++lv) {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(lv));
    const HMultiplication mhat = ambient_multiplication(J);
    SplitMix64 rng(kDefaultSeed);
    const int len = J.sphere().vec_len();
    for (int rep = 0; rep < 1000; ++rep) {
      const Vec x = rng.gaussian_vec(len);
      const Vec y = rng.gaussian_vec(len);
      REQUIRE(std::abs(multiply_h(mhat, x, y).norm() - x.norm() * y.norm()) <= 1e-10);
    }
  }
}

TEST_CASE("octonionic ambient multiplication is the reversed product", "[hspace][oracle]") {
  const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
  const HMultiplication mhat = ambient_multiplication(J);
  SplitMix64 rng(kDefaultSeed);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec x = rng.gaussian_vec(8);
    const Vec y = rng.gaussian_vec(8);
    REQUIRE((multiply_h(mhat, x, y) - multiply_vec(y, x)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("sphere multiplication is the normalised ambient one", "[hspace]") {
  const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
  const HMultiplication mhat = ambient_multiplication(J);
  const HMultiplication m = sphere_multiplication(J);
  SplitMix64 rng(kDefaultSeed);
  const Sphere fs = Sphere::unit(8);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec x = sample_point(rng, fs).vec();
    const Vec y = sample_point(rng, fs).vec();
    const Vec hat = multiply_h(mhat, x, y);
    const Vec sph = multiply_h(m, x, y);
    REQUIRE(std::abs(sph.norm() - 1.0) <= 1e-12);
    REQUIRE((sph - hat / hat.norm()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("left translation is a scaled isometry for hermitian structures", "[hspace]") {
  const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
  SplitMix64 rng(kDefaultSeed);
  for (int rep = 0; rep < 100; ++rep) {
    const Vec x = rng.gaussian_vec(8);
    if (x.norm() < 1e-6) continue;
    const KirchhoffFrame f = sigma_tilde(J, x);
    REQUIRE(f.invertible);
    const Mat L = f.sigma / x.norm();
    REQUIRE((L.transpose() * L - Mat::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("ambient multiplication by zero degenerates only under normalisation", "[hspace]") {
  const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
  const Vec zero = Vec::Zero(8);
  const Vec y = axis_vector(8, 1);
  REQUIRE(multiply_h(ambient_multiplication(J), zero, y).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE_THROWS_AS(multiply_h(sphere_multiplication(J), zero, y), DegeneracyError);
}

TEST_CASE("associativity defect statistics", "[hspace]") {
  SECTION("quaternion level is associative") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(2));
    const DefectReport r = associativity_defect(ambient_multiplication(J), 1000, kDefaultSeed);
    REQUIRE(r.max <= 1e-9);
  }

  SECTION("octonion level has order-one defects") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
    const DefectReport r = associativity_defect(ambient_multiplication(J), 2000, kDefaultSeed);
    REQUIRE(r.max >= 0.5);
    REQUIRE(r.mean > 0.0);
    int total = 0;
    for (int c : r.hist) total += c;
    REQUIRE(total == r.n);
  }

  SECTION("samples with x = e have zero defect") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
    const HMultiplication mhat = ambient_multiplication(J);
    const Vec e = axis_vector(8, 0);
    SplitMix64 rng(kDefaultSeed);
    const Sphere fs = Sphere::unit(8);
    for (int rep = 0; rep < 50; ++rep) {
      const Vec y = sample_point(rng, fs).vec();
      const Vec z = sample_point(rng, fs).vec();
      const Vec lhs = multiply_h(mhat, multiply_h(mhat, e, y), z);
      const Vec rhs = multiply_h(mhat, e, multiply_h(mhat, y, z));
      REQUIRE((lhs - rhs).norm() == 0.0);
    }
  }

  SECTION("sample count validation") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(2));
    REQUIRE_THROWS_AS(associativity_defect(ambient_multiplication(J), 0, kDefaultSeed),
                      UsageError);
  }
}

TEST_CASE("moufang defect statistics", "[hspace]") {
  SECTION("octonion level satisfies the law exactly") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
    const DefectReport r = moufang_defect(ambient_multiplication(J), 2000, kDefaultSeed);
    REQUIRE(r.max <= 1e-9);
  }
  SECTION("quaternion level satisfies the law exactly") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(2));
    const DefectReport r = moufang_defect(ambient_multiplication(J), 1000, kDefaultSeed);
    REQUIRE(r.max <= 1e-9);
  }
}

TEST_CASE("defect reports are bitwise reproducible", "[hspace]") {
  const AcsField J = AcsField::right_multiplication(AlgebraLevel(3));
  const DefectReport a = associativity_defect(ambient_multiplication(J), 3000, 123);
  const DefectReport b = associativity_defect(ambient_multiplication(J), 3000, 123);
  REQUIRE(a.max == b.max);
  REQUIRE(a.mean == b.mean);
  REQUIRE(a.hist == b.hist);
  const DefectReport c = associativity_defect(ambient_multiplication(J), 3000, 124);
  REQUIRE(a.max != c.max);
}
