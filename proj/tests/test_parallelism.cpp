#include "spherelab/parallelism.hpp"

#include "spherelab/acs.hpp"
#include "spherelab/algebra.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/kirchhoff.hpp"
#include "spherelab/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace spherelab;

TEST_CASE("quaternionic classical frame has constant structure functions",
          "[parallelism][oracle]") {
  const AlgebraLevel quat(2);
  const auto frame = classical_frame(quat);
  const Sphere fs = Sphere::frame_sphere(quat);
  const StructureConstants table = StructureConstants::frozen(quat);
  SplitMix64 rng(kDefaultSeed);
  for (int rep = 0; rep < 20; ++rep) {
    const SpherePoint p = sample_point(rng, fs);
    const StructureSample s = structure_functions_fd(frame, p, kDefaultStep);
    REQUIRE(s.residual <= 1e-6);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          // T^i_jk = -2 a_{(j+1)(k+1)(i+1)}, same value at every point
          const double want = -2.0 * table.a(j + 1, k + 1, i + 1);
          REQUIRE(std::abs(s.T(i, j, k) - want) <= 1e-6);
          REQUIRE(s.T(i, j, k) + s.T(i, k, j) == 0.0);  // antisymmetry by construction
        }
  }
}

TEST_CASE("octonionic structure functions at the poles are the structure constants",
          "[parallelism][oracle]") {
  const AlgebraLevel oct(3);
  const auto frame = classical_frame(oct);
  const Sphere fs = Sphere::frame_sphere(oct);
  const StructureConstants table = StructureConstants::frozen(oct);
  for (double sign : {1.0, -1.0}) {
    const SpherePoint pole(fs, Vec(sign * axis_vector(8, 0)));
    const StructureSample s = structure_functions_fd(frame, pole, kDefaultStep);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j)
        for (int k = 0; k < 7; ++k)
          REQUIRE(std::abs(s.T(i, j, k) + 2.0 * table.a(j + 1, k + 1, i + 1)) <= 1e-6);
  }
}

TEST_CASE("chart route agrees with the bracket route", "[parallelism]") {
  SplitMix64 rng(kDefaultSeed);
  for (int lv = 2; lv <= 3; ++lv) {
    const AlgebraLevel level(lv);
    const auto frame = classical_frame(level);
    const Sphere fs = Sphere::frame_sphere(level);
    const Chart chart(SpherePoint(fs, axis_vector(level.dim(), 0)));
    const int m = level.dim() - 1;
    for (int rep = 0; rep < 10; ++rep) {
      Vec u(m);
      for (int i = 0; i < m; ++i) u[i] = rng.uniform(-1.0, 1.0);
      const StructureSample via_chart = structure_functions_chart(frame, chart, u, kDefaultStep);
      const StructureSample via_fd =
          structure_functions_fd(frame, chart.inverse(u), kDefaultStep);
      REQUIRE(via_chart.T.max_abs_diff(via_fd.T) <= 1e-4);
    }
  }
}

TEST_CASE("coordinate frames commute", "[parallelism]") {
  const AlgebraLevel quat(2);
  const Sphere fs = Sphere::frame_sphere(quat);
  const Chart chart(SpherePoint(fs, axis_vector(4, 0)));
  // chart-coordinate basis fields, a legitimate (local, test-only) frame
  std::vector<VectorFieldMap> frame;
  for (int j = 0; j < 3; ++j)
    frame.push_back([&chart, j](const Vec& p) {
      return Vec(
          chart.inverse_jacobian(chart.forward(SpherePoint(chart.sphere(), p))).col(j));
    });
  SplitMix64 rng(kDefaultSeed);
  for (int rep = 0; rep < 10; ++rep) {
    Vec u(3);
    for (int i = 0; i < 3; ++i) u[i] = rng.uniform(-0.8, 0.8);
    const StructureSample s = structure_functions_chart(frame, chart, u, kDefaultStep);
    REQUIRE(s.T.max_abs() <= 1e-6);
  }
}

TEST_CASE("closed-form brackets", "[parallelism][oracle]") {
  SECTION("quaternion level: the associator term is absent") {
    const AlgebraLevel quat(2);
    const Sphere fs = Sphere::frame_sphere(quat);
    const StructureConstants table = StructureConstants::frozen(quat);
    SplitMix64 rng(kDefaultSeed);
    for (int rep = 0; rep < 50; ++rep) {
      const SpherePoint x = sample_point(rng, fs);
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j <= 3; ++j) {
          const Vec got = classical_bracket_closed_form(quat, i, j, x).v;
          Vec want = Vec::Zero(4);
          for (int k = 1; k <= 3; ++k)
            want += 2.0 * table.a(i, j, k) *
                    multiply_vec(axis_vector(4, k), x.vec());
          REQUIRE((got - want).cwiseAbs().maxCoeff() <= 1e-14);
        }
    }
  }

  SECTION("octonion level at the identity pole") {
    const AlgebraLevel oct(3);
    const Sphere fs = Sphere::frame_sphere(oct);
    const SpherePoint pole(fs, axis_vector(8, 0));
    const StructureConstants table = StructureConstants::frozen(oct);
    for (int i = 1; i <= 7; ++i)
      for (int j = 1; j <= 7; ++j) {
        const Vec got = classical_bracket_closed_form(oct, i, j, pole).v;
        Vec want = Vec::Zero(8);
        for (int k = 1; k <= 7; ++k) want[k] = 2.0 * table.a(i, j, k);
        REQUIRE((got - want).cwiseAbs().maxCoeff() == 0.0);
      }
  }

  SECTION("matches the finite-difference bracket at random points") {
    const AlgebraLevel oct(3);
    const auto frame = classical_frame(oct);
    const Sphere fs = Sphere::frame_sphere(oct);
    SplitMix64 rng(kDefaultSeed);
    for (int rep = 0; rep < 100; ++rep) {
      const SpherePoint x = sample_point(rng, fs);
      const int i = 1 + static_cast<int>(rng.next_u64() % 7);
      int j = 1 + static_cast<int>(rng.next_u64() % 7);
      if (j == i) j = (j % 7) + 1;
      const Vec closed = classical_bracket_closed_form(oct, i, j, x).v;
      const Vec fd = lie_bracket_fd(frame[i - 1], frame[j - 1], x, kDefaultStep).v;
      REQUIRE((closed - fd).norm() <= 1e-5);
    }
  }
}

TEST_CASE("covariant derivative of the frame connection", "[parallelism]") {
  const AlgebraLevel quat(2);
  const auto frame = classical_frame(quat);
  const Sphere fs = Sphere::frame_sphere(quat);
  SplitMix64 rng(kDefaultSeed);
  const VectorFieldMap Z = frame[0];

  SECTION("frame fields are parallel") {
    // W = X_2: constant coefficients (0, 1, 0)
    const std::vector<ScalarFieldMap> coeffs = {
        [](const Vec&) { return 0.0; },
        [](const Vec&) { return 1.0; },
        [](const Vec&) { return 0.0; },
    };
    for (int rep = 0; rep < 20; ++rep) {
      const SpherePoint p = sample_point(rng, fs);
      REQUIRE(covariant_derivative(frame, Z, coeffs, p, kDefaultStep).v.norm() <= 1e-10);
    }
  }

  SECTION("single-term leibniz rule") {
    // W = f X_1 with f linear in the ambient coordinates
    Vec c(4);
    c << 0.3, -0.7, 0.2, 0.5;
    const std::vector<ScalarFieldMap> coeffs = {
        [c](const Vec& p) { return c.dot(p); },
        [](const Vec&) { return 0.0; },
        [](const Vec&) { return 0.0; },
    };
    for (int rep = 0; rep < 20; ++rep) {
      const SpherePoint p = sample_point(rng, fs);
      const Vec got = covariant_derivative(frame, Z, coeffs, p, kDefaultStep).v;
      // Z(f)(p) for the radially extended linear f: c . P_p(Z(p))
      const Vec zp = Z(p.vec());
      const double zf = c.dot(zp - zp.dot(p.vec()) * p.vec());
      REQUIRE((got - zf * frame[0](p.vec())).cwiseAbs().maxCoeff() <= 1e-6);
    }
  }

  SECTION("curvature of the connection vanishes") {
    const VectorFieldMap X = frame[0];
    const VectorFieldMap Y = frame[1];
    Vec c(4);
    c << 0.2, 0.4, -0.3, 0.1;
    const std::vector<ScalarFieldMap> coeffs = {
        [c](const Vec& p) { return c.dot(p); },
        [c](const Vec& p) { return p.dot(p) * 0.0 + c[1] * p[2]; },
        [](const Vec&) { return 0.0; },
    };
    const double h = 1e-4;
    // coefficients of nabla_Y W, themselves scalar fields
    std::vector<ScalarFieldMap> y_coeffs, x_coeffs;
    for (int i = 0; i < 3; ++i) {
      y_coeffs.push_back([&, i](const Vec& p) {
        const SpherePoint sp(fs, p);
        return scalar_directional_derivative(coeffs[i], sp, Y(p), h);
      });
      x_coeffs.push_back([&, i](const Vec& p) {
        const SpherePoint sp(fs, p);
        return scalar_directional_derivative(coeffs[i], sp, X(p), h);
      });
    }
    for (int rep = 0; rep < 10; ++rep) {
      const SpherePoint p = sample_point(rng, fs);
      const Vec xy = covariant_derivative(frame, X, y_coeffs, p, h).v;
      const Vec yx = covariant_derivative(frame, Y, x_coeffs, p, h).v;
      const VectorFieldMap bracket_xy = [&](const Vec& q) {
        return lie_bracket_fd(X, Y, SpherePoint(fs, q), h).v;
      };
      const Vec along_bracket = covariant_derivative(frame, bracket_xy, coeffs, p, h).v;
      // lie_bracket_fd carries the matrix-commutator sign, so the flat-curvature
      // identity picks up the bracket term with a plus
      REQUIRE((xy - yx + along_bracket).norm() <= 1e-3);
    }
  }
}

TEST_CASE("constancy scans", "[parallelism]") {
  SECTION("single sample has zero deviation") {
    const AlgebraLevel quat(2);
    const auto frame = classical_frame(quat);
    const ConstancyReport r = constancy_scan(frame, Sphere::frame_sphere(quat), 1,
                                             kDefaultSeed, kDefaultStep, kDefaultPoleCap);
    REQUIRE(r.max_deviation == 0.0);
  }

  SECTION("quaternionic frame from the construction is flat") {
    const AcsField J = AcsField::right_multiplication(AlgebraLevel(2));
    const auto frame = kirchhoff_frame(J);
    const ConstancyReport r = constancy_scan(frame, Sphere::frame_sphere(AlgebraLevel(2)),
                                             100, kDefaultSeed, kDefaultStep, kDefaultPoleCap);
    REQUIRE(r.max_deviation <= 1e-4);
  }

  SECTION("octonionic classical frame is far from constant") {
    const AlgebraLevel oct(3);
    const auto frame = classical_frame(oct);
    const ConstancyReport r = constancy_scan(frame, Sphere::frame_sphere(oct), 100,
                                             kDefaultSeed, kDefaultStep, kDefaultPoleCap);
    REQUIRE(r.max_deviation >= 0.1);
  }

  SECTION("reports are deterministic for a fixed seed") {
    const AlgebraLevel oct(3);
    const auto frame = classical_frame(oct);
    const ConstancyReport a = constancy_scan(frame, Sphere::frame_sphere(oct), 20,
                                             kDefaultSeed, kDefaultStep, kDefaultPoleCap);
    const ConstancyReport b = constancy_scan(frame, Sphere::frame_sphere(oct), 20,
                                             kDefaultSeed, kDefaultStep, kDefaultPoleCap);
    REQUIRE(a.max_deviation == b.max_deviation);
    REQUIRE(a.mean.max_abs_diff(b.mean) == 0.0);
    REQUIRE(a.max_dev.max_abs_diff(b.max_dev) == 0.0);
  }
}

TEST_CASE("quaternionic construction frame matches the classical one", "[parallelism]") {
  // Both frames are constant; the change-of-frame matrix between them at any
  // point conjugates one set of structure functions into the other. For the
  // quaternionic construction the two frames in fact coincide.
  const AlgebraLevel quat(2);
  const AcsField J = AcsField::right_multiplication(quat);
  const auto constructed = kirchhoff_frame(J);
  const auto classical = classical_frame(quat);
  const Sphere fs = Sphere::frame_sphere(quat);
  SplitMix64 rng(kDefaultSeed);

  // the constant change-of-frame matrix, estimated at one point
  const SpherePoint p0 = sample_point(rng, fs);
  Mat F_cls(4, 3), F_con(4, 3);
  for (int i = 0; i < 3; ++i) {
    F_cls.col(i) = classical[i](p0.vec());
    F_con.col(i) = constructed[i](p0.vec());
  }
  const Mat change = (F_cls.transpose() * F_cls).ldlt().solve(F_cls.transpose() * F_con);
  REQUIRE((change - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);

  for (int rep = 0; rep < 25; ++rep) {
    const SpherePoint p = sample_point(rng, fs);
    const StructureSample a = structure_functions_fd(constructed, p, kDefaultStep);
    const StructureSample b = structure_functions_fd(classical, p, kDefaultStep);
    REQUIRE(a.T.max_abs_diff(b.T) <= 1e-6);
  }
}

TEST_CASE("torsion of construction frames on the 7-sphere never vanishes", "[parallelism]") {
  const AlgebraLevel oct(3);
  const Sphere fs = Sphere::frame_sphere(oct);
  const AcsField J = AcsField::right_multiplication(oct);
  const AcsField rot = AcsField::rotated(J, random_rotation_fixing_identity(8, 7));
  for (const AcsField* field : {&J, &rot}) {
    const auto frame = kirchhoff_frame(*field);
    SplitMix64 rng(kDefaultSeed);
    double min_norm = 1e300;
    for (int rep = 0; rep < 50; ++rep) {
      const SpherePoint p = sample_point_outside_caps(rng, fs, kDefaultPoleCap);
      min_norm = std::min(min_norm,
                          structure_functions_fd(frame, p, kDefaultStep).T.frobenius_norm());
    }
    REQUIRE(min_norm > 0.5);
  }
}

TEST_CASE("degenerate frames are rejected", "[parallelism]") {
  const AlgebraLevel quat(2);
  const auto frame = classical_frame(quat);
  // duplicate first field: Gram determinant collapses
  std::vector<VectorFieldMap> degenerate = {frame[0], frame[0], frame[1]};
  const Sphere fs = Sphere::frame_sphere(quat);
  SplitMix64 rng(kDefaultSeed);
  const SpherePoint p = sample_point(rng, fs);
  REQUIRE_THROWS_AS(structure_functions_fd(degenerate, p, kDefaultStep), DegeneracyError);
}
