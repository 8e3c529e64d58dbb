#pragma once

#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/rng.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace spherelab {

/// Field y -> J_y of tangent-space endomorphisms with J_y^2 = -Id. The rule
/// receives a unit point of the base sphere and a tangent vector there and
/// must be effect-free; fields are shareable across threads.
class AcsField {
 public:
  using Rule = std::function<Vec(const Vec& y, const Vec& v)>;

  AcsField(Sphere sphere, Rule rule, std::string name)
      : sphere_(sphere), rule_(std::move(rule)), name_(std::move(name)) {}

  /// J_y(v) = v.y, right multiplication in the level-2 or level-3 algebra
  /// restricted to T_y S^n (level 2 acts on S^2, level 3 on S^6).
  static AcsField right_multiplication(AlgebraLevel level) {
    const char* name = level.value() == 3   ? "octonion"
                       : level.value() == 2 ? "quaternion"
                                            : "complex";
    return AcsField(Sphere::base(level),
                    [](const Vec& y, const Vec& v) { return multiply_vec(v, y); }, name);
  }

  /// Conjugate of `base` by an ambient rotation g fixing the identity axis:
  /// J^g_y = g J_{g^T y} g^T. Supplies a family of structures for scans.
  static AcsField rotated(const AcsField& base, const Mat& g) {
    const int len = base.sphere().vec_len();
    if (g.rows() != len || g.cols() != len) throw UsageError("rotation dimension mismatch");
    if ((g * g.transpose() - Mat::Identity(len, len)).cwiseAbs().maxCoeff() > 1e-10)
      throw UsageError("rotation matrix is not orthogonal");
    if ((g.col(0) - axis_vector(len, 0)).cwiseAbs().maxCoeff() > 1e-12 ||
        (g.row(0).transpose() - axis_vector(len, 0)).cwiseAbs().maxCoeff() > 1e-12)
      throw UsageError("rotation must fix the identity axis");
    const Mat gt = g.transpose();
    AcsField b = base;
    return AcsField(
        base.sphere(),
        [b, g, gt](const Vec& y, const Vec& v) { return Vec(g * b.apply_raw(gt * y, gt * v)); },
        base.name() + "-rotated");
  }

  /// Pullback along the sphere diffeomorphism y -> Ay/|Ay| for an invertible
  /// plane-preserving A. Still squares to -Id but is generally not hermitian.
  static AcsField linear_pullback(const AcsField& base, const Mat& A) {
    const int len = base.sphere().vec_len();
    if (A.rows() != len || A.cols() != len) throw UsageError("pullback dimension mismatch");
    if (base.sphere().imaginary()) {
      if ((A.col(0) - axis_vector(len, 0)).cwiseAbs().maxCoeff() > 1e-12 ||
          (A.row(0).transpose() - axis_vector(len, 0)).cwiseAbs().maxCoeff() > 1e-12)
        throw UsageError("pullback map must preserve the imaginary hyperplane");
    }
    Eigen::FullPivLU<Mat> lu(A);
    if (!lu.isInvertible()) throw UsageError("pullback map must be invertible");
    const Mat Ainv = lu.inverse();
    AcsField b = base;
    const Sphere sph = base.sphere();
    return AcsField(
        sph,
        [b, A, Ainv, sph](const Vec& y, const Vec& v) {
          const Vec Ay = A * y;
          const double na = Ay.norm();
          const SpherePoint z(sph, Ay);
          const Vec dphi = project_tangent(z, A * v).v / na;
          const Vec w = b.apply_raw(z.vec(), dphi);
          const Vec Ainv_z = Ainv * z.vec();
          const SpherePoint yy(sph, Ainv_z);
          return Vec(project_tangent(yy, Ainv * w).v / Ainv_z.norm());
        },
        base.name() + "-pullback");
  }

  const Sphere& sphere() const { return sphere_; }
  const std::string& name() const { return name_; }

  /// Unchecked evaluation; callers guarantee y is unit and v tangent at y.
  Vec apply_raw(const Vec& y, const Vec& v) const { return rule_(y, v); }

 private:
  Sphere sphere_;
  Rule rule_;
  std::string name_;
};

inline TangentVector acs_apply(const AcsField& J, const TangentVector& t) {
  if (!(t.base.sphere() == J.sphere()))
    throw UsageError("tangent vector belongs to a different sphere");
  require_tangent(t);
  return {t.base, J.apply_raw(t.base.vec(), t.v)};
}

/// Sampled check that J maps tangent to tangent and squares to -Id.
inline void validate_acs(const AcsField& J, int samples, std::uint64_t seed,
                         double tol = 1e-8) {
  SplitMix64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const SpherePoint y = sample_point(rng, J.sphere());
    const TangentVector t = sample_unit_tangent(rng, y);
    const Vec jv = J.apply_raw(y.vec(), t.v);
    if (std::abs(jv.dot(y.vec())) > tol)
      throw ValidationError("field does not map tangent vectors to tangent vectors");
    const Vec jjv = J.apply_raw(y.vec(), jv);
    if ((jjv + t.v).cwiseAbs().maxCoeff() > tol)
      throw ValidationError("field does not square to minus the identity");
  }
}

inline double hermitian_residual(const AcsField& J, int samples, std::uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const SpherePoint y = sample_point(rng, J.sphere());
    const Vec b = sample_unit_tangent(rng, y).v;
    const Vec c = sample_unit_tangent(rng, y).v;
    const Vec jb = J.apply_raw(y.vec(), b);
    const Vec jc = J.apply_raw(y.vec(), c);
    worst = std::max(worst, std::abs(jb.dot(jc) - b.dot(c)));
  }
  return worst;
}

inline bool is_hermitian(const AcsField& J, int samples = 64,
                         std::uint64_t seed = kDefaultSeed, double tol = 1e-8) {
  return hermitian_residual(J, samples, seed) <= tol;
}

// ---------------------------------------------------------------------------
// Nijenhuis tensor through ambient differentials. The arguments b, c are
// extended to fields p -> P_p(b) (constant ambient extension projected to the
// tangent space), J is applied pointwise, and every differential is a central
// difference of the radial extension:
//
//   N = d(JY)(JX) - d(JX)(JY) - dY(X) + dX(Y)
//       - J( d(JY)(X) - dX(JY) ) - J( dY(JX) - d(JX)(Y) ).

inline TangentVector nijenhuis_fd(const AcsField& J, const SpherePoint& a, const Vec& b,
                                  const Vec& c, double h) {
  if (h <= 0.0) throw UsageError("finite-difference step must be positive");
  if (!(a.sphere() == J.sphere())) throw UsageError("point belongs to a different sphere");
  require_tangent({a, b});
  require_tangent({a, c});

  const Sphere s = J.sphere();
  const VectorFieldMap X = [s, b](const Vec& p) {
    Vec t = s.to_plane(b);
    t -= t.dot(p) * p;
    return t;
  };
  const VectorFieldMap Y = [s, c](const Vec& p) {
    Vec t = s.to_plane(c);
    t -= t.dot(p) * p;
    return t;
  };
  const VectorFieldMap JX = [&J, X](const Vec& p) { return J.apply_raw(p, X(p)); };
  const VectorFieldMap JY = [&J, Y](const Vec& p) { return J.apply_raw(p, Y(p)); };

  const Vec xa = X(a.vec());
  const Vec ya = Y(a.vec());
  const Vec jxa = JX(a.vec());
  const Vec jya = JY(a.vec());

  const auto D = [&](const VectorFieldMap& F, const Vec& w) {
    return directional_derivative(F, a, w, h);
  };

  Vec n = D(JY, jxa) - D(JX, jya) - D(Y, xa) + D(X, ya);
  const Vec g1 = project_tangent(a, D(JY, xa) - D(X, jya)).v;
  const Vec g2 = project_tangent(a, D(Y, jxa) - D(JX, ya)).v;
  n -= J.apply_raw(a.vec(), g1);
  n -= J.apply_raw(a.vec(), g2);
  return project_tangent(a, n);
}

// ---------------------------------------------------------------------------
// Chart-coordinate tensors. J^i_j(u) are the components of J on the chart's
// coordinate basis; derivative arrays come from central differences in u.

inline Mat acs_chart_matrix(const AcsField& J, const Chart& chart, const Vec& u) {
  if (!(chart.sphere() == J.sphere())) throw UsageError("chart belongs to a different sphere");
  const SpherePoint x = chart.inverse(u);
  const Mat D = chart.inverse_jacobian(u);
  Mat JD(D.rows(), D.cols());
  for (int j = 0; j < D.cols(); ++j) JD.col(j) = J.apply_raw(x.vec(), D.col(j));
  return D.colPivHouseholderQr().solve(JD);
}

struct ChartJetJ {
  Mat Jm;               // J^i_j at u
  std::vector<Mat> dJ;  // dJ[l](i,k) = d J^i_k / d u^l
};

inline ChartJetJ acs_chart_jet(const AcsField& J, const Chart& chart, const Vec& u, double h) {
  ChartJetJ jet;
  jet.Jm = acs_chart_matrix(J, chart, u);
  jet.dJ.reserve(chart.dim());
  const auto Jm_at = [&](const Vec& uu) { return acs_chart_matrix(J, chart, uu); };
  for (int l = 0; l < chart.dim(); ++l) jet.dJ.push_back(central_difference(Jm_at, u, l, h));
  return jet;
}

/// All components N^i_jk at u.
inline Tensor3 nijenhuis_chart_tensor(const AcsField& J, const Chart& chart, const Vec& u,
                                      double h) {
  const ChartJetJ jet = acs_chart_jet(J, chart, u, h);
  const int n = chart.dim();
  Tensor3 N(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += jet.Jm(l, j) * (jet.dJ[l](i, k) - jet.dJ[k](i, l)) -
                 jet.Jm(l, k) * (jet.dJ[l](i, j) - jet.dJ[j](i, l));
        N(i, j, k) = acc;
      }
  return N;
}

/// Component vector N^._jk for one index pair.
inline Vec nijenhuis_chart(const AcsField& J, const Chart& chart, const Vec& u, int j, int k,
                           double h) {
  const int n = chart.dim();
  if (j < 0 || j >= n || k < 0 || k >= n) throw UsageError("component index out of range");
  const ChartJetJ jet = acs_chart_jet(J, chart, u, h);
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int l = 0; l < n; ++l)
      acc += jet.Jm(l, j) * (jet.dJ[l](i, k) - jet.dJ[k](i, l)) -
             jet.Jm(l, k) * (jet.dJ[l](i, j) - jet.dJ[j](i, l));
    out[i] = acc;
  }
  return out;
}

/// tau^i_jk = sum_{p,q} (delta^p_j delta^q_k - J^p_j J^q_k)
///            (dJ^i_q/du^p - dJ^i_p/du^q).
/// Writing C_i(p,q) for the inner antisymmetrised derivative array this is
/// C_i - J^T C_i J, the same sandwich as the function-level defect below.
inline Tensor3 tau_chart(const AcsField& J, const Chart& chart, const Vec& u, double h) {
  const ChartJetJ jet = acs_chart_jet(J, chart, u, h);
  const int n = chart.dim();
  Tensor3 tau(n);
  Mat Ci(n, n);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) Ci(p, q) = jet.dJ[p](i, q) - jet.dJ[q](i, p);
    const Mat sandwiched = Ci - jet.Jm.transpose() * Ci * jet.Jm;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) tau(i, j, k) = sandwiched(j, k);
  }
  return tau;
}

/// Components of (dJdJ - JdJd)f at u, as the antisymmetric matrix w - J^T w J
/// with w = d(J df). The outer difference uses a 10x wider step than the inner
/// gradient so its noise is not amplified.
inline Mat calabi_defect(const AcsField& J, const ScalarFieldMap& f, const Chart& chart,
                         const Vec& u, double h) {
  if (h <= 0.0) throw UsageError("finite-difference step must be positive");
  const int n = chart.dim();
  const auto eta = [&](const Vec& uu) {
    const Mat Jm = acs_chart_matrix(J, chart, uu);
    Vec g(n);
    for (int l = 0; l < n; ++l) g[l] = fd_partial(f, uu, l, h);
    return Vec(Jm.transpose() * g);
  };
  const double hs = 10.0 * h;
  std::vector<Vec> de;
  de.reserve(n);
  for (int i = 0; i < n; ++i) de.push_back(central_difference(eta, u, i, hs));
  Mat w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = de[i][j] - de[j][i];
  const Mat Jm = acs_chart_matrix(J, chart, u);
  return w - Jm.transpose() * w * Jm;
}

/// Seeded random rotation of the ambient space fixing the identity axis.
inline Mat random_rotation_fixing_identity(int vec_len, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int m = vec_len - 1;
  Mat a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = rng.gaussian();
  const Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  Mat g = Mat::Identity(vec_len, vec_len);
  g.block(1, 1, m, m) = q;
  return g;
}

}  // namespace spherelab
