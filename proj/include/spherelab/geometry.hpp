#pragma once

#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/rng.hpp"

#include <functional>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace spherelab {

// Unit spheres are stored in the coordinates of the parent algebra. The frame
// sphere S^{n+1} uses every coordinate; the base sphere S^n lives in the
// imaginary hyperplane, with coordinate 0 (the identity axis, the
// distinguished vector e) pinned to zero. Here n = 2^level - 2.
class Sphere {
 public:
  static Sphere base(AlgebraLevel level) { return Sphere(level.dim(), true); }
  static Sphere frame_sphere(AlgebraLevel level) { return Sphere(level.dim(), false); }
  /// Plain unit sphere of R^vec_len, for frames not tied to an algebra.
  static Sphere unit(int vec_len) { return Sphere(vec_len, false); }

  int vec_len() const { return vec_len_; }
  bool imaginary() const { return imaginary_; }
  int first_axis() const { return imaginary_ ? 1 : 0; }
  int ambient_dim() const { return imaginary_ ? vec_len_ - 1 : vec_len_; }
  int dim() const { return ambient_dim() - 1; }

  /// Drop the pinned component, if any.
  Vec to_plane(Vec w) const {
    if (imaginary_) w[0] = 0.0;
    return w;
  }

  bool operator==(const Sphere&) const = default;

 private:
  Sphere(int vec_len, bool imaginary) : vec_len_(vec_len), imaginary_(imaginary) {
    if (vec_len < 2) throw UsageError("sphere needs at least two coordinates");
  }

  int vec_len_;
  bool imaginary_;
};

class SpherePoint {
 public:
  SpherePoint(const Sphere& sphere, Vec v) : sphere_(sphere), x_(std::move(v)) {
    if (x_.size() != sphere_.vec_len())
      throw UsageError("point length does not match the sphere's coordinates");
    if (sphere_.imaginary()) {
      if (std::abs(x_[0]) > 1e-8 * std::max(1.0, x_.norm()))
        throw UsageError("point of an imaginary-plane sphere has an identity-axis component");
      x_[0] = 0.0;
    }
    const double n = x_.norm();
    if (n < 1e-12) throw UsageError("cannot normalise a near-zero vector onto the sphere");
    x_ /= n;
  }

  const Sphere& sphere() const { return sphere_; }
  const Vec& vec() const { return x_; }
  double operator[](int i) const { return x_[i]; }

 private:
  Sphere sphere_;
  Vec x_;
};

struct TangentVector {
  SpherePoint base;
  Vec v;
};

inline TangentVector project_tangent(const SpherePoint& x, const Vec& w) {
  Vec p = x.sphere().to_plane(w);
  p -= p.dot(x.vec()) * x.vec();
  return {x, std::move(p)};
}

inline void require_tangent(const TangentVector& t, double tol = 1e-8) {
  if (std::abs(t.v.dot(t.base.vec())) > tol * std::max(1.0, t.v.norm()))
    throw UsageError("vector is not tangent at its base point");
  if (t.base.sphere().imaginary() &&
      std::abs(t.v[0]) > tol * std::max(1.0, t.v.norm()))
    throw UsageError("tangent vector leaves the imaginary hyperplane");
}

// ---------------------------------------------------------------------------
// Decomposition x = alpha e + beta y with beta >= 0 and y a unit vector
// orthogonal to e.

struct Decomposition {
  double alpha;
  double beta;
  Vec y;
};

// Below this the direction of the e-orthogonal part is numerically void; the
// canonical fallback axis keeps x = alpha e + beta y faithful to 1e-12.
inline constexpr double kDegenerateBeta = 1e-13;

/// Canonical axis least aligned with e, projected orthogonal and normalised.
inline Vec fallback_axis(const Vec& e) {
  int best = 0;
  for (int i = 1; i < e.size(); ++i)
    if (std::abs(e[i]) < std::abs(e[best])) best = i;
  Vec a = axis_vector(static_cast<int>(e.size()), best);
  a -= a.dot(e) * e;
  return a / a.norm();
}

inline Decomposition decompose(const Vec& x, const Vec& e) {
  if (x.size() != e.size()) throw UsageError("decompose: dimension mismatch");
  if (std::abs(e.norm() - 1.0) > 1e-9)
    throw UsageError("decompose: distinguished vector must be unit");
  const double alpha = x.dot(e);
  Vec r = x - alpha * e;
  const double beta = r.norm();
  if (beta <= kDegenerateBeta) return {alpha, beta, fallback_axis(e)};
  return {alpha, beta, r / beta};
}

// ---------------------------------------------------------------------------
// Vector fields as ambient-valued maps on unit vectors, differentiated through
// the radial extension F(q/|q|) so that central differences stay on-manifold.

using VectorFieldMap = std::function<Vec(const Vec&)>;
using ScalarFieldMap = std::function<double(const Vec&)>;

inline Vec radial_eval(const VectorFieldMap& F, const Vec& q) { return F(q / q.norm()); }

inline Vec directional_derivative(const VectorFieldMap& F, const SpherePoint& p,
                                  const Vec& w, double h) {
  if (h <= 0.0) throw UsageError("finite-difference step must be positive");
  if (w.norm() == 0.0) return Vec::Zero(p.sphere().vec_len());
  return (radial_eval(F, p.vec() + h * w) - radial_eval(F, p.vec() - h * w)) / (2.0 * h);
}

inline double scalar_directional_derivative(const ScalarFieldMap& f, const SpherePoint& p,
                                            const Vec& w, double h) {
  if (h <= 0.0) throw UsageError("finite-difference step must be positive");
  if (w.norm() == 0.0) return 0.0;
  const Vec q1 = p.vec() + h * w;
  const Vec q0 = p.vec() - h * w;
  return (f(q1 / q1.norm()) - f(q0 / q0.norm())) / (2.0 * h);
}

/// [X,Y](p), signed so that restrictions of linear ambient maps A, B bracket
/// to the matrix commutator (AB - BA) applied at p.
inline TangentVector lie_bracket_fd(const VectorFieldMap& X, const VectorFieldMap& Y,
                                    const SpherePoint& p, double h) {
  const Vec xp = X(p.vec());
  const Vec yp = Y(p.vec());
  const Vec dX_along_Y = directional_derivative(X, p, yp, h);
  const Vec dY_along_X = directional_derivative(Y, p, xp, h);
  return project_tangent(p, dX_along_Y - dY_along_X);
}

// ---------------------------------------------------------------------------
// Chart-coordinate finite differences.

template <typename F>
auto central_difference(const F& f, const Vec& u, int dir, double h) {
  if (h <= 0.0) throw UsageError("finite-difference step must be positive");
  if (dir < 0 || dir >= u.size()) throw UsageError("derivative direction out of range");
  Vec up = u, um = u;
  up[dir] += h;
  um[dir] -= h;
  using R = std::decay_t<decltype(f(u))>;
  const R a = f(up);
  const R b = f(um);
  return R((a - b) / (2.0 * h));
}

inline double fd_partial(const ScalarFieldMap& f, const Vec& u, int dir, double h) {
  return central_difference(f, u, dir, h);
}

// ---------------------------------------------------------------------------
// Stereographic charts. The chart with pole p covers the sphere minus p and
// sends the antipode -p to the origin of R^dim.

class Chart {
 public:
  explicit Chart(const SpherePoint& pole)
      : sphere_(pole.sphere()), pole_(pole.vec()), basis_(make_basis(sphere_, pole_)) {}

  const Sphere& sphere() const { return sphere_; }
  const Vec& pole() const { return pole_; }
  int dim() const { return sphere_.dim(); }

  bool in_domain(const SpherePoint& x, double margin = 1e-3) const {
    return 1.0 - x.vec().dot(pole_) > margin;
  }

  Vec forward(const SpherePoint& x) const {
    const double denom = 1.0 - x.vec().dot(pole_);
    if (denom < 1e-12) throw DegeneracyError("point too close to the chart pole");
    return basis_.transpose() * x.vec() / denom;
  }

  SpherePoint inverse(const Vec& u) const {
    if (u.size() != dim()) throw UsageError("chart coordinate length mismatch");
    const double s = 1.0 + u.squaredNorm();
    Vec x = (2.0 / s) * (basis_ * u) + (1.0 - 2.0 / s) * pole_;
    return SpherePoint(sphere_, std::move(x));
  }

  /// Columns are the coordinate basis fields d(inverse)/du_j, tangent at inverse(u).
  Mat inverse_jacobian(const Vec& u) const {
    if (u.size() != dim()) throw UsageError("chart coordinate length mismatch");
    const double s = 1.0 + u.squaredNorm();
    const Vec bu = basis_ * u;
    Mat jac(sphere_.vec_len(), dim());
    for (int j = 0; j < dim(); ++j)
      jac.col(j) =
          (2.0 / s) * basis_.col(j) - (4.0 * u[j] / (s * s)) * bu + (4.0 * u[j] / (s * s)) * pole_;
    return jac;
  }

 private:
  // Orthonormal basis of pole-perp within the sphere plane: canonical axes
  // with the one most aligned to the pole dropped, Gram-Schmidt in index order.
  static Mat make_basis(const Sphere& s, const Vec& pole) {
    int drop = s.first_axis();
    for (int i = s.first_axis(); i < s.vec_len(); ++i)
      if (std::abs(pole[i]) > std::abs(pole[drop])) drop = i;
    Mat basis(s.vec_len(), s.dim());
    int col = 0;
    for (int i = s.first_axis(); i < s.vec_len(); ++i) {
      if (i == drop) continue;
      Vec b = axis_vector(s.vec_len(), i);
      b -= b.dot(pole) * pole;
      for (int c = 0; c < col; ++c) b -= b.dot(basis.col(c)) * basis.col(c);
      const double n = b.norm();
      if (n < 1e-12) throw DegeneracyError("chart basis construction degenerated");
      basis.col(col++) = b / n;
    }
    return basis;
  }

  Sphere sphere_;
  Vec pole_;
  Mat basis_;
};

/// Chart components of a tangent field at u: solves D c = Z(x(u)) against the
/// coordinate basis columns D.
inline Vec chart_components(const VectorFieldMap& Z, const Chart& chart, const Vec& u) {
  const SpherePoint x = chart.inverse(u);
  const Mat D = chart.inverse_jacobian(u);
  const Vec z = project_tangent(x, Z(x.vec())).v;
  return D.colPivHouseholderQr().solve(z);
}

/// Component matrix of a frame: entry (j, l) is the l-th chart component of field j.
inline Mat frame_chart_components(std::span<const VectorFieldMap> frame, const Chart& chart,
                                  const Vec& u) {
  const SpherePoint x = chart.inverse(u);
  const Mat D = chart.inverse_jacobian(u);
  const auto qr = D.colPivHouseholderQr();
  Mat M(static_cast<int>(frame.size()), chart.dim());
  for (int j = 0; j < M.rows(); ++j)
    M.row(j) = qr.solve(project_tangent(x, frame[j](x.vec())).v).transpose();
  return M;
}

/// Dual coframe matrix theta with sum_s theta(i,s) M(j,s) = delta_ij.
inline Mat coframe_components(const Mat& M) {
  if (M.rows() != M.cols()) throw UsageError("coframe needs a square component matrix");
  Eigen::FullPivLU<Mat> lu(M.transpose());
  if (!lu.isInvertible()) throw DegeneracyError("frame component matrix is singular");
  return lu.inverse();
}

// ---------------------------------------------------------------------------
// Seeded samplers.

inline SpherePoint sample_point(SplitMix64& rng, const Sphere& s) {
  while (true) {
    Vec v = Vec::Zero(s.vec_len());
    for (int i = s.first_axis(); i < s.vec_len(); ++i) v[i] = rng.gaussian();
    if (v.norm() > 1e-6) return SpherePoint(s, std::move(v));
  }
}

/// Frame-sphere sampler avoiding the caps of the given radius around +-e.
inline SpherePoint sample_point_outside_caps(SplitMix64& rng, const Sphere& s,
                                             double cap_radius) {
  if (s.imaginary()) throw UsageError("cap exclusion refers to the frame sphere");
  while (true) {
    SpherePoint p = sample_point(rng, s);
    const double beta = std::sqrt(std::max(0.0, 1.0 - p[0] * p[0]));
    if (beta >= cap_radius) return p;
  }
}

inline TangentVector sample_unit_tangent(SplitMix64& rng, const SpherePoint& x) {
  while (true) {
    Vec w = Vec::Zero(x.sphere().vec_len());
    for (int i = x.sphere().first_axis(); i < x.sphere().vec_len(); ++i) w[i] = rng.gaussian();
    TangentVector t = project_tangent(x, w);
    const double n = t.v.norm();
    if (n > 1e-6) {
      t.v /= n;
      return t;
    }
  }
}

}  // namespace spherelab
