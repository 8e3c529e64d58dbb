#pragma once

#include "spherelab/acs.hpp"
#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/geometry.hpp"

#include <functional>
#include <sstream>
#include <utility>
#include <vector>

namespace spherelab {

// The distinguished unit vector e is the identity axis (coordinate 0), so the
// base sphere S^n sits in the hyperplane orthogonal to e and the frame sphere
// S^{n+1} is the full unit sphere of the algebra's coordinate space.

/// Extension of J_y to the whole coordinate space: e -> y, y -> -e, and J_y on
/// the orthogonal complement of span{e, y}. Squares to -Id.
struct ExtendedJ {
  SpherePoint y;
  Mat matrix;
};

/// Apply the extension of J at y to an arbitrary ambient vector.
inline Vec extended_apply(const AcsField& J, const Vec& y, const Vec& v) {
  const double ve = v[0];
  const double vy = v.dot(y);
  Vec w = v;
  w[0] = 0.0;
  w -= vy * y;
  Vec out = J.apply_raw(y, w);
  out += ve * y;
  out[0] -= vy;
  return out;
}

inline ExtendedJ extend_j(const AcsField& J, const SpherePoint& y) {
  if (!(y.sphere() == J.sphere())) throw UsageError("point belongs to a different sphere");
  const int len = y.sphere().vec_len();
  Mat m(len, len);
  for (int i = 0; i < len; ++i) m.col(i) = extended_apply(J, y.vec(), axis_vector(len, i));
  if ((m * m + Mat::Identity(len, len)).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("extension does not square to minus the identity; "
                          "the supplied field violates J^2 = -Id at this point");
  return {y, std::move(m)};
}

/// Frame map sigma~_x = alpha Id + beta J~_y for x = alpha e + beta y.
/// sigma~_x(e) = x always; invertible whenever x != 0.
struct KirchhoffFrame {
  Vec x;
  double alpha;
  double beta;
  SpherePoint y;
  Mat j_tilde;
  Mat sigma;
  bool invertible;
};

inline KirchhoffFrame sigma_tilde(const AcsField& J, const Vec& x) {
  const int len = J.sphere().vec_len();
  if (x.size() != len) throw UsageError("point length does not match the algebra dimension");
  const Decomposition d = decompose(x, axis_vector(len, 0));
  const SpherePoint y(J.sphere(), d.y);
  const ExtendedJ ext = extend_j(J, y);
  Mat sigma = d.alpha * Mat::Identity(len, len) + d.beta * ext.matrix;
  const bool invertible = (d.alpha * d.alpha + d.beta * d.beta) > 1e-24;
  return {x, d.alpha, d.beta, y, ext.matrix, std::move(sigma), invertible};
}

/// sigma~_x applied to one vector, without assembling the matrix.
inline Vec sigma_apply(const AcsField& J, const Vec& x, const Vec& v) {
  const int len = J.sphere().vec_len();
  if (x.size() != len || v.size() != len) throw UsageError("dimension mismatch");
  const Decomposition d = decompose(x, axis_vector(len, 0));
  return d.alpha * v + d.beta * extended_apply(J, d.y, v);
}

/// Inverse on the frame sphere: alpha Id - beta J~_y. Only valid for unit x.
inline Mat sigma_inverse(const KirchhoffFrame& frame) {
  if (std::abs(frame.x.norm() - 1.0) > 1e-9)
    throw UsageError("the inverse formula holds only on the unit sphere");
  const int len = static_cast<int>(frame.x.size());
  return frame.alpha * Mat::Identity(len, len) - frame.beta * frame.j_tilde;
}

/// Closed form of the frame field i (1 <= i <= n+1):
/// X_i(x) = alpha e_i - x_i e + beta J_y(e_i - <y, e_i> y); equals sigma~_x(e_i).
inline TangentVector frame_field(const AcsField& J, int i, const SpherePoint& x) {
  const int len = J.sphere().vec_len();
  if (x.sphere().vec_len() != len || x.sphere().imaginary())
    throw UsageError("frame fields live on the frame sphere");
  if (i < 1 || i > len - 1) throw UsageError("frame index out of range");
  const Decomposition d = decompose(x.vec(), axis_vector(len, 0));
  const Vec ei = axis_vector(len, i);
  Vec val = d.alpha * ei;
  val[0] -= x.vec()[i];
  Vec w = ei - d.y.dot(ei) * d.y;
  val += d.beta * J.apply_raw(d.y, w);
  return {x, std::move(val)};
}

inline VectorFieldMap frame_field_map(const AcsField& J, int i) {
  const Sphere fs = Sphere::unit(J.sphere().vec_len());
  return [J, i, fs](const Vec& p) { return frame_field(J, i, SpherePoint(fs, p)).v; };
}

/// All n+1 frame fields of the construction.
inline std::vector<VectorFieldMap> kirchhoff_frame(const AcsField& J) {
  std::vector<VectorFieldMap> fields;
  const int len = J.sphere().vec_len();
  fields.reserve(len - 1);
  for (int i = 1; i < len; ++i) fields.push_back(frame_field_map(J, i));
  return fields;
}

/// The division-algebra frame X_i(x) = e_i x on the unit sphere of the algebra.
inline std::vector<VectorFieldMap> classical_frame(AlgebraLevel level) {
  std::vector<VectorFieldMap> fields;
  const int dim = level.dim();
  fields.reserve(dim - 1);
  for (int i = 1; i < dim; ++i) {
    const Vec ei = axis_vector(dim, i);
    fields.push_back([ei](const Vec& p) { return multiply_vec(ei, p); });
  }
  return fields;
}

// ---------------------------------------------------------------------------
// Frames from a multiplication map nu(v, z), linear in v, with nu(e, z) = z.
// Produces k tangent fields on the unit sphere of the z-space by projecting
// nu(v_i, z) for a basis v_1..v_k of the orthogonal complement of e.

using BilinearMap = std::function<Vec(const Vec&, const Vec&)>;

inline std::vector<VectorFieldMap> frame_from_multiplication(const BilinearMap& nu,
                                                             const Vec& e, int z_dim,
                                                             int check_samples = 100,
                                                             std::uint64_t seed = kDefaultSeed) {
  if (std::abs(e.norm() - 1.0) > 1e-9) throw UsageError("identity vector must be unit");
  const int k = static_cast<int>(e.size()) - 1;
  const Sphere zs = Sphere::unit(z_dim);

  SplitMix64 rng(seed);
  for (int s = 0; s < 16; ++s) {
    const Vec z = sample_point(rng, zs).vec();
    if ((nu(e, z) - z).cwiseAbs().maxCoeff() > 1e-10)
      throw ValidationError("map does not fix the identity: nu(e, z) != z");
  }

  // deterministic orthonormal basis of e-perp
  int drop = 0;
  for (int i = 1; i < e.size(); ++i)
    if (std::abs(e[i]) > std::abs(e[drop])) drop = i;
  std::vector<Vec> basis;
  for (int i = 0; i < e.size(); ++i) {
    if (i == drop) continue;
    Vec b = axis_vector(static_cast<int>(e.size()), i);
    b -= b.dot(e) * e;
    for (const Vec& prev : basis) b -= b.dot(prev) * prev;
    basis.push_back(b / b.norm());
  }

  std::vector<VectorFieldMap> fields;
  fields.reserve(k);
  for (int i = 0; i < k; ++i) {
    const Vec vi = basis[i];
    fields.push_back([nu, vi](const Vec& p) {
      Vec w = nu(vi, p);
      w -= w.dot(p) * p;
      return w;
    });
  }

  // sampled independence: Gram determinant bounded away from zero
  for (int s = 0; s < check_samples; ++s) {
    const SpherePoint p = sample_point(rng, zs);
    Mat F(z_dim, k);
    for (int i = 0; i < k; ++i) F.col(i) = fields[i](p.vec());
    const double det = (F.transpose() * F).determinant();
    if (det <= 1e-8) {
      std::ostringstream msg;
      msg << "fields from the multiplication are dependent (Gram determinant " << det
          << ") at witness point [" << p.vec().transpose() << "]";
      throw ValidationError(msg.str());
    }
  }
  return fields;
}

}  // namespace spherelab
