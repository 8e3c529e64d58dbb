#pragma once

#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/kirchhoff.hpp"
#include "spherelab/rng.hpp"

#include <span>
#include <utility>
#include <vector>

namespace spherelab {

enum class StructureMethod { fd_bracket, chart_formula, closed_form };

/// Structure functions T^i_jk of a frame at one point, read from
/// sum_i T^i_jk X_i = -[X_j, X_k]; antisymmetric in (j, k) by construction.
struct StructureSample {
  SpherePoint point;
  Tensor3 T;
  StructureMethod method;
  double residual;  // worst least-squares residual of the component solves
};

namespace detail {

inline Mat frame_matrix_checked(std::span<const VectorFieldMap> frame, const SpherePoint& p) {
  const int m = static_cast<int>(frame.size());
  Mat F(p.sphere().vec_len(), m);
  for (int j = 0; j < m; ++j) F.col(j) = frame[j](p.vec());
  if ((F.transpose() * F).determinant() < 1e-8)
    throw DegeneracyError("frame is numerically degenerate at the sample point");
  return F;
}

}  // namespace detail

inline StructureSample structure_functions_fd(std::span<const VectorFieldMap> frame,
                                              const SpherePoint& p, double h) {
  const int m = static_cast<int>(frame.size());
  const Mat F = detail::frame_matrix_checked(frame, p);
  const auto qr = F.colPivHouseholderQr();
  Tensor3 T(m);
  double residual = 0.0;
  for (int j = 0; j < m; ++j)
    for (int k = j + 1; k < m; ++k) {
      const Vec bracket = lie_bracket_fd(frame[j], frame[k], p, h).v;
      const Vec t = qr.solve(-bracket);
      residual = std::max(residual, (F * t + bracket).cwiseAbs().maxCoeff());
      for (int i = 0; i < m; ++i) {
        T(i, j, k) = t[i];
        T(i, k, j) = -t[i];
      }
    }
  return {p, std::move(T), StructureMethod::fd_bracket, residual};
}

/// Chart route: T^i_jk = sum_{r,s} X^r_j X^s_k (d theta^i_r/du^s - d theta^i_s/du^r),
/// with theta the coframe dual to the frame's component matrix. The derivative
/// difference is oriented so the result matches the bracket route above, whose
/// sign convention is the matrix commutator.
inline StructureSample structure_functions_chart(std::span<const VectorFieldMap> frame,
                                                 const Chart& chart, const Vec& u, double h) {
  const int m = static_cast<int>(frame.size());
  if (m != chart.dim()) throw UsageError("frame size must match the chart dimension");
  const Mat M = frame_chart_components(frame, chart, u);
  if (std::abs(M.determinant()) < 1e-10)
    throw DegeneracyError("frame is numerically degenerate at the sample point");
  const auto theta = [&](const Vec& uu) {
    return coframe_components(frame_chart_components(frame, chart, uu));
  };
  std::vector<Mat> dTheta;
  dTheta.reserve(m);
  for (int r = 0; r < m; ++r) dTheta.push_back(central_difference(theta, u, r, h));

  Tensor3 T(m);
  Mat Ci(m, m);
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) Ci(r, s) = dTheta[s](i, r) - dTheta[r](i, s);
    const Mat comp = M * Ci * M.transpose();
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) T(i, j, k) = comp(j, k);
  }
  return {chart.inverse(u), std::move(T), StructureMethod::chart_formula, 0.0};
}

/// Closed form of the classical-frame bracket on the unit sphere of the
/// algebra: [X_i, X_j](x) = 2 a_ijk (e_k x) - 2 [e_i, e_j, x].
inline TangentVector classical_bracket_closed_form(AlgebraLevel level, int i, int j,
                                                   const SpherePoint& x) {
  const int dim = level.dim();
  if (x.sphere().vec_len() != dim || x.sphere().imaginary())
    throw UsageError("closed-form brackets live on the unit sphere of the algebra");
  if (i < 1 || i >= dim || j < 1 || j >= dim) throw UsageError("frame index out of range");
  const StructureConstants table = StructureConstants::frozen(level);
  const AlgebraElement X(level, x.vec());
  AlgebraElement acc = AlgebraElement::zero(level);
  for (int k = 1; k < dim; ++k) {
    const double a = table.a(i, j, k);
    if (a != 0.0) acc = acc + a * multiply(AlgebraElement::basis(level, k), X);
  }
  const AlgebraElement assoc =
      associator(AlgebraElement::basis(level, i), AlgebraElement::basis(level, j), X);
  const Vec val = 2.0 * acc.coords() - 2.0 * assoc.coords();
  return {x, val};
}

/// Covariant derivative of the frame connection: nabla_Z (sum f^i X_i)
/// = sum Z(f^i) X_i, the frame fields themselves being parallel.
inline TangentVector covariant_derivative(std::span<const VectorFieldMap> frame,
                                          const VectorFieldMap& Z,
                                          std::span<const ScalarFieldMap> coeffs,
                                          const SpherePoint& p, double h) {
  if (coeffs.size() != frame.size())
    throw UsageError("one coefficient function per frame field is required");
  const Mat F = detail::frame_matrix_checked(frame, p);
  const Vec zp = Z(p.vec());
  Vec out = Vec::Zero(p.sphere().vec_len());
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    out += scalar_directional_derivative(coeffs[i], p, zp, h) * F.col(static_cast<int>(i));
  return {p, std::move(out)};
}

/// Spread statistics of the structure functions over a seeded scan.
struct ConstancyReport {
  int samples;
  double cap_radius;
  Tensor3 mean;
  Tensor3 max_dev;
  double max_deviation;   // max over components of max |T - mean|
  double max_residual;    // worst component-solve residual seen
};

inline ConstancyReport constancy_scan(std::span<const VectorFieldMap> frame, const Sphere& s,
                                      int n_samples, std::uint64_t seed, double h,
                                      double cap_radius) {
  if (n_samples < 1) throw UsageError("sample count must be at least 1");
  const int m = static_cast<int>(frame.size());
  std::vector<Tensor3> tensors;
  tensors.reserve(n_samples);
  double max_residual = 0.0;
  for (int idx = 0; idx < n_samples; ++idx) {
    SplitMix64 rng(derive_stream_seed(seed, idx));
    const SpherePoint p = s.imaginary() ? sample_point(rng, s)
                                        : sample_point_outside_caps(rng, s, cap_radius);
    StructureSample sample = structure_functions_fd(frame, p, h);
    max_residual = std::max(max_residual, sample.residual);
    tensors.push_back(std::move(sample.T));
  }

  Tensor3 mean(m);
  for (const Tensor3& t : tensors) mean.add_scaled(t, 1.0 / n_samples);
  Tensor3 max_dev(m);
  double overall = 0.0;
  for (const Tensor3& t : tensors)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
          const double dev = std::abs(t(i, j, k) - mean(i, j, k));
          if (dev > max_dev(i, j, k)) max_dev(i, j, k) = dev;
          if (dev > overall) overall = dev;
        }
  return {n_samples, cap_radius, std::move(mean), std::move(max_dev), overall, max_residual};
}

}  // namespace spherelab
