#pragma once

#include "spherelab/acs.hpp"
#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/hspace.hpp"
#include "spherelab/kirchhoff.hpp"
#include "spherelab/parallelism.hpp"
#include "spherelab/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace spherelab {

/// One run's worth of knobs; every report embeds these for provenance.
struct RunConfig {
  int level = 3;
  std::string model = "octonion";
  double h = kDefaultStep;
  double eps_pole = kDefaultPoleCap;
  int samples = 200;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "json";

  void validate() const {
    if (level < 1 || level > 3) throw UsageError("level must be 1, 2 or 3");
    if (h <= 0.0) throw UsageError("step h must be positive");
    if (eps_pole <= 0.0) throw UsageError("pole cap radius must be positive");
    if (samples < 1) throw UsageError("sample count must be at least 1");
    if (format != "json" && format != "csv") throw UsageError("format must be json or csv");
  }
};

/// Builds the model named by the config: the division-algebra structure on
/// S^2 or S^6, or a seeded rotation of the octonionic one.
inline AcsField make_model(const std::string& model, std::uint64_t seed) {
  if (model == "octonion") return AcsField::right_multiplication(AlgebraLevel(3));
  if (model == "quaternion") return AcsField::right_multiplication(AlgebraLevel(2));
  if (model == "rotated") {
    const AcsField base = AcsField::right_multiplication(AlgebraLevel(3));
    return AcsField::rotated(base, random_rotation_fixing_identity(8, seed));
  }
  throw UsageError("unknown model '" + model + "' (expected octonion, quaternion or rotated)");
}

struct IdentityCheck {
  std::string name;
  double value;      // measured extremal residual or magnitude
  double bound;
  bool lower_bound;  // pass means value >= bound instead of value <= bound
  bool pass;
};

struct VerificationSummary {
  std::string model;
  RunConfig config;
  std::vector<IdentityCheck> checks;
  bool all_pass = true;
};

namespace detail {

inline void push_check(VerificationSummary& s, std::string name, double value, double bound,
                       bool lower_bound = false) {
  const bool pass = lower_bound ? value >= bound : value <= bound;
  s.checks.push_back({std::move(name), value, bound, lower_bound, pass});
  s.all_pass = s.all_pass && pass;
}

// Pointwise structure identities of the field itself.
inline void check_acs_core(VerificationSummary& s, const AcsField& J, const RunConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  double square = 0.0, tangency = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const SpherePoint y = sample_point(rng, J.sphere());
    const Vec v = sample_unit_tangent(rng, y).v;
    const Vec jv = J.apply_raw(y.vec(), v);
    tangency = std::max(tangency, std::abs(jv.dot(y.vec())));
    square = std::max(square, (J.apply_raw(y.vec(), jv) + v).cwiseAbs().maxCoeff());
  }
  push_check(s, "square_minus_identity", square, 1e-10);
  push_check(s, "tangency", tangency, 1e-10);
  push_check(s, "hermitian_compatibility", hermitian_residual(J, cfg.samples, cfg.seed), 1e-10);
}

// Chart-level tensors at seeded coordinates in a ball of radius 2.
inline Vec chart_sample(SplitMix64& rng, int dim) {
  Vec u(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) u[i] = rng.uniform(-2.0, 2.0);
    if (u.norm() <= 2.0) return u;
  }
}

inline void check_integrability(VerificationSummary& s, const AcsField& J,
                                const RunConfig& cfg) {
  const bool integrable = J.sphere().dim() == 2;
  const Chart chart{SpherePoint(J.sphere(), axis_vector(J.sphere().vec_len(),
                                                        J.sphere().vec_len() - 1))};
  SplitMix64 rng(derive_stream_seed(cfg.seed, 1));
  const int chart_samples = std::max(10, cfg.samples / 10);

  double nij_fd = 0.0;
  double eq_assoc = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const SpherePoint a = sample_point(rng, J.sphere());
    const Vec b = sample_unit_tangent(rng, a).v;
    const Vec c = sample_unit_tangent(rng, a).v;
    const Vec n = nijenhuis_fd(J, a, b, c, cfg.h).v;
    nij_fd = std::max(nij_fd, n.norm());
    if (J.name() == "octonion" || J.name() == "quaternion") {
      const AlgebraLevel lv(J.sphere().vec_len() == 8 ? 3 : 2);
      const Vec assoc = associator(AlgebraElement(lv, a.vec()), AlgebraElement(lv, b),
                                   AlgebraElement(lv, c))
                            .coords();
      eq_assoc = std::max(eq_assoc, (n - 2.0 * assoc).norm());
    }
  }
  if (integrable)
    push_check(s, "nijenhuis_zero", nij_fd, 1e-5);
  else if (J.name() == "octonion")
    push_check(s, "nijenhuis_associator", eq_assoc, 1e-5);
  else
    push_check(s, "nijenhuis_nonzero", nij_fd, 0.1, /*lower=*/true);
  if (J.name() == "quaternion") push_check(s, "nijenhuis_associator", eq_assoc, 1e-5);

  double tau_rel = 0.0, tau_mag = 0.0, calabi_mag = 0.0;
  const ScalarFieldMap f = [](const Vec& u) { return u[0]; };
  for (int i = 0; i < chart_samples; ++i) {
    const Vec u = chart_sample(rng, chart.dim());
    const Tensor3 tau = tau_chart(J, chart, u, cfg.h);
    const Tensor3 N = nijenhuis_chart_tensor(J, chart, u, cfg.h);
    const Mat Jm = acs_chart_matrix(J, chart, u);
    const int n = chart.dim();
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double contracted = 0.0;
          for (int r = 0; r < n; ++r) contracted += Jm(r, j) * N(a, r, k);
          tau_rel = std::max(tau_rel, std::abs(tau(a, j, k) + contracted));
        }
    tau_mag = std::max(tau_mag, tau.max_abs());
    calabi_mag = std::max(calabi_mag, calabi_defect(J, f, chart, u, cfg.h).cwiseAbs().maxCoeff());
  }
  push_check(s, "tau_nijenhuis_relation", tau_rel, 1e-4);
  if (integrable) {
    push_check(s, "tau_zero", tau_mag, 1e-5);
    push_check(s, "calabi_zero", calabi_mag, 1e-4);
  } else {
    push_check(s, "calabi_nonzero", calabi_mag, 1e-2, /*lower=*/true);
  }
}

inline void check_frame(VerificationSummary& s, const AcsField& J, const RunConfig& cfg) {
  const int len = J.sphere().vec_len();
  const Sphere fs = Sphere::unit(len);
  const Vec e = axis_vector(len, 0);
  SplitMix64 rng(derive_stream_seed(cfg.seed, 2));
  const bool algebra_model = J.name() == "octonion" || J.name() == "quaternion";

  double maps_e = 0.0, orth = 0.0, inv = 0.0, closed = 0.0, gram = 0.0, right_mult = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const SpherePoint x = sample_point(rng, fs);
    const KirchhoffFrame frame = sigma_tilde(J, x.vec());
    maps_e = std::max(maps_e, (frame.sigma * e - x.vec()).cwiseAbs().maxCoeff());
    orth = std::max(orth, (frame.sigma * frame.sigma.transpose() - Mat::Identity(len, len))
                              .cwiseAbs()
                              .maxCoeff());
    inv = std::max(inv, (sigma_inverse(frame) * frame.sigma - Mat::Identity(len, len))
                            .cwiseAbs()
                            .maxCoeff());
    Mat tangent_frame(len, len - 1);
    for (int idx = 1; idx < len; ++idx) {
      const Vec closed_form = frame_field(J, idx, x).v;
      closed = std::max(closed,
                        (closed_form - frame.sigma * axis_vector(len, idx)).cwiseAbs().maxCoeff());
      tangent_frame.col(idx - 1) = closed_form;
    }
    gram = std::max(gram, (tangent_frame.transpose() * tangent_frame -
                           Mat::Identity(len - 1, len - 1))
                              .cwiseAbs()
                              .maxCoeff());
    if (algebra_model) {
      Mat rx(len, len);
      for (int idx = 0; idx < len; ++idx)
        rx.col(idx) = multiply_vec(axis_vector(len, idx), x.vec());
      right_mult = std::max(right_mult, (frame.sigma - rx).cwiseAbs().maxCoeff());
    }
  }
  push_check(s, "sigma_maps_e_to_x", maps_e, 1e-12);
  push_check(s, "sigma_orthogonality", orth, 1e-10);
  push_check(s, "sigma_inverse_formula", inv, 1e-10);
  push_check(s, "frame_closed_form", closed, 1e-12);
  push_check(s, "frame_gram_identity", gram, 1e-10);
  if (algebra_model) push_check(s, "sigma_is_right_multiplication", right_mult, 1e-12);
}

inline void check_hspace(VerificationSummary& s, const AcsField& J, const RunConfig& cfg) {
  const int len = J.sphere().vec_len();
  const Sphere fs = Sphere::unit(len);
  const Vec e = axis_vector(len, 0);
  const HMultiplication mhat = ambient_multiplication(J);
  SplitMix64 rng(derive_stream_seed(cfg.seed, 3));
  const bool algebra_model = J.name() == "octonion" || J.name() == "quaternion";

  double identity_res = 0.0, norm_rule = 0.0, right_mult = 0.0;
  for (int i = 0; i < cfg.samples; ++i) {
    const Vec x = rng.gaussian_vec(len);
    const Vec y = rng.gaussian_vec(len);
    const Vec p = multiply_h(mhat, x, y);
    norm_rule = std::max(norm_rule, std::abs(p.norm() - x.norm() * y.norm()));
    identity_res = std::max(identity_res, (multiply_h(mhat, e, y) - y).cwiseAbs().maxCoeff());
    identity_res = std::max(identity_res, (multiply_h(mhat, x, e) - x).cwiseAbs().maxCoeff());
    if (algebra_model)
      right_mult = std::max(right_mult, (p - multiply_vec(y, x)).cwiseAbs().maxCoeff());
  }
  push_check(s, "mhat_identity", identity_res, 1e-12);
  push_check(s, "mhat_norm_rule", norm_rule, 1e-10);
  if (algebra_model) push_check(s, "mhat_is_reversed_product", right_mult, 1e-12);

  const int defect_samples = std::max(1000, cfg.samples);
  const DefectReport assoc = associativity_defect(mhat, defect_samples, cfg.seed);
  const DefectReport mouf = moufang_defect(mhat, defect_samples, cfg.seed);
  if (J.sphere().vec_len() == 4) {
    push_check(s, "assoc_defect_zero", assoc.max, 1e-9);
  } else {
    push_check(s, "assoc_defect_large", assoc.max, 0.5, /*lower=*/true);
  }
  if (algebra_model) push_check(s, "moufang_defect_zero", mouf.max, 1e-9);
}

inline void check_parallelism(VerificationSummary& s, const AcsField& J, const RunConfig& cfg) {
  const int len = J.sphere().vec_len();
  const AlgebraLevel lv(len == 8 ? 3 : 2);
  const Sphere fs = Sphere::frame_sphere(lv);
  const int scan_samples = std::min(cfg.samples, 50);
  const bool algebra_model = J.name() == "octonion" || J.name() == "quaternion";

  const auto frame = kirchhoff_frame(J);
  const ConstancyReport report =
      constancy_scan(frame, fs, scan_samples, cfg.seed, cfg.h, cfg.eps_pole);
  if (len == 4) {
    push_check(s, "constancy_kirchhoff_flat", report.max_deviation, 1e-4);
  } else {
    // the torsion itself never vanishes for these frames
    double min_torsion = std::numeric_limits<double>::infinity();
    for (int idx = 0; idx < scan_samples; ++idx) {
      SplitMix64 rng(derive_stream_seed(cfg.seed ^ 0x5eedULL, idx));
      const SpherePoint p = sample_point_outside_caps(rng, fs, cfg.eps_pole);
      min_torsion = std::min(min_torsion,
                             structure_functions_fd(frame, p, cfg.h).T.frobenius_norm());
    }
    push_check(s, "torsion_nonvanishing", min_torsion, 0.5, /*lower=*/true);
  }

  if (algebra_model && len == 8) {
    const auto classical = classical_frame(lv);
    const ConstancyReport classical_report =
        constancy_scan(classical, fs, scan_samples, cfg.seed, cfg.h, cfg.eps_pole);
    push_check(s, "classical_nonconstancy", classical_report.max_deviation, 0.1, /*lower=*/true);

    SplitMix64 rng(derive_stream_seed(cfg.seed, 4));
    double closed_vs_fd = 0.0;
    for (int n = 0; n < scan_samples; ++n) {
      const SpherePoint x = sample_point_outside_caps(rng, fs, cfg.eps_pole);
      const int i = 1 + static_cast<int>(rng.next_u64() % (len - 1));
      int j = 1 + static_cast<int>(rng.next_u64() % (len - 1));
      if (j == i) j = (j % (len - 1)) + 1;
      const Vec closed = classical_bracket_closed_form(lv, i, j, x).v;
      const Vec fd = lie_bracket_fd(classical[i - 1], classical[j - 1], x, cfg.h).v;
      closed_vs_fd = std::max(closed_vs_fd, (closed - fd).norm());
    }
    push_check(s, "classical_closed_form_brackets", closed_vs_fd, 1e-5);
  }
}

}  // namespace detail

/// Runs every identity relevant to the configured model. Deterministic for a
/// fixed config; `all_pass` drives the process exit code.
inline VerificationSummary run_verification(const RunConfig& cfg) {
  cfg.validate();
  VerificationSummary summary;
  summary.model = cfg.model;
  summary.config = cfg;
  const AcsField J = make_model(cfg.model, cfg.seed);
  detail::check_acs_core(summary, J, cfg);
  detail::check_integrability(summary, J, cfg);
  detail::check_frame(summary, J, cfg);
  detail::check_hspace(summary, J, cfg);
  detail::check_parallelism(summary, J, cfg);
  return summary;
}

/// The subset of checks behind `acs check`: field structure plus the
/// integrability tensors.
inline VerificationSummary run_acs_check(const RunConfig& cfg) {
  cfg.validate();
  VerificationSummary summary;
  summary.model = cfg.model;
  summary.config = cfg;
  const AcsField J = make_model(cfg.model, cfg.seed);
  detail::check_acs_core(summary, J, cfg);
  detail::check_integrability(summary, J, cfg);
  return summary;
}

}  // namespace spherelab
