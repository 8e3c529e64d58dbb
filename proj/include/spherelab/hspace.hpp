#pragma once

#include "spherelab/acs.hpp"
#include "spherelab/common.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/kirchhoff.hpp"
#include "spherelab/rng.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace spherelab {

/// Multiplication induced by the frame: m^(x, y) = sigma~_x(y) on the ambient
/// space, and its normalised restriction m(x, y) = m^(x, y)/|m^(x, y)| on the
/// frame sphere. The identity element is e in either case.
struct HMultiplication {
  AcsField J;
  bool normalize;
};

inline HMultiplication ambient_multiplication(AcsField J) { return {std::move(J), false}; }
inline HMultiplication sphere_multiplication(AcsField J) { return {std::move(J), true}; }

inline Vec multiply_h(const HMultiplication& m, const Vec& x, const Vec& y) {
  Vec v = sigma_apply(m.J, x, y);
  if (!m.normalize) return v;
  const double n = v.norm();
  // unreachable for unit inputs; hitting it would mean the frame map lost rank
  if (n < 1e-12) throw DegeneracyError("sphere product degenerated to zero");
  return v / n;
}

/// Defect statistics over seeded unit triples. Histogram: 32 uniform bins on
/// [0, max]; a value equal to max lands in the last bin.
struct DefectReport {
  std::uint64_t seed;
  int n;
  double max;
  double mean;
  std::array<int, 32> hist;
};

namespace detail {

inline DefectReport defect_scan(const HMultiplication& m, int n, std::uint64_t seed,
                                bool moufang) {
  if (n < 1) throw UsageError("sample count must be at least 1");
  const Sphere s = Sphere::unit(m.J.sphere().vec_len());
  constexpr int kChunk = 1024;

  std::vector<double> defects;
  defects.reserve(n);
  for (int start = 0; start < n; start += kChunk) {
    SplitMix64 rng(derive_stream_seed(seed, start / kChunk));
    const int stop = std::min(n, start + kChunk);
    for (int idx = start; idx < stop; ++idx) {
      const Vec x = sample_point(rng, s).vec();
      const Vec y = sample_point(rng, s).vec();
      const Vec z = sample_point(rng, s).vec();
      double d = 0.0;
      if (moufang) {
        const Vec lhs = multiply_h(m, multiply_h(m, x, y), multiply_h(m, z, x));
        const Vec rhs = multiply_h(m, multiply_h(m, x, multiply_h(m, y, z)), x);
        d = (lhs - rhs).norm();
      } else {
        const Vec lhs = multiply_h(m, multiply_h(m, x, y), z);
        const Vec rhs = multiply_h(m, x, multiply_h(m, y, z));
        d = (lhs - rhs).norm();
      }
      defects.push_back(d);
    }
  }

  DefectReport report{seed, n, 0.0, 0.0, {}};
  for (double d : defects) {
    report.max = std::max(report.max, d);
    report.mean += d;
  }
  report.mean /= n;
  report.hist.fill(0);
  for (double d : defects) {
    int bin = 0;
    if (report.max > 0.0)
      bin = std::min(31, static_cast<int>(d / report.max * 32.0));
    ++report.hist[static_cast<std::size_t>(bin)];
  }
  return report;
}

}  // namespace detail

/// Samples |m(m(x,y),z) - m(x,m(y,z))|.
inline DefectReport associativity_defect(const HMultiplication& m, int n, std::uint64_t seed) {
  return detail::defect_scan(m, n, seed, false);
}

/// Samples |m(m(x,y), m(z,x)) - m(m(x, m(y,z)), x)|.
inline DefectReport moufang_defect(const HMultiplication& m, int n, std::uint64_t seed) {
  return detail::defect_scan(m, n, seed, true);
}

}  // namespace spherelab
