#pragma once

#include "spherelab/common.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spherelab {

/// Doubling depth of a Cayley-Dickson algebra over the reals:
/// 1 = complex, 2 = quaternion, 3 = octonion.
class AlgebraLevel {
 public:
  explicit AlgebraLevel(int value) : value_(value) {
    if (value < 1 || value > 3) throw UsageError("algebra level must be 1, 2 or 3");
  }

  int value() const { return value_; }
  int dim() const { return 1 << value_; }
  int imaginary_dim() const { return dim() - 1; }
  /// Dimension n of the sphere S^n carrying the almost complex structure.
  int base_sphere_dim() const { return dim() - 2; }

  bool operator==(const AlgebraLevel&) const = default;

 private:
  int value_;
};

namespace detail {

// Doubling convention: (a,b)(c,d) = (ac - conj(d)b, da + b conj(c)).
// Conjugation negates every coordinate except the first at all depths.
inline void cd_conjugate(std::span<double> x) {
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = -x[i];
}

inline void cd_multiply(std::span<const double> x, std::span<const double> y,
                        std::span<double> out) {
  const std::size_t n = x.size();
  if (n == 1) {
    out[0] = x[0] * y[0];
    return;
  }
  const std::size_t h = n / 2;
  const auto x1 = x.first(h), x2 = x.last(h);
  const auto y1 = y.first(h), y2 = y.last(h);

  std::array<double, 4> t1{}, t2{}, tc{};
  std::span<double> s1(t1.data(), h), s2(t2.data(), h), sc(tc.data(), h);

  // first half: x1*y1 - conj(y2)*x2
  cd_multiply(x1, y1, s1);
  std::copy(y2.begin(), y2.end(), sc.begin());
  cd_conjugate(sc);
  cd_multiply(sc, x2, s2);
  for (std::size_t i = 0; i < h; ++i) out[i] = s1[i] - s2[i];

  // second half: y2*x1 + x2*conj(y1)
  cd_multiply(y2, x1, s1);
  std::copy(y1.begin(), y1.end(), sc.begin());
  cd_conjugate(sc);
  cd_multiply(x2, sc, s2);
  for (std::size_t i = 0; i < h; ++i) out[h + i] = s1[i] + s2[i];
}

}  // namespace detail

/// Element of the level-1/2/3 Cayley-Dickson algebra. coords[0] multiplies the
/// identity, coords[i] the imaginary unit e_i. Vector-space operations are
/// componentwise; on integer coordinates all algebra operations stay exact.
class AlgebraElement {
 public:
  AlgebraElement(AlgebraLevel level, Vec coords)
      : level_(level), coords_(std::move(coords)) {
    if (coords_.size() != level_.dim())
      throw UsageError("coordinate vector does not match the algebra dimension");
  }

  static AlgebraElement zero(AlgebraLevel level) {
    return AlgebraElement(level, Vec::Zero(level.dim()));
  }
  static AlgebraElement one(AlgebraLevel level) { return basis(level, 0); }
  static AlgebraElement basis(AlgebraLevel level, int i) {
    return AlgebraElement(level, axis_vector(level.dim(), i));
  }

  AlgebraLevel level() const { return level_; }
  const Vec& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }

  AlgebraElement operator+(const AlgebraElement& o) const {
    require_same_level(o);
    return AlgebraElement(level_, coords_ + o.coords_);
  }
  AlgebraElement operator-(const AlgebraElement& o) const {
    require_same_level(o);
    return AlgebraElement(level_, coords_ - o.coords_);
  }
  AlgebraElement operator-() const { return AlgebraElement(level_, -coords_); }
  AlgebraElement operator*(double s) const { return AlgebraElement(level_, s * coords_); }

  void require_same_level(const AlgebraElement& o) const {
    if (!(o.level_ == level_)) throw UsageError("algebra level mismatch");
  }

 private:
  AlgebraLevel level_;
  Vec coords_;
};

inline AlgebraElement operator*(double s, const AlgebraElement& a) { return a * s; }

/// Raw product of two coordinate vectors of equal power-of-two length.
inline Vec multiply_vec(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw UsageError("algebra dimension mismatch");
  Vec out(a.size());
  detail::cd_multiply(std::span<const double>(a.data(), a.size()),
                      std::span<const double>(b.data(), b.size()),
                      std::span<double>(out.data(), out.size()));
  return out;
}

inline AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_same_level(b);
  return AlgebraElement(a.level(), multiply_vec(a.coords(), b.coords()));
}

inline AlgebraElement conjugate(const AlgebraElement& a) {
  Vec c = a.coords();
  for (int i = 1; i < c.size(); ++i) c[i] = -c[i];
  return AlgebraElement(a.level(), std::move(c));
}

inline double inner(const AlgebraElement& a, const AlgebraElement& b) {
  a.require_same_level(b);
  return a.coords().dot(b.coords());
}

inline double norm_sq(const AlgebraElement& a) { return a.coords().squaredNorm(); }
inline double norm(const AlgebraElement& a) { return a.coords().norm(); }

/// [a,b] = ab - ba.
inline AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) {
  return multiply(a, b) - multiply(b, a);
}

/// [a,b,c] = (ab)c - a(bc); alternating at the octonion level, identically
/// zero at levels 1 and 2.
inline AlgebraElement associator(const AlgebraElement& a, const AlgebraElement& b,
                                 const AlgebraElement& c) {
  return multiply(multiply(a, b), c) - multiply(a, multiply(b, c));
}

struct SignedTriple {
  int i, j, k;
  double sign;
};

/// Totally antisymmetric coefficients a_ijk of e_i e_j = -delta_ij + a_ijk e_k
/// over imaginary indices 1..dim-1.
class StructureConstants {
 public:
  /// The table frozen in the repository for the doubling convention above.
  /// `generated` must reproduce it entry for entry; a test enforces this.
  static StructureConstants frozen(AlgebraLevel level) {
    return StructureConstants(level, frozen_triples(level));
  }

  /// Regenerate the table from basis products of the doubling recursion.
  static StructureConstants generated(AlgebraLevel level) {
    const int dim = level.dim();
    std::vector<SignedTriple> triples;
    for (int i = 1; i < dim; ++i) {
      // e_i e_i must be -1 exactly
      const Vec sq = multiply_vec(axis_vector(dim, i), axis_vector(dim, i));
      for (int k = 0; k < dim; ++k) {
        const double want = (k == 0) ? -1.0 : 0.0;
        if (sq[k] != want) throw ValidationError("doubling table violates e_i e_i = -1");
      }
      for (int j = i + 1; j < dim; ++j) {
        const Vec p = multiply_vec(axis_vector(dim, i), axis_vector(dim, j));
        int found = -1;
        for (int k = 0; k < dim; ++k) {
          if (p[k] == 0.0) continue;
          if (k == 0 || std::abs(p[k]) != 1.0 || found >= 0)
            throw ValidationError("doubling product of distinct units is not a signed unit");
          found = k;
        }
        if (found <= 0) throw ValidationError("doubling product of distinct units vanished");
        // store as i<j<k with the matching permutation sign
        int a = i, b = j, c = found;
        double s = p[found];
        if (c < a) {
          std::swap(a, c);  // (i,j,k) -> (k,j,i), odd
          s = -s;
          if (b > c) {
            std::swap(b, c);  // then (k,j,i) -> (k,i,j), odd again
            s = -s;
          }
        } else if (c < b) {
          std::swap(b, c);  // (i,j,k) -> (i,k,j), odd
          s = -s;
        }
        bool seen = false;
        for (const auto& t : triples)
          if (t.i == a && t.j == b && t.k == c) {
            if (t.sign != s) throw ValidationError("doubling table is not totally antisymmetric");
            seen = true;
          }
        if (!seen) triples.push_back({a, b, c, s});
      }
    }
    return StructureConstants(level, std::move(triples));
  }

  AlgebraLevel level() const { return level_; }
  const std::vector<SignedTriple>& triples() const { return triples_; }

  /// Totally antisymmetric lookup, 1-based imaginary indices.
  double a(int i, int j, int k) const {
    check_index(i);
    check_index(j);
    check_index(k);
    if (i == j || j == k || i == k) return 0.0;
    int x = i, y = j, z = k;
    double s = 1.0;
    if (x > y) { std::swap(x, y); s = -s; }
    if (y > z) { std::swap(y, z); s = -s; }
    if (x > y) { std::swap(x, y); s = -s; }
    for (const auto& t : triples_)
      if (t.i == x && t.j == y && t.k == z) return s * t.sign;
    return 0.0;
  }

  /// Basis product e_i e_j reconstructed from the table (0 = identity index).
  Vec table_product(int i, int j) const {
    const int dim = level_.dim();
    if (i < 0 || i >= dim || j < 0 || j >= dim) throw UsageError("basis index out of range");
    if (i == 0) return axis_vector(dim, j);
    if (j == 0) return axis_vector(dim, i);
    Vec out = Vec::Zero(dim);
    if (i == j) {
      out[0] = -1.0;
      return out;
    }
    for (int k = 1; k < dim; ++k) out[k] = a(i, j, k);
    return out;
  }

  bool same_entries(const StructureConstants& other) const {
    if (!(other.level_ == level_)) return false;
    const int dim = level_.dim();
    for (int i = 1; i < dim; ++i)
      for (int j = 1; j < dim; ++j)
        for (int k = 1; k < dim; ++k)
          if (a(i, j, k) != other.a(i, j, k)) return false;
    return true;
  }

 private:
  StructureConstants(AlgebraLevel level, std::vector<SignedTriple> triples)
      : level_(level), triples_(std::move(triples)) {}

  static std::vector<SignedTriple> frozen_triples(AlgebraLevel level) {
    switch (level.value()) {
      case 1:
        return {};
      case 2:
        return {{1, 2, 3, 1.0}};
      default:
        return {{1, 2, 3, 1.0}, {1, 4, 5, 1.0}, {1, 6, 7, -1.0}, {2, 4, 6, 1.0},
                {2, 5, 7, 1.0}, {3, 4, 7, 1.0}, {3, 5, 6, -1.0}};
    }
  }

  void check_index(int i) const {
    if (i < 1 || i >= level_.dim()) throw UsageError("imaginary index out of range");
  }

  AlgebraLevel level_;
  std::vector<SignedTriple> triples_;
};

}  // namespace spherelab
