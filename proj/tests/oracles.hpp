#pragma once

// Test-side oracles, independent of the code paths they check: multiplication
// matrices assembled column-by-column from basis products, and their exact
// commutators.

#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"

namespace spherelab::oracle {

/// Matrix of v -> e_i v.
inline Mat left_mult_matrix(AlgebraLevel level, int i) {
  const int dim = level.dim();
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j)
    m.col(j) = multiply_vec(axis_vector(dim, i), axis_vector(dim, j));
  return m;
}

/// Matrix of v -> v x.
inline Mat right_mult_matrix(AlgebraLevel level, const Vec& x) {
  const int dim = level.dim();
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j) m.col(j) = multiply_vec(axis_vector(dim, j), x);
  return m;
}

inline Mat matrix_commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

}  // namespace spherelab::oracle
