#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spherelab {

inline constexpr const char* kVersion = "0.1.0";

// Shared numeric defaults. kDefaultPoleCap is the radius of the two caps
// around +-e on the frame sphere that derivative-based samplers stay out of;
// the frame is continuous there but not smooth.
inline constexpr double kDefaultStep = 1e-5;
inline constexpr double kDefaultPoleCap = 1e-3;
inline constexpr std::uint64_t kDefaultSeed = 42;

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error taxonomy. The CLI maps UsageError to exit 2 and IoError to exit 3;
// anything else escaping a command counts as an identity failure (exit 1).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Vec axis_vector(int len, int i) {
  if (i < 0 || i >= len) throw UsageError("axis index out of range");
  Vec v = Vec::Zero(len);
  v[i] = 1.0;
  return v;
}

/// Dense rank-3 array with equal extents, zero-initialised.
class Tensor3 {
 public:
  explicit Tensor3(int extent)
      : extent_(extent),
        data_(static_cast<std::size_t>(extent) * extent * extent, 0.0) {
    if (extent <= 0) throw UsageError("Tensor3 extent must be positive");
  }

  int extent() const { return extent_; }

  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  double max_abs_diff(const Tensor3& other) const {
    if (other.extent_ != extent_) throw UsageError("Tensor3 extent mismatch");
    double m = 0.0;
    for (std::size_t n = 0; n < data_.size(); ++n)
      m = std::max(m, std::abs(data_[n] - other.data_[n]));
    return m;
  }

  Tensor3& add_scaled(const Tensor3& other, double factor) {
    if (other.extent_ != extent_) throw UsageError("Tensor3 extent mismatch");
    for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += factor * other.data_[n];
    return *this;
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * extent_ + j) * extent_ + k;
  }

  int extent_;
  std::vector<double> data_;
};

}  // namespace spherelab
