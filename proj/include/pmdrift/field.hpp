#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace pmdrift {

/// Cell-centered scalar field stored as a flat array (row-major in 2D).
class Field {
public:
  Field() = default;
  explicit Field(std::size_t n, double value = 0.0) : v_(n, value) {}
  explicit Field(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  Field& operator+=(const Field& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }

  /// this += s * o
  Field& axpy(double s, const Field& o) {
    assert(o.size() == size());
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += s * o.v_[i];
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::abs(x));
    return m;
  }

  double min() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::min(m, x);
    return m;
  }

  double max() const {
    double m = v_.empty() ? 0.0 : v_[0];
    for (double x : v_) m = std::max(m, x);
    return m;
  }

  bool operator==(const Field& o) const { return v_ == o.v_; }

private:
  std::vector<double> v_;
};

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }

}  // namespace pmdrift
