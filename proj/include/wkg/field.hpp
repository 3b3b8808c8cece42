#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkg/grid.hpp"

namespace wkg {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Spinor4 = std::array<Complex, 4>;

namespace detail {

inline double abs2(double v) { return v * v; }
inline double abs2(const Complex& v) { return std::norm(v); }
inline double abs2(const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }
inline double abs2(const Spinor4& v) {
  return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]) + std::norm(v[3]);
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }
inline bool finite(const Vec3& v) { return finite(v[0]) && finite(v[1]) && finite(v[2]); }
inline bool finite(const Spinor4& v) {
  return finite(v[0]) && finite(v[1]) && finite(v[2]) && finite(v[3]);
}

template <class T>
inline T zero_value() { return T{}; }
template <>
inline Vec3 zero_value<Vec3>() { return {0.0, 0.0, 0.0}; }
template <>
inline Spinor4 zero_value<Spinor4>() { return {Complex{}, Complex{}, Complex{}, Complex{}}; }

inline void axpy(double a, const double& x, double& y) { y += a * x; }
inline void axpy(double a, const Complex& x, Complex& y) { y += a * x; }
inline void axpy(double a, const Vec3& x, Vec3& y) {
  for (int c = 0; c < 3; ++c) y[c] += a * x[c];
}
inline void axpy(double a, const Spinor4& x, Spinor4& y) {
  for (int c = 0; c < 4; ++c) y[c] += a * x[c];
}

inline void scale(double a, double& y) { y *= a; }
inline void scale(double a, Complex& y) { y *= a; }
inline void scale(double a, Vec3& y) {
  for (int c = 0; c < 3; ++c) y[c] *= a;
}
inline void scale(double a, Spinor4& y) {
  for (int c = 0; c < 4; ++c) y[c] *= a;
}

}  // namespace detail

/// Grid snapshot of a node-valued function at one time. Immutable by
/// convention once handed to diagnostics; construction/assembly mutates.
template <class T>
class Field {
public:
  Field(GridSpec grid, double time)
      : grid_(std::move(grid)), t_(time),
        values_(static_cast<std::size_t>(grid_.node_count()), detail::zero_value<T>()) {}

  const GridSpec& grid() const { return grid_; }
  double time() const { return t_; }
  void set_time(double t) { t_ = t; }

  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  T& operator[](std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
  const T& operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

  bool all_finite() const {
    for (const auto& v : values_)
      if (!detail::finite(v)) return false;
    return true;
  }

  /// First node holding a non-finite value, or -1.
  std::int64_t first_bad_node() const {
    for (std::int64_t i = 0; i < size(); ++i)
      if (!detail::finite(values_[static_cast<std::size_t>(i)])) return i;
    return -1;
  }

  Field& operator+=(const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) detail::axpy(1.0, o.values_[i], values_[i]);
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) detail::axpy(-1.0, o.values_[i], values_[i]);
    return *this;
  }
  Field& operator*=(double a) {
    for (auto& v : values_) detail::scale(a, v);
    return *this;
  }
  /// this += a * other
  void add_scaled(double a, const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < values_.size(); ++i) detail::axpy(a, o.values_[i], values_[i]);
  }

  void require_same_grid(const Field& o) const {
    if (grid_ != o.grid_) throw std::invalid_argument("Field: grid mismatch");
  }

private:
  GridSpec grid_;
  double t_;
  std::vector<T> values_;
};

using ScalarField = Field<double>;
using ComplexField = Field<Complex>;
using Vec3Field = Field<Vec3>;
using SpinorField = Field<Spinor4>;

/// Node-wise evaluation of a closed-form function. Rejects non-finite
/// samples, naming the offending node.
template <class T, class F>
Field<T> sample(const GridSpec& grid, double time, F&& fn) {
  Field<T> out(grid, time);
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const auto p = grid.point_of(i);
    out[i] = fn(p);
    if (!detail::finite(out[i]))
      throw std::domain_error("sample: non-finite value at node " + std::to_string(i) + " (x=" +
                              std::to_string(p[0]) + "," + std::to_string(p[1]) + "," +
                              std::to_string(p[2]) + ")");
  }
  return out;
}

inline ScalarField sample_scalar(const GridSpec& g, double t,
                                 const std::function<double(const Vec3&)>& f) {
  return sample<double>(g, t, f);
}
inline Vec3Field sample_vec3(const GridSpec& g, double t,
                             const std::function<Vec3(const Vec3&)>& f) {
  return sample<Vec3>(g, t, f);
}
inline SpinorField sample_spinor(const GridSpec& g, double t,
                                 const std::function<Spinor4(const Vec3&)>& f) {
  return sample<Spinor4>(g, t, f);
}

}  // namespace wkg
