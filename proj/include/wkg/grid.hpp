#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wkg {

enum class GridKind : std::uint8_t {
  PeriodicBox3d = 0,
  RadialLine1d = 1,
};

/// Uniform origin-centered grid. Two kinds:
///   - periodic box [-L, L)^3 with n nodes per axis, spacing h = 2L/n
///   - radial half-line with cell-centered nodes r_j = (j + 1/2) h,
///     j = 0..n-1, outer edge R = n*h = L (no node at r = 0)
///
/// The spectral box accepts {2,3}-smooth n (96 = 2^5 * 3 included), which
/// keeps the FFTs fast and the 2/3-rule cut an integer.
class GridSpec {
public:
  GridSpec(GridKind kind, double extent, std::int64_t points_per_axis)
      : kind_(kind), extent_(extent), n_(points_per_axis) {
    if (extent <= 0.0) throw std::invalid_argument("GridSpec: extent must be positive");
    if (n_ <= 0) throw std::invalid_argument("GridSpec: points-per-axis must be positive");
    if (kind == GridKind::PeriodicBox3d) {
      std::int64_t m = n_;
      while (m % 2 == 0) m /= 2;
      while (m % 3 == 0) m /= 3;
      if (m != 1 || n_ < 4)
        throw std::invalid_argument(
            "GridSpec: 3d box needs points per axis with prime factors 2 and 3 only");
    }
    h_ = (kind == GridKind::PeriodicBox3d) ? 2.0 * extent_ / static_cast<double>(n_)
                                           : extent_ / static_cast<double>(n_);
  }

  static GridSpec box3d(double half_width, std::int64_t n) {
    return GridSpec(GridKind::PeriodicBox3d, half_width, n);
  }
  static GridSpec radial(double radius, std::int64_t n) {
    return GridSpec(GridKind::RadialLine1d, radius, n);
  }

  GridKind kind() const { return kind_; }
  double extent() const { return extent_; }
  double spacing() const { return h_; }
  std::int64_t points_per_axis() const { return n_; }

  std::int64_t node_count() const {
    return kind_ == GridKind::PeriodicBox3d ? n_ * n_ * n_ : n_;
  }

  /// Cell volume element: h^3 on the box, 4*pi*r^2*h on the radial line
  /// (radial fields represent spherically symmetric 3d functions, so all
  /// norms carry the 3d measure).
  double cell_measure(std::int64_t idx) const {
    if (kind_ == GridKind::PeriodicBox3d) return h_ * h_ * h_;
    const double r = radius_of(idx);
    return 4.0 * M_PI * r * r * h_;
  }

  /// Box node coordinate along one axis; index wraps row-major (x fastest).
  double coord(std::int64_t axis_index) const {
    return -extent_ + static_cast<double>(axis_index) * h_;
  }

  std::array<double, 3> point_of(std::int64_t idx) const {
    if (kind_ == GridKind::RadialLine1d) return {radius_of(idx), 0.0, 0.0};
    const std::int64_t i = idx % n_;
    const std::int64_t j = (idx / n_) % n_;
    const std::int64_t k = idx / (n_ * n_);
    return {coord(i), coord(j), coord(k)};
  }

  double radius_of(std::int64_t idx) const {
    if (kind_ == GridKind::RadialLine1d)
      return (static_cast<double>(idx) + 0.5) * h_;
    const auto p = point_of(idx);
    return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  }

  std::int64_t index_of(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return i + n_ * (j + n_ * k);
  }

  bool operator==(const GridSpec& o) const {
    return kind_ == o.kind_ && extent_ == o.extent_ && n_ == o.n_;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

  std::string describe() const {
    return kind_ == GridKind::PeriodicBox3d
               ? "box3d(L=" + std::to_string(extent_) + ", n=" + std::to_string(n_) + ")"
               : "radial(R=" + std::to_string(extent_) + ", n=" + std::to_string(n_) + ")";
  }

private:
  GridKind kind_;
  double extent_;
  std::int64_t n_;
  double h_;
};

}  // namespace wkg
