#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace wkg {

namespace jet_detail {

// multi-indices over 4 variables (t, x1, x2, x3) with total order <= 3,
// graded order: 1 + 4 + 10 + 20 = 35 entries
constexpr int kCoeffs = 35;

struct MultiIndex {
  std::array<int, 4> a;
  int order() const { return a[0] + a[1] + a[2] + a[3]; }
};

constexpr std::array<MultiIndex, kCoeffs> build_indices() {
  std::array<MultiIndex, kCoeffs> out{};
  int pos = 0;
  for (int ord = 0; ord <= 3; ++ord)
    for (int i0 = ord; i0 >= 0; --i0)
      for (int i1 = ord - i0; i1 >= 0; --i1)
        for (int i2 = ord - i0 - i1; i2 >= 0; --i2) {
          const int i3 = ord - i0 - i1 - i2;
          out[static_cast<std::size_t>(pos++)] = MultiIndex{{i0, i1, i2, i3}};
        }
  return out;
}

constexpr std::array<MultiIndex, kCoeffs> kIndex = build_indices();

constexpr int index_of(int a0, int a1, int a2, int a3) {
  for (int i = 0; i < kCoeffs; ++i) {
    if (kIndex[static_cast<std::size_t>(i)].a[0] == a0 &&
        kIndex[static_cast<std::size_t>(i)].a[1] == a1 &&
        kIndex[static_cast<std::size_t>(i)].a[2] == a2 &&
        kIndex[static_cast<std::size_t>(i)].a[3] == a3)
      return i;
  }
  return -1;
}

constexpr double factorial(int n) { return n <= 1 ? 1.0 : static_cast<double>(n) * factorial(n - 1); }

// product table: for each pair (i, j) with compatible orders, the target slot
struct ProductEntry {
  std::int16_t i, j, k;
};

}  // namespace jet_detail

/// Truncated Taylor expansion of a smooth function of (t, x1, x2, x3) at a
/// point, to total derivative order <= 3. `ord` tracks how many orders of
/// the stored coefficients are valid; every operation propagates it, and
/// derivative extraction lowers it by one. Coefficients are scaled Taylor
/// coefficients: c_alpha = d^alpha f / alpha!.
template <class S>
class JetT {
public:
  using Scalar = S;

  JetT() : ord_(3) { c_.fill(S{}); }

  static JetT constant(S v, int ord = 3) {
    JetT j;
    j.ord_ = ord;
    j.c_[0] = v;
    return j;
  }

  /// Coordinate function #axis (0 = t) seeded at the given value.
  static JetT variable(int axis, double value, int ord = 3) {
    JetT j = constant(S(value), ord);
    if (ord >= 1) {
      const int slot = axis == 0   ? jet_detail::index_of(1, 0, 0, 0)
                       : axis == 1 ? jet_detail::index_of(0, 1, 0, 0)
                       : axis == 2 ? jet_detail::index_of(0, 0, 1, 0)
                                   : jet_detail::index_of(0, 0, 0, 1);
      j.c_[static_cast<std::size_t>(slot)] = S(1.0);
    }
    return j;
  }

  int order() const { return ord_; }
  S value() const { return c_[0]; }

  /// d f / d x_mu as a jet one order lower.
  JetT derivative(int mu) const {
    if (ord_ < 1) throw std::logic_error("JetT: derivative exhausts the jet order");
    JetT out;
    out.ord_ = ord_ - 1;
    out.c_.fill(S{});
    for (int i = 0; i < jet_detail::kCoeffs; ++i) {
      const auto& mi = jet_detail::kIndex[static_cast<std::size_t>(i)];
      if (mi.order() > out.ord_) continue;
      std::array<int, 4> up = mi.a;
      up[static_cast<std::size_t>(mu)] += 1;
      const int src = jet_detail::index_of(up[0], up[1], up[2], up[3]);
      // c_alpha(df/dmu) = (alpha_mu + 1) c_{alpha+e_mu}(f)
      out.c_[static_cast<std::size_t>(i)] =
          S(static_cast<double>(up[static_cast<std::size_t>(mu)])) * c_[static_cast<std::size_t>(src)];
    }
    return out;
  }

  JetT operator+(const JetT& o) const {
    JetT out = *this;
    out.ord_ = std::min(ord_, o.ord_);
    for (int i = 0; i < jet_detail::kCoeffs; ++i)
      out.c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
    return out;
  }
  JetT operator-(const JetT& o) const {
    JetT out = *this;
    out.ord_ = std::min(ord_, o.ord_);
    for (int i = 0; i < jet_detail::kCoeffs; ++i)
      out.c_[static_cast<std::size_t>(i)] -= o.c_[static_cast<std::size_t>(i)];
    return out;
  }
  JetT operator-() const {
    JetT out = *this;
    for (auto& v : out.c_) v = -v;
    return out;
  }

  JetT operator*(const JetT& o) const {
    JetT out;
    out.ord_ = std::min(ord_, o.ord_);
    out.c_.fill(S{});
    for (int i = 0; i < jet_detail::kCoeffs; ++i) {
      const auto& mi = jet_detail::kIndex[static_cast<std::size_t>(i)];
      if (mi.order() > out.ord_ || c_[static_cast<std::size_t>(i)] == S{}) continue;
      for (int j = 0; j < jet_detail::kCoeffs; ++j) {
        const auto& mj = jet_detail::kIndex[static_cast<std::size_t>(j)];
        if (mi.order() + mj.order() > out.ord_) continue;
        const int k = jet_detail::index_of(mi.a[0] + mj.a[0], mi.a[1] + mj.a[1],
                                           mi.a[2] + mj.a[2], mi.a[3] + mj.a[3]);
        out.c_[static_cast<std::size_t>(k)] +=
            c_[static_cast<std::size_t>(i)] * o.c_[static_cast<std::size_t>(j)];
      }
    }
    return out;
  }

  JetT operator*(S s) const {
    JetT out = *this;
    for (auto& v : out.c_) v *= s;
    return out;
  }
  JetT operator+(S s) const {
    JetT out = *this;
    out.c_[0] += s;
    return out;
  }
  JetT operator-(S s) const { return *this + (-s); }

  friend JetT operator*(S s, const JetT& j) { return j * s; }
  friend JetT operator+(S s, const JetT& j) { return j + s; }
  friend JetT operator-(S s, const JetT& j) { return (-j) + s; }

  /// Compose with a univariate analytic function given its derivatives at
  /// value(): f(u0), f'(u0), f''(u0), f'''(u0).
  JetT compose(S f0, S f1, S f2, S f3) const {
    JetT tilde = *this;
    tilde.c_[0] = S{};
    const JetT t2 = tilde * tilde;
    const JetT t3 = t2 * tilde;
    JetT out = tilde * f1 + t2 * (f2 / S(2.0)) + t3 * (f3 / S(6.0));
    out.c_[0] += f0;
    out.ord_ = ord_;
    return out;
  }

  /// Raw derivative d^alpha f for |alpha| <= ord.
  S deriv(int a0, int a1, int a2, int a3) const {
    const int idx = jet_detail::index_of(a0, a1, a2, a3);
    if (idx < 0 || a0 + a1 + a2 + a3 > ord_)
      throw std::logic_error("JetT: derivative order exceeds jet validity");
    const double fact = jet_detail::factorial(a0) * jet_detail::factorial(a1) *
                        jet_detail::factorial(a2) * jet_detail::factorial(a3);
    return c_[static_cast<std::size_t>(idx)] * S(fact);
  }

private:
  int ord_;
  std::array<S, jet_detail::kCoeffs> c_;
};

using Jet = JetT<double>;
using CJet = JetT<std::complex<double>>;

inline Jet jet_exp(const Jet& u) {
  const double e = std::exp(u.value());
  return u.compose(e, e, e, e);
}
inline Jet jet_sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose(s, c, -s, -c);
}
inline Jet jet_cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose(c, -s, -c, s);
}
inline Jet jet_sqrt(const Jet& u) {
  const double r = std::sqrt(u.value());
  if (r == 0.0) throw std::domain_error("jet_sqrt at zero");
  return u.compose(r, 0.5 / r, -0.25 / (r * r * r), 0.375 / (r * r * r * r * r));
}
inline Jet jet_inv(const Jet& u) {
  const double v = u.value();
  if (v == 0.0) throw std::domain_error("jet_inv at zero");
  return u.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v), -6.0 / (v * v * v * v));
}

inline CJet cjet_exp(const CJet& u) {
  const std::complex<double> e = std::exp(u.value());
  return u.compose(e, e, e, e);
}

}  // namespace wkg
