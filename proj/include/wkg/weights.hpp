#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkg {

/// Japanese bracket <p> = sqrt(1 + p^2).
inline double jbracket(double p) { return std::sqrt(1.0 + p * p); }

/// C^1 cut-off: 0 on (-inf,1], 1 on [2,inf), nondecreasing in between.
/// Realized as the cubic smoothstep s^2 (3 - 2 s), s = clamp(x-1, 0, 1).
inline double chi_cutoff(double x) {
  const double s = std::fmin(std::fmax(x - 1.0, 0.0), 1.0);
  return s * s * (3.0 - 2.0 * s);
}
inline double chi_cutoff_prime(double x) {
  const double s = std::fmin(std::fmax(x - 1.0, 0.0), 1.0);
  return 6.0 * s * (1.0 - s);
}

/// Alinhac ghost weight
///     q(rho; delta) = int_{-inf}^{rho} <s>^{-1-2 delta} ds,
/// evaluated through a precomputed table in u = asinh(rho) with cubic
/// Hermite interpolation driven by the exact slope dq/du (positive, so the
/// interpolant is monotone). The substitution s = sinh(u) turns the
/// integrand into cosh(u)^{-2 delta}, whose tails decay like
/// exp(-2 delta |u|), so a finite u-range captures q to below 1e-12;
/// composite Simpson on the table grid keeps the absolute error <= 1e-10.
/// q is nonnegative, increasing and bounded; exp(q) is the energy weight.
class GhostWeightTable {
public:
  explicit GhostWeightTable(double delta) : delta_(delta) {
    if (delta <= 0.0) throw std::invalid_argument("GhostWeightTable: delta must be > 0");
    build();
  }

  double delta() const { return delta_; }
  double q_infinity() const { return q_.back(); }

  double q(double rho) const {
    const double u = std::asinh(rho);
    if (u <= u_[0]) return tail_below(u);
    if (u >= u_.back()) return q_.back() - tail_above(u);
    // locate interval (uniform grid in u)
    const double s = (u - u_[0]) / du_;
    std::size_t i = static_cast<std::size_t>(s);
    if (i >= u_.size() - 1) i = u_.size() - 2;
    const double x = (u - u_[i]) / du_;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
    const double h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x);
    const double h11 = x * x * (x - 1);
    return h00 * q_[i] + h10 * du_ * m_[i] + h01 * q_[i + 1] + h11 * du_ * m_[i + 1];
  }

  /// q'(rho) = <rho>^{-1-2 delta}, exact closed form.
  double q_prime(double rho) const {
    return std::pow(1.0 + rho * rho, -0.5 * (1.0 + 2.0 * delta_));
  }

  double exp_q(double rho) const { return std::exp(q(rho)); }

  /// Process-wide cache keyed by delta; tables are immutable once built.
  static const GhostWeightTable& shared(double delta) {
    static std::map<double, std::unique_ptr<GhostWeightTable>> cache;
    auto it = cache.find(delta);
    if (it == cache.end())
      it = cache.emplace(delta, std::make_unique<GhostWeightTable>(delta)).first;
    return *it->second;
  }

private:
  // integrand in u: d q / d u = cosh(u)^{-2 delta}
  double g(double u) const { return std::pow(std::cosh(u), -2.0 * delta_); }

  // tail of int cosh^{-2d} below u (u << -1): cosh(u) ~ e^{|u|}/2
  double tail_below(double u) const {
    return std::pow(2.0, 2.0 * delta_) * std::exp(2.0 * delta_ * u) / (2.0 * delta_);
  }
  double tail_above(double u) const {
    return std::pow(2.0, 2.0 * delta_) * std::exp(-2.0 * delta_ * u) / (2.0 * delta_);
  }

  void build() {
    // u range so the truncated tails stay below 1e-13
    const double umax = std::fmax(200.0, 32.0 / delta_);
    const std::size_t n = 1 << 17;  // 131073 nodes; Simpson error ~ du^4, well under 1e-10
    du_ = 2.0 * umax / static_cast<double>(n);
    u_.resize(n + 1);
    q_.resize(n + 1);
    m_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) u_[i] = -umax + du_ * static_cast<double>(i);
    // cumulative composite Simpson on pairs of intervals
    q_[0] = tail_below(-umax);
    for (std::size_t i = 0; i + 2 <= n; i += 2) {
      const double s =
          du_ / 3.0 * (g(u_[i]) + 4.0 * g(u_[i] + du_) + g(u_[i] + 2.0 * du_));
      // midpoint value via half-interval Simpson to keep all nodes filled
      const double smid = du_ / 6.0 * (g(u_[i]) + 4.0 * g(u_[i] + 0.5 * du_) + g(u_[i] + du_));
      q_[i + 1] = q_[i] + smid;
      q_[i + 2] = q_[i] + s;
    }
    for (std::size_t i = 0; i <= n; ++i) m_[i] = g(u_[i]);  // exact slope dq/du
  }

  double delta_;
  double du_ = 0.0;
  std::vector<double> u_, q_, m_;
};

enum class WeightKind {
  BracketTPlusR,   // <t + r>
  BracketTMinusR,  // <t - r>
  GhostQ,          // q(r - t; delta), use exp() of it for energy weights
  ChiExterior,     // chi(r - 2 t + shift)
};

/// Pointwise scalar weight w(t, r) used by weighted norms and decay
/// statistics. Profiles are finite and nonnegative on their domain.
class WeightProfile {
public:
  static WeightProfile bracket_t_plus_r() { return WeightProfile(WeightKind::BracketTPlusR); }
  static WeightProfile bracket_t_minus_r() { return WeightProfile(WeightKind::BracketTMinusR); }
  static WeightProfile ghost_q(double delta) {
    WeightProfile w(WeightKind::GhostQ);
    w.delta_ = delta;
    return w;
  }
  static WeightProfile chi_exterior(double shift = 0.0) {
    WeightProfile w(WeightKind::ChiExterior);
    w.shift_ = shift;
    return w;
  }

  WeightKind kind() const { return kind_; }
  double delta() const { return delta_; }

  double value(double t, double r) const {
    switch (kind_) {
      case WeightKind::BracketTPlusR: return jbracket(t + r);
      case WeightKind::BracketTMinusR: return jbracket(t - r);
      case WeightKind::GhostQ: return GhostWeightTable::shared(delta_).q(r - t);
      case WeightKind::ChiExterior: return chi_cutoff(r - 2.0 * t + shift_);
    }
    return 0.0;
  }

private:
  explicit WeightProfile(WeightKind k) : kind_(k) {}
  WeightKind kind_;
  double delta_ = 0.05;
  double shift_ = 0.0;
};

}  // namespace wkg
