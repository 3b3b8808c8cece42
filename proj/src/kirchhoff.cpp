#include "wkg/kirchhoff.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "wkg/fourier.hpp"

namespace wkg {

namespace {

struct GaussRule {
  std::vector<double> node;    // in (-1, 1)
  std::vector<double> weight;  // sums to 2
};

// Legendre roots by Newton iteration from the Chebyshev initial guess.
GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.node.resize(static_cast<std::size_t>(n));
  r.weight.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.node[static_cast<std::size_t>(i)] = x;
    r.weight[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const GaussRule& cached_rule(int n) {
  static std::map<int, GaussRule> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

double kirchhoff_eval(const ClosedFormWave& data, double t, const Vec3& x, int n_theta,
                      int n_phi) {
  if (t < data.t0) throw std::invalid_argument("kirchhoff_eval: t must be >= t0");
  const double tau = t - data.t0;
  const auto& rule = cached_rule(n_theta);
  const double dphi = 2.0 * M_PI / static_cast<double>(n_phi);

  double mean_u0 = 0.0, mean_du0 = 0.0, mean_u1 = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double c = rule.node[static_cast<std::size_t>(i)];  // cos(theta)
    const double s = std::sqrt(std::fmax(0.0, 1.0 - c * c));
    const double w = rule.weight[static_cast<std::size_t>(i)] * dphi;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = dphi * (static_cast<double>(j) + 0.5);
      const Vec3 xi = {s * std::cos(phi), s * std::sin(phi), c};
      const Vec3 y = {x[0] + tau * xi[0], x[1] + tau * xi[1], x[2] + tau * xi[2]};
      mean_u0 += w * data.u0(y);
      const Vec3 gy = data.grad_u0(y);
      mean_du0 += w * (gy[0] * xi[0] + gy[1] * xi[1] + gy[2] * xi[2]);
      mean_u1 += w * data.u1(y);
    }
  }
  const double inv4pi = 1.0 / (4.0 * M_PI);
  return inv4pi * (mean_u0 + tau * mean_du0 + tau * mean_u1);
}

double kirchhoff_eval_checked(const ClosedFormWave& data, double t, const Vec3& x, double tol,
                              int n_theta, int n_phi) {
  const double coarse = kirchhoff_eval(data, t, x, n_theta, n_phi);
  const double fine = kirchhoff_eval(data, t, x, 2 * n_theta, 2 * n_phi);
  if (std::abs(fine - coarse) > tol)
    throw std::runtime_error("kirchhoff_eval: quadrature did not converge to tolerance");
  return fine;
}

PositivityVerdict positivity_certificate(const WaveData& data) {
  const auto& g = data.u0.grid();
  std::vector<double> grad_norm(static_cast<std::size_t>(g.node_count()), 0.0);
  if (g.kind() == GridKind::PeriodicBox3d) {
    auto& eng = SpectralBox3d::shared(g);
    for (int axis = 1; axis <= 3; ++axis) {
      const ScalarField d = eng.derivative(data.u0, axis);
      for (std::int64_t i = 0; i < g.node_count(); ++i)
        grad_norm[static_cast<std::size_t>(i)] += d[i] * d[i];
    }
  } else {
    std::vector<double> f(data.u0.values());
    const auto d = radial_d1(f, g.spacing(), RadialParity::Even);
    for (std::int64_t i = 0; i < g.node_count(); ++i)
      grad_norm[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(i)];
  }
  for (std::int64_t i = 0; i < g.node_count(); ++i) {
    if (data.u0[i] < 0.0) return {false, i};
    if (data.u1[i] < std::sqrt(grad_norm[static_cast<std::size_t>(i)])) return {false, i};
  }
  return {true, -1};
}

}  // namespace wkg
