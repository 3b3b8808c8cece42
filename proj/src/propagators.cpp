#include "wkg/propagators.hpp"

#include <cmath>
#include <stdexcept>

namespace wkg {

namespace {

// sin(t w)/w with the w -> 0 limit t
inline double sinc_t(double t, double w) {
  if (w == 0.0) return t;
  return std::sin(t * w) / w;
}

// rotate a scalar Cauchy pair mode-wise with frequency w(k)
ScalarPair rotate_pair_box(const ScalarPair& s, double dt, bool massive) {
  auto& eng = SpectralBox3d::shared(s.u.grid());
  auto su = eng.to_spectrum(s.u);
  auto sut = eng.to_spectrum(s.ut);
  eng.for_each_mode([&](std::int64_t i, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double w = std::sqrt(massive ? 1.0 + k2 : k2);
    const double c = std::cos(dt * w);
    const double sc = sinc_t(dt, w);
    const auto u0 = su[static_cast<std::size_t>(i)];
    const auto v0 = sut[static_cast<std::size_t>(i)];
    su[static_cast<std::size_t>(i)] = c * u0 + sc * v0;
    sut[static_cast<std::size_t>(i)] = -w * std::sin(dt * w) * u0 + c * v0;
  });
  ScalarPair out(eng.to_field_real(su, s.time() + dt), eng.to_field_real(sut, s.time() + dt));
  return out;
}

ScalarPair rotate_pair_radial(const ScalarPair& s, double dt, bool massive) {
  auto& eng = RadialLine::shared(s.u.grid());
  const auto& g = s.u.grid();
  const std::int64_t n = g.points_per_axis();
  RadialLine::RBuf w(static_cast<std::size_t>(n)), wt(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    const double r = g.radius_of(j);
    w[static_cast<std::size_t>(j)] = r * s.u[j];
    wt[static_cast<std::size_t>(j)] = r * s.ut[j];
  }
  eng.forward(w);
  eng.forward(wt);
  for (std::int64_t m = 0; m < n; ++m) {
    const double kap = eng.kappa(m);
    const double om = std::sqrt(massive ? 1.0 + kap * kap : kap * kap);
    const double c = std::cos(dt * om);
    const double sc = sinc_t(dt, om);
    const double a = w[static_cast<std::size_t>(m)];
    const double b = wt[static_cast<std::size_t>(m)];
    w[static_cast<std::size_t>(m)] = c * a + sc * b;
    wt[static_cast<std::size_t>(m)] = -om * std::sin(dt * om) * a + c * b;
  }
  eng.backward(w);
  eng.backward(wt);
  const double inv = 1.0 / (2.0 * static_cast<double>(n));
  ScalarField u(g, s.time() + dt), ut(g, s.time() + dt);
  for (std::int64_t j = 0; j < n; ++j) {
    const double r = g.radius_of(j);
    u[j] = w[static_cast<std::size_t>(j)] * inv / r;
    ut[j] = wt[static_cast<std::size_t>(j)] * inv / r;
  }
  return ScalarPair(std::move(u), std::move(ut));
}

}  // namespace

ScalarPair propagate_wave(const ScalarPair& s, double dt) { return rotate_pair_box(s, dt, false); }
ScalarPair propagate_kg(const ScalarPair& s, double dt) { return rotate_pair_box(s, dt, true); }
ScalarPair propagate_wave_radial(const ScalarPair& s, double dt) {
  return rotate_pair_radial(s, dt, false);
}
ScalarPair propagate_kg_radial(const ScalarPair& s, double dt) {
  return rotate_pair_radial(s, dt, true);
}

ScalarPair propagate(PropagatorKind kind, const ScalarPair& s, double dt) {
  const bool radial = s.u.grid().kind() == GridKind::RadialLine1d;
  switch (kind) {
    case PropagatorKind::WaveSW:
      return radial ? propagate_wave_radial(s, dt) : propagate_wave(s, dt);
    case PropagatorKind::KleinGordonSKG:
      return radial ? propagate_kg_radial(s, dt) : propagate_kg(s, dt);
    case PropagatorKind::DiracExpD:
      throw std::invalid_argument("propagate: Dirac kind needs a spinor state");
  }
  throw std::logic_error("propagate: unreachable");
}

SpinorField propagate_dirac(const SpinorField& psi, double dt, const GammaSet& g, double mass) {
  auto& eng = SpectralBox3d::shared(psi.grid());
  const std::int64_t nn = eng.nodes();
  std::array<SpectralBox3d::CBuf, 4> spec;
  for (int c = 0; c < 4; ++c) spec[static_cast<std::size_t>(c)] = eng.to_spectrum_component(psi, c);

  // constant matrices gamma^0 gamma^a and gamma^0 in dense form
  std::array<Mat4c, 3> ga;
  for (int a = 0; a < 3; ++a) ga[static_cast<std::size_t>(a)] = g.gamma0_gamma(a + 1);
  const Mat4c g0 = g.gamma(0);

  eng.for_each_mode_odd([&](std::int64_t i, double kx, double ky, double kz) {
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double w = std::sqrt(k2 + mass * mass);
    const double c = std::cos(dt * w);
    const double sc = sinc_t(dt, w);  // sin(dt w)/w, limit dt at w=0
    Vec4c v;
    for (int cidx = 0; cidx < 4; ++cidx)
      v(cidx) = spec[static_cast<std::size_t>(cidx)][static_cast<std::size_t>(i)];
    // H(k) v = (kx ga1 + ky ga2 + kz ga3 + m g0) v
    Vec4c hv = kx * (ga[0] * v) + ky * (ga[1] * v) + kz * (ga[2] * v);
    if (mass != 0.0) hv += mass * (g0 * v);
    const Vec4c out = c * v - Complex(0.0, 1.0) * sc * hv;
    for (int cidx = 0; cidx < 4; ++cidx)
      spec[static_cast<std::size_t>(cidx)][static_cast<std::size_t>(i)] = out(cidx);
  });

  SpinorField out(psi.grid(), psi.time() + dt);
  const double inv = 1.0 / static_cast<double>(nn);
  for (int c = 0; c < 4; ++c) {
    eng.backward(spec[static_cast<std::size_t>(c)]);
    for (std::int64_t i = 0; i < nn; ++i)
      out[i][static_cast<std::size_t>(c)] = spec[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] * inv;
  }
  return out;
}

SpinorPair propagate_wave(const SpinorPair& s, double dt) {
  auto& eng = SpectralBox3d::shared(s.u.grid());
  const std::int64_t nn = eng.nodes();
  SpinorField u(s.u.grid(), s.time() + dt), ut(s.u.grid(), s.time() + dt);
  for (int c = 0; c < 4; ++c) {
    auto su = eng.to_spectrum_component(s.u, c);
    auto sut = eng.to_spectrum_component(s.ut, c);
    eng.for_each_mode([&](std::int64_t i, double kx, double ky, double kz) {
      const double w = std::sqrt(kx * kx + ky * ky + kz * kz);
      const double co = std::cos(dt * w);
      const double sc = sinc_t(dt, w);
      const auto a = su[static_cast<std::size_t>(i)];
      const auto b = sut[static_cast<std::size_t>(i)];
      su[static_cast<std::size_t>(i)] = co * a + sc * b;
      sut[static_cast<std::size_t>(i)] = -w * std::sin(dt * w) * a + co * b;
    });
    eng.backward(su);
    eng.backward(sut);
    const double inv = 1.0 / static_cast<double>(nn);
    for (std::int64_t i = 0; i < nn; ++i) {
      u[i][static_cast<std::size_t>(c)] = su[static_cast<std::size_t>(i)] * inv;
      ut[i][static_cast<std::size_t>(c)] = sut[static_cast<std::size_t>(i)] * inv;
    }
  }
  return SpinorPair(std::move(u), std::move(ut));
}

}  // namespace wkg
