#include "wkg/systems.hpp"

#include <cmath>

#include "wkg/norms.hpp"
#include "wkg/vector_fields.hpp"

namespace wkg {

namespace {

ScalarField laplacian_any(const ScalarField& f) {
  if (f.grid().kind() == GridKind::PeriodicBox3d)
    return SpectralBox3d::shared(f.grid()).laplacian(f);
  return RadialLine::shared(f.grid()).laplacian(f);
}

void dealias_any(ScalarField& f) {
  if (f.grid().kind() == GridKind::PeriodicBox3d) {
    SpectralBox3d::shared(f.grid()).dealias_inplace(f);
  } else {
    auto& eng = RadialLine::shared(f.grid());
    const auto& g = f.grid();
    RadialLine::RBuf w(static_cast<std::size_t>(g.points_per_axis()));
    for (std::int64_t j = 0; j < g.points_per_axis(); ++j)
      w[static_cast<std::size_t>(j)] = g.radius_of(j) * f[j];
    eng.forward(w);
    eng.dealias(w);
    eng.backward(w);
    const double inv = 1.0 / (2.0 * static_cast<double>(g.points_per_axis()));
    for (std::int64_t j = 0; j < g.points_per_axis(); ++j)
      f[j] = w[static_cast<std::size_t>(j)] * inv / g.radius_of(j);
  }
}

void dealias_any(Vec3Field& f) {
  for (int c = 0; c < 3; ++c) {
    ScalarField comp(f.grid(), f.time());
    for (std::int64_t i = 0; i < f.size(); ++i) comp[i] = f[i][static_cast<std::size_t>(c)];
    dealias_any(comp);
    for (std::int64_t i = 0; i < f.size(); ++i) f[i][static_cast<std::size_t>(c)] = comp[i];
  }
}

void dealias_spinor(SpinorField& f) {
  if (f.grid().kind() == GridKind::PeriodicBox3d)
    SpectralBox3d::shared(f.grid()).dealias_inplace(f);
}

ScalarField e_squared(const Vec3Field& e) {
  ScalarField out(e.grid(), e.time());
  for (std::int64_t i = 0; i < e.size(); ++i) out[i] = detail::abs2(e[i]);
  return out;
}

ScalarField dirac_density_field(const SpinorField& psi, const GammaSet& g) {
  ScalarField out(psi.grid(), psi.time());
  for (std::int64_t i = 0; i < psi.size(); ++i) out[i] = dirac_density(g, psi[i]);
  return out;
}

}  // namespace

KGZState KGZState::make(Vec3Field E0, Vec3Field E1, ScalarField n0d, ScalarField n1d) {
  const GridSpec g = E0.grid();
  KGZState s{std::move(E0), std::move(E1), std::move(n0d), std::move(n1d),
             ScalarField(g, 0.0), ScalarField(g, 0.0), 0.0};
  s.E.require_same_grid(s.Et);
  s.n0.require_same_grid(s.n0t);
  return s;
}

void KGZState::check_finite() const {
  if (!E.all_finite() || !Et.all_finite() || !n0.all_finite() || !n0t.all_finite() ||
      !n1.all_finite() || !n1t.all_finite())
    throw BlowUpError(t);
}

DKGState DKGState::make(SpinorField psi0, ScalarField v0, ScalarField v1, const GammaSet& g) {
  const GridSpec gr = psi0.grid();
  // Psi data (0, -i gamma^0 psi0) makes i gamma^mu d_mu Psi = psi hold
  SpinorField Psit0(gr, 0.0);
  const Mat4c m = Complex(0.0, -1.0) * g.gamma(0);
  for (std::int64_t i = 0; i < psi0.size(); ++i) Psit0[i] = from_eigen(m * to_eigen(psi0[i]));
  DKGState s{std::move(psi0), std::move(v0), std::move(v1),
             ScalarField(gr, 0.0), ScalarField(gr, 0.0),
             SpinorField(gr, 0.0), std::move(Psit0), 0.0};
  return s;
}

void DKGState::check_finite() const {
  if (!psi.all_finite() || !V0.all_finite() || !V0t.all_finite() || !V1.all_finite() ||
      !V1t.all_finite() || !Psi.all_finite() || !Psit.all_finite())
    throw BlowUpError(t);
}

// ------------------------------------------------------------- KGZ

namespace {

// nonlinear phase over time tau: value fields frozen, derivative fields
// kicked by the (constant-in-phase) sources
void kgz_kick(KGZState& s, double tau, bool dealias) {
  ScalarField pot = s.n0;
  pot += laplacian_any(s.n1);
  Vec3Field coupled(s.E.grid(), s.t);
  for (std::int64_t i = 0; i < s.E.size(); ++i) {
    for (int c = 0; c < 3; ++c)
      coupled[i][static_cast<std::size_t>(c)] = pot[i] * s.E[i][static_cast<std::size_t>(c)];
  }
  ScalarField source = e_squared(s.E);
  if (dealias) {
    dealias_any(coupled);
    dealias_any(source);
  }
  s.Et.add_scaled(-tau, coupled);
  s.n1t.add_scaled(tau, source);
}

void kgz_drift(KGZState& s, double dt) {
  const bool radial = s.E.grid().kind() == GridKind::RadialLine1d;
  // E components: Klein-Gordon group
  for (int c = 0; c < 3; ++c) {
    ScalarField u(s.E.grid(), s.t), ut(s.E.grid(), s.t);
    for (std::int64_t i = 0; i < s.E.size(); ++i) {
      u[i] = s.E[i][static_cast<std::size_t>(c)];
      ut[i] = s.Et[i][static_cast<std::size_t>(c)];
    }
    ScalarPair p(std::move(u), std::move(ut));
    p = radial ? propagate_kg_radial(p, dt) : propagate_kg(p, dt);
    for (std::int64_t i = 0; i < s.E.size(); ++i) {
      s.E[i][static_cast<std::size_t>(c)] = p.u[i];
      s.Et[i][static_cast<std::size_t>(c)] = p.ut[i];
    }
  }
  ScalarPair p0(s.n0, s.n0t);
  p0 = radial ? propagate_wave_radial(p0, dt) : propagate_wave(p0, dt);
  s.n0 = p0.u;
  s.n0t = p0.ut;
  ScalarPair p1(s.n1, s.n1t);
  p1 = radial ? propagate_wave_radial(p1, dt) : propagate_wave(p1, dt);
  s.n1 = p1.u;
  s.n1t = p1.ut;
}

KGZState kgz_step_strang(const KGZState& s0, const IntegratorConfig& cfg) {
  KGZState s = s0;
  kgz_kick(s, 0.5 * cfg.dt, cfg.dealias);
  kgz_drift(s, cfg.dt);
  kgz_kick(s, 0.5 * cfg.dt, cfg.dealias);
  s.t = s0.t + cfg.dt;
  return s;
}

// method-of-lines right-hand side for (E, Et, n1, n1t); n0 is supplied at
// the stage time by the exact free group
struct KgzMolState {
  Vec3Field E, Et;
  ScalarField n1, n1t;
};

KgzMolState kgz_rhs(const KgzMolState& y, const ScalarField& n0_stage, bool dealias) {
  const GridSpec& g = y.E.grid();
  KgzMolState f{Vec3Field(g, 0.0), Vec3Field(g, 0.0), ScalarField(g, 0.0), ScalarField(g, 0.0)};
  f.E = y.Et;
  ScalarField pot = n0_stage;
  pot += laplacian_any(y.n1);
  Vec3Field coupling(g, 0.0);
  for (std::int64_t i = 0; i < y.E.size(); ++i)
    for (int c = 0; c < 3; ++c)
      coupling[i][static_cast<std::size_t>(c)] = pot[i] * y.E[i][static_cast<std::size_t>(c)];
  if (dealias) dealias_any(coupling);
  for (int c = 0; c < 3; ++c) {
    ScalarField u(g, 0.0);
    for (std::int64_t i = 0; i < y.E.size(); ++i) u[i] = y.E[i][static_cast<std::size_t>(c)];
    ScalarField lap = laplacian_any(u);
    for (std::int64_t i = 0; i < y.E.size(); ++i)
      f.Et[i][static_cast<std::size_t>(c)] =
          lap[i] - u[i] - coupling[i][static_cast<std::size_t>(c)];
  }
  f.n1 = y.n1t;
  f.n1t = laplacian_any(y.n1);
  ScalarField src = e_squared(y.E);
  if (dealias) dealias_any(src);
  f.n1t += src;
  return f;
}

void mol_axpy(KgzMolState& y, double a, const KgzMolState& d) {
  y.E.add_scaled(a, d.E);
  y.Et.add_scaled(a, d.Et);
  y.n1.add_scaled(a, d.n1);
  y.n1t.add_scaled(a, d.n1t);
}

KGZState kgz_step_rk4(const KGZState& s0, const IntegratorConfig& cfg) {
  const bool radial = s0.E.grid().kind() == GridKind::RadialLine1d;
  ScalarPair half(s0.n0, s0.n0t);
  half = radial ? propagate_wave_radial(half, 0.5 * cfg.dt) : propagate_wave(half, 0.5 * cfg.dt);
  ScalarPair full(s0.n0, s0.n0t);
  full = radial ? propagate_wave_radial(full, cfg.dt) : propagate_wave(full, cfg.dt);

  const KgzMolState y0{s0.E, s0.Et, s0.n1, s0.n1t};
  const auto k1 = kgz_rhs(y0, s0.n0, cfg.dealias);
  KgzMolState y = y0;
  mol_axpy(y, 0.5 * cfg.dt, k1);
  const auto k2 = kgz_rhs(y, half.u, cfg.dealias);
  y = y0;
  mol_axpy(y, 0.5 * cfg.dt, k2);
  const auto k3 = kgz_rhs(y, half.u, cfg.dealias);
  y = y0;
  mol_axpy(y, cfg.dt, k3);
  const auto k4 = kgz_rhs(y, full.u, cfg.dealias);

  KgzMolState out = y0;
  mol_axpy(out, cfg.dt / 6.0, k1);
  mol_axpy(out, cfg.dt / 3.0, k2);
  mol_axpy(out, cfg.dt / 3.0, k3);
  mol_axpy(out, cfg.dt / 6.0, k4);

  KGZState s{std::move(out.E), std::move(out.Et), full.u, full.ut,
             std::move(out.n1), std::move(out.n1t), s0.t + cfg.dt};
  return s;
}

}  // namespace

KGZState kgz_step(const KGZState& s, const IntegratorConfig& cfg) {
  cfg.validate(s.E.grid());
  KGZState out = cfg.scheme == Scheme::StrangSplitting ? kgz_step_strang(s, cfg)
                                                       : kgz_step_rk4(s, cfg);
  const double tnew = out.t;
  out.E.set_time(tnew);
  out.Et.set_time(tnew);
  out.n0.set_time(tnew);
  out.n0t.set_time(tnew);
  out.n1.set_time(tnew);
  out.n1t.set_time(tnew);
  out.check_finite();
  return out;
}

// ------------------------------------------------------------- DKG

namespace {

// nonlinear phase over tau at fixed node: v frozen, psi rotates by
// exp(i v gamma^0 tau), V1t kicked by the (phase-invariant) density, Psit
// kicked by the exact integral of v psi(s) over the phase
void dkg_kick(DKGState& s, double tau, bool dealias, const GammaSet& g) {
  ScalarField v = s.V0;
  v += s.V1;
  ScalarField density = dirac_density_field(s.psi, g);
  if (dealias) dealias_any(density);

  SpinorField psit_inc(s.psi.grid(), s.t);
  SpinorField psi_new(s.psi.grid(), s.t);
  for (std::int64_t i = 0; i < s.psi.size(); ++i) {
    const double th = v[i] * tau;
    const Complex eplus = std::polar(1.0, th);    // exp(+i v tau): upper block of exp(i v g0 tau)
    const Complex eminus = std::polar(1.0, -th);  // lower block
    const auto& p = s.psi[i];
    psi_new[i] = {eplus * p[0], eplus * p[1], eminus * p[2], eminus * p[3]};
    // v * int_0^tau exp(i v g0 s) ds = -i (exp(i v tau)-1) upper, +i (exp(-i v tau)-1) lower
    const Complex iu = Complex(0.0, -1.0) * (eplus - 1.0);
    const Complex il = Complex(0.0, 1.0) * (eminus - 1.0);
    psit_inc[i] = {iu * p[0], iu * p[1], il * p[2], il * p[3]};
  }
  if (dealias) dealias_spinor(psit_inc);
  s.psi = std::move(psi_new);
  s.V1t.add_scaled(tau, density);
  s.Psit += psit_inc;
}

void dkg_drift(DKGState& s, double dt, const IntegratorConfig& cfg, const GammaSet& g) {
  s.psi = propagate_dirac(s.psi, dt, g, cfg.dirac_mass);
  ScalarPair p0(s.V0, s.V0t);
  p0 = propagate_kg(p0, dt);
  s.V0 = p0.u;
  s.V0t = p0.ut;
  ScalarPair p1(s.V1, s.V1t);
  p1 = propagate_kg(p1, dt);
  s.V1 = p1.u;
  s.V1t = p1.ut;
  SpinorPair pw(s.Psi, s.Psit);
  pw = propagate_wave(pw, dt);
  s.Psi = pw.u;
  s.Psit = pw.ut;
}

DKGState dkg_step_strang(const DKGState& s0, const IntegratorConfig& cfg, const GammaSet& g) {
  DKGState s = s0;
  dkg_kick(s, 0.5 * cfg.dt, cfg.dealias, g);
  dkg_drift(s, cfg.dt, cfg, g);
  dkg_kick(s, 0.5 * cfg.dt, cfg.dealias, g);
  s.t = s0.t + cfg.dt;
  return s;
}

struct DkgMolState {
  SpinorField psi;
  ScalarField V1, V1t;
  SpinorField Psi, Psit;
};

// d_t psi = -i (D + m g0 - v g0) psi,   D = -i g0 g^a d_a.
// The kinetic term -i D psi reduces to -g0 g^a d_a psi; the potential
// product is dealiased separately by the caller.
SpinorField dirac_rhs(const SpinorField& psi, const ScalarField& v, const GammaSet& g,
                      double mass, bool dealias) {
  const GridSpec& gr = psi.grid();
  SpinorField out(gr, psi.time());
  for (int a = 1; a <= 3; ++a) {
    const SpinorField d = spatial_derivative(psi, a);
    const Mat4c m = -g.gamma0_gamma(a);
    for (std::int64_t i = 0; i < psi.size(); ++i) {
      const Vec4c w = m * to_eigen(d[i]);
      for (int c = 0; c < 4; ++c) out[i][static_cast<std::size_t>(c)] += w(c);
    }
  }
  const Mat4c g0 = g.gamma(0);
  SpinorField pot(gr, psi.time());
  for (std::int64_t i = 0; i < psi.size(); ++i) {
    const Vec4c p = to_eigen(psi[i]);
    const Vec4c w = Complex(0.0, -1.0) * ((mass - v[i]) * (g0 * p));
    pot[i] = from_eigen(w);
  }
  if (dealias) dealias_spinor(pot);
  out += pot;
  return out;
}

DkgMolState dkg_rhs(const DkgMolState& y, const ScalarField& v0_stage, const GammaSet& g,
                    const IntegratorConfig& cfg) {
  const GridSpec& gr = y.psi.grid();
  ScalarField v = v0_stage;
  v += y.V1;
  DkgMolState f{dirac_rhs(y.psi, v, g, cfg.dirac_mass, cfg.dealias),
                y.V1t, ScalarField(gr, 0.0),
                y.Psit, SpinorField(gr, 0.0)};
  f.V1t = laplacian_any(y.V1);
  f.V1t.add_scaled(-1.0, y.V1);
  ScalarField density = dirac_density_field(y.psi, g);
  if (cfg.dealias) dealias_any(density);
  f.V1t += density;
  // Psi'' = Lap Psi + v psi
  {
    SpinorField lap(gr, 0.0);
    auto& eng = SpectralBox3d::shared(gr);
    for (int c = 0; c < 4; ++c) {
      auto spec = eng.to_spectrum_component(y.Psi, c);
      eng.for_each_mode([&](std::int64_t i, double kx, double ky, double kz) {
        spec[static_cast<std::size_t>(i)] *= -(kx * kx + ky * ky + kz * kz);
      });
      eng.backward(spec);
      const double inv = 1.0 / static_cast<double>(eng.nodes());
      for (std::int64_t i = 0; i < lap.size(); ++i)
        lap[i][static_cast<std::size_t>(c)] = spec[static_cast<std::size_t>(i)] * inv;
    }
    SpinorField vpsi(gr, 0.0);
    for (std::int64_t i = 0; i < vpsi.size(); ++i) {
      for (int c = 0; c < 4; ++c)
        vpsi[i][static_cast<std::size_t>(c)] = v[i] * y.psi[i][static_cast<std::size_t>(c)];
    }
    if (cfg.dealias) dealias_spinor(vpsi);
    lap += vpsi;
    f.Psit = std::move(lap);
  }
  return f;
}

void mol_axpy(DkgMolState& y, double a, const DkgMolState& d) {
  y.psi.add_scaled(a, d.psi);
  y.V1.add_scaled(a, d.V1);
  y.V1t.add_scaled(a, d.V1t);
  y.Psi.add_scaled(a, d.Psi);
  y.Psit.add_scaled(a, d.Psit);
}

DKGState dkg_step_rk4(const DKGState& s0, const IntegratorConfig& cfg, const GammaSet& g) {
  ScalarPair half(s0.V0, s0.V0t);
  half = propagate_kg(half, 0.5 * cfg.dt);
  ScalarPair full(s0.V0, s0.V0t);
  full = propagate_kg(full, cfg.dt);

  const DkgMolState y0{s0.psi, s0.V1, s0.V1t, s0.Psi, s0.Psit};
  const auto k1 = dkg_rhs(y0, s0.V0, g, cfg);
  DkgMolState y = y0;
  mol_axpy(y, 0.5 * cfg.dt, k1);
  const auto k2 = dkg_rhs(y, half.u, g, cfg);
  y = y0;
  mol_axpy(y, 0.5 * cfg.dt, k2);
  const auto k3 = dkg_rhs(y, half.u, g, cfg);
  y = y0;
  mol_axpy(y, cfg.dt, k3);
  const auto k4 = dkg_rhs(y, full.u, g, cfg);

  DkgMolState out = y0;
  mol_axpy(out, cfg.dt / 6.0, k1);
  mol_axpy(out, cfg.dt / 3.0, k2);
  mol_axpy(out, cfg.dt / 3.0, k3);
  mol_axpy(out, cfg.dt / 6.0, k4);

  DKGState s{std::move(out.psi), full.u, full.ut, std::move(out.V1), std::move(out.V1t),
             std::move(out.Psi), std::move(out.Psit), s0.t + cfg.dt};
  return s;
}

}  // namespace

DKGState dkg_step(const DKGState& s, const IntegratorConfig& cfg, const GammaSet& g) {
  cfg.validate(s.psi.grid());
  if (s.psi.grid().kind() != GridKind::PeriodicBox3d)
    throw std::invalid_argument("dkg_step: spinor dynamics run on the 3d box");
  DKGState out = cfg.scheme == Scheme::StrangSplitting ? dkg_step_strang(s, cfg, g)
                                                       : dkg_step_rk4(s, cfg, g);
  const double tnew = out.t;
  out.psi.set_time(tnew);
  out.V0.set_time(tnew);
  out.V0t.set_time(tnew);
  out.V1.set_time(tnew);
  out.V1t.set_time(tnew);
  out.Psi.set_time(tnew);
  out.Psit.set_time(tnew);
  out.check_finite();
  return out;
}

// ------------------------------------------------------------- composites

ScalarField reconstruct_n(const KGZState& s) {
  ScalarField n = s.n0;
  n += laplacian_any(s.n1);
  return n;
}

ScalarField reconstruct_nt(const KGZState& s) {
  ScalarField nt = s.n0t;
  nt += laplacian_any(s.n1t);
  return nt;
}

ScalarField reconstruct_v(const DKGState& s) {
  ScalarField v = s.V0;
  v += s.V1;
  return v;
}

ScalarField reconstruct_vt(const DKGState& s) {
  ScalarField vt = s.V0t;
  vt += s.V1t;
  return vt;
}

// ------------------------------------------------------- identities

namespace {

SpinorField spinor_lap(const SpinorField& f) {
  auto& eng = SpectralBox3d::shared(f.grid());
  SpinorField out(f.grid(), f.time());
  for (int c = 0; c < 4; ++c) {
    auto spec = eng.to_spectrum_component(f, c);
    eng.for_each_mode([&](std::int64_t i, double kx, double ky, double kz) {
      spec[static_cast<std::size_t>(i)] *= -(kx * kx + ky * ky + kz * kz);
    });
    eng.backward(spec);
    const double inv = 1.0 / static_cast<double>(eng.nodes());
    for (std::int64_t i = 0; i < f.size(); ++i)
      out[i][static_cast<std::size_t>(c)] = spec[static_cast<std::size_t>(i)] * inv;
  }
  return out;
}

double spinor_l2(const SpinorField& f) { return l2_norm(f); }

SpinorField scalar_times_spinor(const ScalarField& a, const SpinorField& f) {
  SpinorField out(f.grid(), f.time());
  for (std::int64_t i = 0; i < f.size(); ++i)
    for (int c = 0; c < 4; ++c)
      out[i][static_cast<std::size_t>(c)] = a[i] * f[i][static_cast<std::size_t>(c)];
  return out;
}

SpinorField matrix_times_spinor(const Mat4c& m, const SpinorField& f) {
  SpinorField out(f.grid(), f.time());
  for (std::int64_t i = 0; i < f.size(); ++i) out[i] = from_eigen(m * to_eigen(f[i]));
  return out;
}

}  // namespace

std::map<std::string, double> transform_residuals(const std::vector<DKGState>& states,
                                                  const GammaSet& g) {
  if (states.size() < 5)
    throw std::invalid_argument("transform_residuals: needs >= 5 adjacent snapshots");
  const std::size_t c = states.size() / 2;
  const DKGState& sc = states[c];
  const GridSpec& gr = sc.psi.grid();
  const double hex = 2.0 * gr.spacing();  // omega exclusion radius

  // brackets for time stencils
  TimeBracket<Spinor4> bpsi, bPsiTilde, bvpsi;
  TimeBracket<double> bV1Tilde;
  for (const auto& s : states) {
    bpsi.push(s.psi);
    ScalarField v = s.V0;
    v += s.V1;
    SpinorField vpsi = scalar_times_spinor(v, s.psi);
    SpinorField pt = s.Psi;
    pt += vpsi;
    bPsiTilde.push(pt);
    bvpsi.push(std::move(vpsi));
    ScalarField dens(gr, s.psi.time());
    for (std::int64_t i = 0; i < dens.size(); ++i) dens[i] = dirac_density(g, s.psi[i]);
    ScalarField vt = s.V1;
    vt -= dens;
    vt.set_time(s.psi.time());
    bV1Tilde.push(std::move(vt));
  }

  ScalarField v = reconstruct_v(sc);
  ScalarField vt = reconstruct_vt(sc);
  std::map<std::string, double> out;

  // (i)  i g^mu d_mu Psi - psi = 0; d_t Psi is the stored stage value
  {
    SpinorField res = matrix_times_spinor(Complex(0, 1) * g.gamma(0), sc.Psit);
    for (int a = 1; a <= 3; ++a) {
      const SpinorField d = spatial_derivative(sc.Psi, a);
      res += matrix_times_spinor(Complex(0, 1) * g.gamma(a), d);
    }
    res -= sc.psi;
    out["wave_rep"] = spinor_l2(res);
  }

  // time stencils at the center slice
  const SpinorField psi_t = bpsi.time_derivative(c);
  const SpinorField psi_tt = [&] {
    const double d = bpsi.dt();
    SpinorField r(gr, sc.psi.time());
    r.add_scaled(-1.0 / (12 * d * d), bpsi.slice(c - 2));
    r.add_scaled(16.0 / (12 * d * d), bpsi.slice(c - 1));
    r.add_scaled(-30.0 / (12 * d * d), bpsi.slice(c));
    r.add_scaled(16.0 / (12 * d * d), bpsi.slice(c + 1));
    r.add_scaled(-1.0 / (12 * d * d), bpsi.slice(c + 2));
    return r;
  }();

  // (iii) -Box psi = i (d_mu v) g^mu psi - v^2 psi
  {
    SpinorField lhs = psi_tt;
    lhs -= spinor_lap(sc.psi);
    SpinorField rhs = matrix_times_spinor(Complex(0, 1) * g.gamma(0), scalar_times_spinor(vt, sc.psi));
    for (int a = 1; a <= 3; ++a) {
      const ScalarField dv = spatial_derivative(v, a);
      rhs += matrix_times_spinor(Complex(0, 1) * g.gamma(a), scalar_times_spinor(dv, sc.psi));
    }
    ScalarField v2(gr, sc.t);
    for (std::int64_t i = 0; i < v2.size(); ++i) v2[i] = v[i] * v[i];
    rhs -= scalar_times_spinor(v2, sc.psi);
    SpinorField res = lhs;
    res -= rhs;
    out["wave_dirac"] = spinor_l2(res);
  }

  // (ii) -Box(Psi + v psi) = (psi* g0 psi) psi + i g^mu v d_mu(v psi) + 2 Q0(v, psi)
  {
    const double d = bPsiTilde.dt();
    SpinorField lhs(gr, sc.t);
    lhs.add_scaled(-1.0 / (12 * d * d), bPsiTilde.slice(c - 2));
    lhs.add_scaled(16.0 / (12 * d * d), bPsiTilde.slice(c - 1));
    lhs.add_scaled(-30.0 / (12 * d * d), bPsiTilde.slice(c));
    lhs.add_scaled(16.0 / (12 * d * d), bPsiTilde.slice(c + 1));
    lhs.add_scaled(-1.0 / (12 * d * d), bPsiTilde.slice(c + 2));
    lhs -= spinor_lap(bPsiTilde.center());

    ScalarField dens(gr, sc.t);
    for (std::int64_t i = 0; i < dens.size(); ++i) dens[i] = dirac_density(g, sc.psi[i]);
    SpinorField rhs = scalar_times_spinor(dens, sc.psi);
    // i v gamma^mu d_mu (v psi)
    const SpinorField vpsi_t = bvpsi.time_derivative(c);
    SpinorField gvp = matrix_times_spinor(Complex(0, 1) * g.gamma(0), vpsi_t);
    for (int a = 1; a <= 3; ++a)
      gvp += matrix_times_spinor(Complex(0, 1) * g.gamma(a), spatial_derivative(bvpsi.center(), a));
    rhs += scalar_times_spinor(v, gvp);
    // 2 Q0(v, psi) = 2 (d_t v d_t psi - grad v . grad psi)
    {
      SpinorField q0(gr, sc.t);
      for (std::int64_t i = 0; i < q0.size(); ++i)
        for (int cc = 0; cc < 4; ++cc)
          q0[i][static_cast<std::size_t>(cc)] = vt[i] * psi_t[i][static_cast<std::size_t>(cc)];
      for (int a = 1; a <= 3; ++a) {
        const ScalarField dv = spatial_derivative(v, a);
        const SpinorField dp = spatial_derivative(sc.psi, a);
        for (std::int64_t i = 0; i < q0.size(); ++i)
          for (int cc = 0; cc < 4; ++cc)
            q0[i][static_cast<std::size_t>(cc)] -= dv[i] * dp[i][static_cast<std::size_t>(cc)];
      }
      rhs.add_scaled(2.0, q0);
    }
    SpinorField res = lhs;
    res -= rhs;
    out["psi_tilde"] = spinor_l2(res);
  }

  // (iv) (-Box + 1)(V1 - psi* g0 psi) = 2 v^2 psi* g0 psi - 2 Q0(psi*, g0 psi)
  {
    const double d = bV1Tilde.dt();
    ScalarField lhs(gr, sc.t);
    lhs.add_scaled(-1.0 / (12 * d * d), bV1Tilde.slice(c - 2));
    lhs.add_scaled(16.0 / (12 * d * d), bV1Tilde.slice(c - 1));
    lhs.add_scaled(-30.0 / (12 * d * d), bV1Tilde.slice(c));
    lhs.add_scaled(16.0 / (12 * d * d), bV1Tilde.slice(c + 1));
    lhs.add_scaled(-1.0 / (12 * d * d), bV1Tilde.slice(c + 2));
    const ScalarField& center = bV1Tilde.center();
    if (center.grid().kind() == GridKind::PeriodicBox3d)
      lhs.add_scaled(-1.0, SpectralBox3d::shared(gr).laplacian(center));
    lhs += center;

    ScalarField rhs(gr, sc.t);
    for (std::int64_t i = 0; i < rhs.size(); ++i)
      rhs[i] = 2.0 * v[i] * v[i] * dirac_density(g, sc.psi[i]);
    // -2 Q0(psi*, g0 psi) = -2 [ (d_t psi)* g0 (d_t psi) - sum_a (d_a psi)* g0 (d_a psi) ]
    const Mat4c g0 = g.gamma(0);
    for (std::int64_t i = 0; i < rhs.size(); ++i) {
      const Vec4c pt = to_eigen(psi_t[i]);
      rhs[i] -= 2.0 * pt.dot(g0 * pt).real();
    }
    for (int a = 1; a <= 3; ++a) {
      const SpinorField dp = spatial_derivative(sc.psi, a);
      for (std::int64_t i = 0; i < rhs.size(); ++i) {
        const Vec4c da = to_eigen(dp[i]);
        rhs[i] += 2.0 * da.dot(g0 * da).real();
      }
    }
    ScalarField res = lhs;
    res -= rhs;
    out["v1_tilde"] = l2_norm(res);
  }

  // (v) [psi]_- = i (I - omega_b g0 g^b) gamma^a G_a Psi, excluding r < 2h
  {
    std::array<SpinorField, 3> dPsi = {spatial_derivative(sc.Psi, 1),
                                       spatial_derivative(sc.Psi, 2),
                                       spatial_derivative(sc.Psi, 3)};
    std::vector<double> density(static_cast<std::size_t>(gr.node_count()), 0.0);
    for (std::int64_t i = 0; i < gr.node_count(); ++i) {
      const double r = gr.radius_of(i);
      if (r < hex) continue;
      const auto p = gr.point_of(i);
      const UnitDirection w({p[0] / r, p[1] / r, p[2] / r});
      const Mat4c proj = Mat4c::Identity() - g.omega_matrix(w);
      const Vec4c lhs = proj * to_eigen(sc.psi[i]);
      Vec4c ga_g = Vec4c::Zero();
      for (int a = 0; a < 3; ++a) {
        const Vec4c gaPsi = to_eigen(dPsi[static_cast<std::size_t>(a)][i]) +
                            w.omega[static_cast<std::size_t>(a)] * to_eigen(sc.Psit[i]);
        ga_g += g.gamma(a + 1) * gaPsi;
      }
      const Vec4c rhs = Complex(0, 1) * (proj * ga_g);
      density[static_cast<std::size_t>(i)] = (lhs - rhs).squaredNorm();
    }
    out["ghost_rep"] = std::sqrt(integrate(gr, density));
  }

  return out;
}

}  // namespace wkg
