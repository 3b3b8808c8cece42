#include "wkg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "wkg/norms.hpp"

namespace wkg {

// ---------------------------------------------------------- decay fits

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   const std::string& observable, double t_min, double t_max) {
  DecayFit fit;
  fit.observable = observable;
  fit.t_min = t_min;
  fit.t_max = t_max;
  double ymin = std::numeric_limits<double>::infinity(), ymax = 0.0;
  std::vector<double> lx, ly;
  for (const auto& [t, y] : series) {
    if (t < t_min || t > t_max) continue;
    if (y <= 0.0) throw std::domain_error("decay_fit: series must be positive on the window");
    lx.push_back(std::log(t));
    ly.push_back(std::log(y));
    fit.series.emplace_back(t, y);
    ymin = std::fmin(ymin, y);
    ymax = std::fmax(ymax, y);
  }
  if (lx.size() < 2) throw std::domain_error("decay_fit: window holds fewer than two samples");
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
    syy += ly[i] * ly[i];
  }
  const double vx = sxx - sx * sx / n;
  const double vy = syy - sy * sy / n;
  const double cxy = sxy - sx * sy / n;
  fit.exponent = cxy / vx;
  fit.r2 = (vy == 0.0) ? 1.0 : (cxy * cxy) / (vx * vy);
  fit.ratio_max_min = ymax / ymin;
  return fit;
}

// ---------------------------------------------------------- scattering

namespace {

double cauchy_norm(PropagatorKind kind, const ScalarPair& d) {
  const double ut2 = l2_norm(d.ut);
  double grad2 = 0.0;
  for (int a = 1; a <= 3; ++a) {
    const double g = l2_norm(spatial_derivative(d.u, a));
    grad2 += g * g;
  }
  double s = ut2 * ut2 + grad2;
  if (kind == PropagatorKind::KleinGordonSKG) {
    const double u = l2_norm(d.u);
    s += u * u;
  }
  return std::sqrt(s);
}

ScalarPair pull_to_zero(PropagatorKind kind, const ScalarPair& s) {
  ScalarPair out = propagate(kind, s, -s.time());
  out.set_time(0.0);
  return out;
}

}  // namespace

double pullback_distance(PropagatorKind kind, const ScalarPair& a, const ScalarPair& b) {
  ScalarPair pa = pull_to_zero(kind, a);
  const ScalarPair pb = pull_to_zero(kind, b);
  pa.u -= pb.u;
  pa.ut -= pb.ut;
  return cauchy_norm(kind, pa);
}

double pullback_distance_dirac(const SpinorField& a, const SpinorField& b, const GammaSet& g,
                               double mass) {
  SpinorField pa = propagate_dirac(a, -a.time(), g, mass);
  const SpinorField pb = propagate_dirac(b, -b.time(), g, mass);
  pa -= pb;
  return l2_norm(pa);
}

std::vector<double> scattering_residual(PropagatorKind kind,
                                        const std::vector<ScalarPair>& states) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    out.push_back(pullback_distance(kind, states[i], states[i + 1]));
  return out;
}

std::vector<double> scattering_residual_dirac(const std::vector<SpinorField>& states,
                                              const GammaSet& g, double mass) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < states.size(); ++i)
    out.push_back(pullback_distance_dirac(states[i], states[i + 1], g, mass));
  return out;
}

// ------------------------------------------------- manufactured subjects

Jet ManufacturedScalar::jet(double t, const Vec3& x, int ord) const {
  const std::array<Jet, 4> X = {Jet::variable(0, t, ord), Jet::variable(1, x[0], ord),
                                Jet::variable(2, x[1], ord), Jet::variable(3, x[2], ord)};
  return fn(X);
}

std::function<double(double, const Vec3&)> ManufacturedScalar::sampler() const {
  auto f = fn;
  return [f](double t, const Vec3& x) {
    const std::array<Jet, 4> X = {Jet::variable(0, t, 0), Jet::variable(1, x[0], 0),
                                  Jet::variable(2, x[1], 0), Jet::variable(3, x[2], 0)};
    return f(X).value();
  };
}

std::array<CJet, 4> ManufacturedSpinor::jet(double t, const Vec3& x, int ord) const {
  const std::array<CJet, 4> X = {CJet::variable(0, t, ord), CJet::variable(1, x[0], ord),
                                 CJet::variable(2, x[1], ord), CJet::variable(3, x[2], ord)};
  return fn(X);
}

Jet jet_vf(VectorFieldId id, const Jet& u, const std::array<Jet, 4>& X) {
  switch (id) {
    case VectorFieldId::Dt: return u.derivative(0);
    case VectorFieldId::Dx1: return u.derivative(1);
    case VectorFieldId::Dx2: return u.derivative(2);
    case VectorFieldId::Dx3: return u.derivative(3);
    case VectorFieldId::Omega12: return X[1] * u.derivative(2) - X[2] * u.derivative(1);
    case VectorFieldId::Omega13: return X[1] * u.derivative(3) - X[3] * u.derivative(1);
    case VectorFieldId::Omega23: return X[2] * u.derivative(3) - X[3] * u.derivative(2);
    case VectorFieldId::L1: return X[0] * u.derivative(1) + X[1] * u.derivative(0);
    case VectorFieldId::L2: return X[0] * u.derivative(2) + X[2] * u.derivative(0);
    case VectorFieldId::L3: return X[0] * u.derivative(3) + X[3] * u.derivative(0);
    case VectorFieldId::L0:
      return X[0] * u.derivative(0) + X[1] * u.derivative(1) + X[2] * u.derivative(2) +
             X[3] * u.derivative(3);
    default:
      throw std::invalid_argument("jet_vf: hatted fields act on spinors");
  }
}

namespace {

CJet cjet_vf_unhatted(VectorFieldId id, const CJet& u, const std::array<CJet, 4>& X) {
  using C = std::complex<double>;
  auto D = [&](int mu) { return u.derivative(mu); };
  switch (id) {
    case VectorFieldId::Dt: return D(0);
    case VectorFieldId::Dx1: return D(1);
    case VectorFieldId::Dx2: return D(2);
    case VectorFieldId::Dx3: return D(3);
    case VectorFieldId::Omega12:
    case VectorFieldId::HatOmega12: return X[1] * D(2) - X[2] * D(1);
    case VectorFieldId::Omega13:
    case VectorFieldId::HatOmega13: return X[1] * D(3) - X[3] * D(1);
    case VectorFieldId::Omega23:
    case VectorFieldId::HatOmega23: return X[2] * D(3) - X[3] * D(2);
    case VectorFieldId::L1:
    case VectorFieldId::HatL1: return X[0] * D(1) + X[1] * D(0);
    case VectorFieldId::L2:
    case VectorFieldId::HatL2: return X[0] * D(2) + X[2] * D(0);
    case VectorFieldId::L3:
    case VectorFieldId::HatL3: return X[0] * D(3) + X[3] * D(0);
    case VectorFieldId::L0:
      return X[0] * D(0) + X[1] * D(1) + X[2] * D(2) + X[3] * D(3);
  }
  return CJet::constant(C(0.0));
}

// hatted application on a full spinor jet
std::array<CJet, 4> spinor_jet_vf(VectorFieldId id, const std::array<CJet, 4>& phi,
                                  const std::array<CJet, 4>& X, const GammaSet& g) {
  std::array<CJet, 4> out = {cjet_vf_unhatted(id, phi[0], X), cjet_vf_unhatted(id, phi[1], X),
                             cjet_vf_unhatted(id, phi[2], X), cjet_vf_unhatted(id, phi[3], X)};
  if (!is_hatted(id)) return out;
  Mat4c m = Mat4c::Zero();
  switch (id) {
    case VectorFieldId::HatOmega12: m = -0.5 * g.gamma(1) * g.gamma(2); break;
    case VectorFieldId::HatOmega13: m = -0.5 * g.gamma(1) * g.gamma(3); break;
    case VectorFieldId::HatOmega23: m = -0.5 * g.gamma(2) * g.gamma(3); break;
    case VectorFieldId::HatL1: m = -0.5 * g.gamma(0) * g.gamma(1); break;
    case VectorFieldId::HatL2: m = -0.5 * g.gamma(0) * g.gamma(2); break;
    case VectorFieldId::HatL3: m = -0.5 * g.gamma(0) * g.gamma(3); break;
    default: break;
  }
  const int ord = phi[0].order();
  for (int r = 0; r < 4; ++r) {
    CJet add = CJet::constant(std::complex<double>(0.0), ord - 1);
    for (int c = 0; c < 4; ++c) {
      // keep the matrix term at the same (reduced) order as the derivative part
      CJet comp = phi[static_cast<std::size_t>(c)];
      add = add + comp * m(r, c);
    }
    out[static_cast<std::size_t>(r)] = out[static_cast<std::size_t>(r)] + add;
  }
  return out;
}

double jet_abs(const Jet& j) { return std::abs(j.value()); }

// sqrt(sum over the ten Gamma of |Gamma_k u|^2) at a point
double gamma_magnitude(const Jet& u, const std::array<Jet, 4>& X) {
  double s = 0.0;
  for (auto id : gamma_fields()) {
    const double v = jet_vf(id, u, X).value();
    s += v * v;
  }
  return std::sqrt(s);
}

double partial_magnitude(const Jet& u) {
  double s = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    const double v = u.derivative(mu).value();
    s += v * v;
  }
  return std::sqrt(s);
}

std::array<Jet, 4> seed_vars(double t, const Vec3& x, int ord) {
  return {Jet::variable(0, t, ord), Jet::variable(1, x[0], ord), Jet::variable(2, x[1], ord),
          Jet::variable(3, x[2], ord)};
}

}  // namespace

std::vector<double> vf_norm_levels(const TimeBracket<double>& master,
                                   const std::vector<VectorFieldId>& fields, int max_order) {
  if (master.size() < static_cast<std::size_t>(4 * max_order + 1))
    throw std::invalid_argument("vf_norm_levels: master bracket too short");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);

  std::function<void(const TimeBracket<double>&, std::size_t, int)> recurse =
      [&](const TimeBracket<double>& b, std::size_t min_idx, int level) {
        out[static_cast<std::size_t>(level)] += l2_norm(b.center());
        if (level == max_order) return;
        for (std::size_t k = min_idx; k < fields.size(); ++k) {
          if (level + 1 == max_order) {
            out[static_cast<std::size_t>(level + 1)] += l2_norm(apply_vf(fields[k], b));
          } else {
            recurse(apply_vf_bracket<double>(fields[k], b, nullptr), k, level + 1);
          }
        }
      };
  recurse(master, 0, 0);
  return out;
}

// ------------------------------------------------- inequality margins

std::string inequality_name(InequalityName n) {
  switch (n) {
    case InequalityName::PartialDecay: return "partial-decay";
    case InequalityName::KlainermanSobolev: return "klainerman-sobolev";
    case InequalityName::StandardSobolev: return "standard-sobolev";
    case InequalityName::ConeInterior: return "cone-interior";
    case InequalityName::GlobalSobolev: return "global-sobolev";
    case InequalityName::MksDecay: return "mks-decay";
    case InequalityName::HessianExtra: return "hessian-extra";
    case InequalityName::KgWeighted: return "kg-weighted";
    case InequalityName::DiracDecay: return "dirac-decay";
    case InequalityName::Q0Bound: return "q0-bound";
    case InequalityName::Q0Interior: return "q0-interior";
    case InequalityName::HomoL2: return "homo-L2";
  }
  return "?";
}

namespace {

ScalarField radial_derivative_field(const ScalarField& u) {
  std::array<ScalarField, 3> grad = {spatial_derivative(u, 1), spatial_derivative(u, 2),
                                     spatial_derivative(u, 3)};
  ScalarField out(u.grid(), u.time());
  for (std::int64_t i = 0; i < u.size(); ++i) {
    const double r = u.grid().radius_of(i);
    if (r < 1e-12) continue;
    const auto p = u.grid().point_of(i);
    for (int a = 0; a < 3; ++a)
      out[i] += p[static_cast<std::size_t>(a)] / r * grad[static_cast<std::size_t>(a)][i];
  }
  return out;
}

// sum_{k<=1, |J|<=2} || d_r^k Omega^J u || at the bracket center
double standard_sobolev_rhs(const TimeBracket<double>& master) {
  static const std::vector<VectorFieldId> rot = {VectorFieldId::Omega12, VectorFieldId::Omega13,
                                                 VectorFieldId::Omega23};
  double total = 0.0;
  std::function<void(const TimeBracket<double>&, std::size_t, int)> recurse =
      [&](const TimeBracket<double>& b, std::size_t min_idx, int level) {
        total += l2_norm(b.center());
        total += l2_norm(radial_derivative_field(b.center()));
        if (level == 2) return;
        for (std::size_t k = min_idx; k < rot.size(); ++k)
          recurse(apply_vf_bracket<double>(rot[k], b, nullptr), k, level + 1);
      };
  recurse(master, 0, 0);
  return total;
}

struct ProbeGen {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  explicit ProbeGen(std::uint64_t seed) : rng(seed) {}
  Vec3 point_in_ball(double radius, double rmin = 0.3) {
    for (;;) {
      Vec3 p = {radius * (2.0 * unit(rng) - 1.0), radius * (2.0 * unit(rng) - 1.0),
                radius * (2.0 * unit(rng) - 1.0)};
      const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      if (r <= radius && r >= rmin) return p;
    }
  }
};

void track(MarginReport& rep, double lhs, double rhs) {
  if (rhs <= 0.0) {
    if (lhs > 1e-14) rep.empirical_constant = std::numeric_limits<double>::infinity();
    return;
  }
  if (lhs > rep.lhs_max) {
    rep.lhs_max = lhs;
    rep.rhs_at_lhs_max = rhs;
  }
  rep.empirical_constant = std::fmax(rep.empirical_constant, lhs / rhs);
  rep.probes_used += 1;
}

}  // namespace

MarginReport inequality_margin(InequalityName name, const ManufacturedScalar& u,
                               const MarginConfig& cfg, const ManufacturedScalar* v) {
  MarginReport rep{name, 0.0, 0.0, 0.0, 0};
  ProbeGen gen(cfg.seed);
  const double t = cfg.t;

  switch (name) {
    case InequalityName::PartialDecay: {
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(cfg.probe_radius);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const auto X = seed_vars(t, x, 2);
        const Jet j = u.fn(X);
        double gsum = 0.0;
        const Jet jt = j.derivative(0);
        for (int a = 1; a <= 3; ++a) {
          const double ga = j.derivative(a).value() + x[static_cast<std::size_t>(a - 1)] / r * jt.value();
          gsum += ga * ga;
        }
        const double lhs = jbracket(t + r) * std::sqrt(gsum) + jbracket(t - r) * partial_magnitude(j);
        const double rhs = jet_abs(jet_vf(VectorFieldId::L0, j, X)) + gamma_magnitude(j, X);
        track(rep, lhs, rhs);
      }
      break;
    }
    case InequalityName::KlainermanSobolev: {
      const auto master = make_bracket(u.sampler(), cfg.grid, t, cfg.bracket_dt, 4);
      const auto lv = vf_norm_levels(master, z_fields(), 2);
      const double rhs = lv[0] + lv[1] + lv[2];
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(cfg.probe_radius, 0.0);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double lhs =
            std::abs(u.eval(t, x)) * jbracket(t + r) * std::sqrt(jbracket(t - r));
        track(rep, lhs, rhs);
      }
      break;
    }
    case InequalityName::StandardSobolev: {
      const auto master = make_bracket(u.sampler(), cfg.grid, t, cfg.bracket_dt, 4);
      const double rhs = standard_sobolev_rhs(master);
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(cfg.probe_radius, 0.0);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        track(rep, std::abs(u.eval(t, x)) * jbracket(r), rhs);
      }
      break;
    }
    case InequalityName::ConeInterior:
    case InequalityName::GlobalSobolev: {
      const auto master = make_bracket(u.sampler(), cfg.grid, t, cfg.bracket_dt, 6);
      const auto lv = vf_norm_levels(master, gamma_fields(), 3);
      const double rhs = lv[0] + lv[1] + lv[2] + lv[3];
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(
            name == InequalityName::ConeInterior ? 0.5 * t : cfg.probe_radius, 0.0);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (name == InequalityName::ConeInterior && r > 0.5 * t) continue;
        const double w = name == InequalityName::ConeInterior
                             ? std::pow(jbracket(t), 0.75)
                             : std::pow(jbracket(t + r), 0.75);
        track(rep, std::abs(u.eval(t, x)) * w, rhs);
      }
      break;
    }
    case InequalityName::MksDecay: {
      double rhs = 0.0;
      for (double s : {0.0, 0.5 * t, t, 1.5 * t, 2.0 * t}) {
        const auto master = make_bracket(u.sampler(), cfg.grid, s, cfg.bracket_dt, 6);
        const auto lv = vf_norm_levels(master, gamma_fields(), 3);
        rhs = std::fmax(rhs, lv[0] + lv[1] + lv[2] + lv[3]);
      }
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(cfg.probe_radius, 0.0);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        track(rep, std::abs(u.eval(t, x)) * jbracket(t + r), rhs);
      }
      break;
    }
    case InequalityName::HessianExtra:
    case InequalityName::KgWeighted: {
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(cfg.probe_radius);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (name == InequalityName::HessianExtra && r > 2.0 * t) continue;
        const auto X = seed_vars(t, x, 3);
        const Jet j = u.fn(X);
        // G from the equation the subject is tested against
        const Jet box = j.derivative(0).derivative(0) - j.derivative(1).derivative(1) -
                        j.derivative(2).derivative(2) - j.derivative(3).derivative(3);
        double dgam = partial_magnitude(j);  // |J| = 0 term
        for (auto id : gamma_fields()) dgam += partial_magnitude(jet_vf(id, j, X));
        if (name == InequalityName::HessianExtra) {
          double hess = 0.0;
          for (int mu = 0; mu < 4; ++mu)
            for (int nu = 0; nu < 4; ++nu) {
              const double d2 = j.derivative(mu).derivative(nu).value();
              hess += d2 * d2;
            }
          const double lhs = std::sqrt(hess);
          const double rhs =
              t / jbracket(t - r) * std::abs(box.value()) + dgam / jbracket(t - r);
          track(rep, lhs, rhs);
        } else {
          const double G = box.value() + j.value();  // -Box u + u
          const double ratio = jbracket(t + r) / jbracket(t - r);
          track(rep, ratio * std::abs(j.value()), dgam + ratio * std::abs(G));
        }
      }
      break;
    }
    case InequalityName::Q0Bound:
    case InequalityName::Q0Interior: {
      if (!v) throw std::invalid_argument("inequality_margin: Q0 lemmas need two subjects");
      for (int p = 0; p < cfg.probes; ++p) {
        const Vec3 x = gen.point_in_ball(cfg.probe_radius);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        if (name == InequalityName::Q0Interior && r > 3.0 * t + 3.0) continue;
        const auto X = seed_vars(t, x, 2);
        const Jet jf = u.fn(X);
        const Jet jg = v->fn(X);
        double q0 = jf.derivative(0).value() * jg.derivative(0).value();
        for (int a = 1; a <= 3; ++a) q0 -= jf.derivative(a).value() * jg.derivative(a).value();
        const double lhs = std::abs(q0);
        double rhs;
        if (name == InequalityName::Q0Bound) {
          rhs = (jet_abs(jet_vf(VectorFieldId::L0, jf, X)) + gamma_magnitude(jf, X)) *
                gamma_magnitude(jg, X) / jbracket(t + r);
        } else {
          rhs = jbracket(t - r) / jbracket(t + r) * partial_magnitude(jf) * partial_magnitude(jg) +
                gamma_magnitude(jf, X) * gamma_magnitude(jg, X) / jbracket(t);
        }
        track(rep, lhs, rhs);
      }
      break;
    }
    case InequalityName::DiracDecay:
      throw std::invalid_argument("inequality_margin: use inequality_margin_dirac");
    case InequalityName::HomoL2:
      throw std::invalid_argument("inequality_margin: use inequality_margin_homo_l2");
  }
  if (rep.probes_used == 0)
    throw std::domain_error("inequality_margin: probe set empty after region restrictions");
  return rep;
}

MarginReport inequality_margin_dirac(const ManufacturedSpinor& phi, const GammaSet& g,
                                     const MarginConfig& cfg) {
  MarginReport rep{InequalityName::DiracDecay, 0.0, 0.0, 0.0, 0};
  ProbeGen gen(cfg.seed);
  const double t = cfg.t;
  static const std::vector<VectorFieldId> hatted = {
      VectorFieldId::Dt,         VectorFieldId::Dx1,        VectorFieldId::Dx2,
      VectorFieldId::Dx3,        VectorFieldId::HatOmega12, VectorFieldId::HatOmega13,
      VectorFieldId::HatOmega23, VectorFieldId::HatL1,      VectorFieldId::HatL2,
      VectorFieldId::HatL3};
  for (int p = 0; p < cfg.probes; ++p) {
    const Vec3 x = gen.point_in_ball(std::fmin(cfg.probe_radius, 3.0 * t + 3.0));
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (r > 3.0 * t + 3.0) continue;
    const std::array<CJet, 4> X = {CJet::variable(0, t, 2), CJet::variable(1, x[0], 2),
                                   CJet::variable(2, x[1], 2), CJet::variable(3, x[2], 2)};
    const auto j = phi.fn(X);
    double dphi = 0.0, aphi = 0.0;
    for (int c = 0; c < 4; ++c) {
      aphi += std::norm(j[static_cast<std::size_t>(c)].value());
      for (int mu = 0; mu < 4; ++mu)
        dphi += std::norm(j[static_cast<std::size_t>(c)].derivative(mu).value());
    }
    double hat = 0.0;
    for (auto id : hatted) {
      const auto w = spinor_jet_vf(id, j, X, g);
      for (int c = 0; c < 4; ++c) hat += std::norm(w[static_cast<std::size_t>(c)].value());
    }
    // F = -i gamma^mu d_mu phi
    Vec4c dmu[4];
    for (int mu = 0; mu < 4; ++mu)
      for (int c = 0; c < 4; ++c)
        dmu[mu](c) = j[static_cast<std::size_t>(c)].derivative(mu).value();
    Vec4c F = Vec4c::Zero();
    for (int mu = 0; mu < 4; ++mu) F += g.gamma(mu) * dmu[mu];
    F *= Complex(0.0, -1.0);
    const double lhs = std::sqrt(dphi);
    const double rhs =
        (std::sqrt(hat) + std::sqrt(aphi)) / jbracket(t - r) + t / jbracket(t - r) * F.norm();
    track(rep, lhs, rhs);
  }
  if (rep.probes_used == 0)
    throw std::domain_error("inequality_margin_dirac: probe set empty");
  return rep;
}

MarginReport inequality_margin_homo_l2(const ClosedFormWave& data, const MarginConfig& cfg) {
  MarginReport rep{InequalityName::HomoL2, 0.0, 0.0, 0.0, 0};
  const ScalarField u0 = sample<double>(cfg.grid, 0.0, [&](const Vec3& p) { return data.u0(p); });
  const ScalarField u1 = sample<double>(cfg.grid, 0.0, [&](const Vec3& p) { return data.u1(p); });
  std::vector<double> absu1(static_cast<std::size_t>(u1.size()));
  for (std::int64_t i = 0; i < u1.size(); ++i) absu1[static_cast<std::size_t>(i)] = std::abs(u1[i]);
  const double rhs = l2_norm(u0) + integrate(cfg.grid, absu1) + l2_norm(u1);
  for (double t : {0.25 * cfg.t, 0.5 * cfg.t, cfg.t}) {
    ScalarPair s(u0, u1);
    s = propagate_wave(s, t);
    track(rep, l2_norm(s.u), rhs);
  }
  return rep;
}

// --------------------------------------------- Sobolev constant estimate

SobolevEstimate sobolev_constant_estimate(const std::vector<WaveTrial>& trials,
                                          const GridSpec& grid,
                                          const std::vector<double>& sample_times,
                                          double bracket_dt) {
  SobolevEstimate est;
  est.trial_count = static_cast<int>(trials.size());
  for (const auto& trial : trials) {
    const ScalarField u0 = sample<double>(grid, 0.0, [&](const Vec3& p) { return trial.u0(p); });
    const ScalarField u1 = sample<double>(grid, 0.0, [&](const Vec3& p) { return trial.u1(p); });
    const ScalarPair base(u0, u1);
    for (double t : sample_times) {
      // exact free evolution supplies both the field and its time bracket
      TimeBracket<double> b;
      for (int m = -4; m <= 4; ++m) {
        const double ts = t + static_cast<double>(m) * bracket_dt;
        ScalarPair s = propagate_wave(base, ts);
        b.push(s.u);
      }
      const auto lv = vf_norm_levels(b, z_fields(), 2);
      const double rhs = lv[0] + lv[1] + lv[2];
      if (rhs <= 0.0) continue;
      const ScalarField& u = b.center();
      double lhs = 0.0;
      for (std::int64_t i = 0; i < u.size(); ++i) {
        const double r = grid.radius_of(i);
        lhs = std::fmax(lhs, std::abs(u[i]) * jbracket(t + r) * std::sqrt(jbracket(t - r)));
      }
      const double ratio = lhs / rhs;
      if (ratio > est.lower_bound) {
        est.lower_bound = ratio;
        est.maximizer = trial.description + " at t=" + std::to_string(t);
      }
    }
  }
  return est;
}

std::vector<WaveTrial> shipped_trial_family(int count) {
  std::vector<WaveTrial> out;
  auto gaussian = [](double w, Vec3 c) {
    return [w, c](const Vec3& p) {
      const double dx = p[0] - c[0], dy = p[1] - c[1], dz = p[2] - c[2];
      return std::exp(-(dx * dx + dy * dy + dz * dz) / (w * w));
    };
  };
  const double widths[] = {0.8, 1.0, 1.4, 1.8, 2.4};
  for (double w : widths) {
    out.push_back({"gaussian w=" + std::to_string(w), gaussian(w, {0, 0, 0}),
                   [](const Vec3&) { return 0.0; }});
  }
  for (double w : widths) {
    out.push_back({"gaussian pair w=" + std::to_string(w),
                   [g1 = gaussian(w, {1.5, 0, 0}), g2 = gaussian(w, {-1.5, 0, 0})](const Vec3& p) {
                     return g1(p) + g2(p);
                   },
                   [](const Vec3&) { return 0.0; }});
  }
  for (double w : widths) {
    out.push_back({"velocity gaussian w=" + std::to_string(w), [](const Vec3&) { return 0.0; },
                   gaussian(w, {0, 0, 0})});
  }
  for (double w : widths) {
    out.push_back({"mixed gaussian w=" + std::to_string(w), gaussian(w, {0.8, 0, 0}),
                   gaussian(1.5 * w, {-0.8, 0, 0})});
  }
  out.resize(static_cast<std::size_t>(std::min<int>(count, static_cast<int>(out.size()))));
  return out;
}

}  // namespace wkg
