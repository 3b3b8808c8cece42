#include "wkg/vector_fields.hpp"

#include <cmath>
#include <stdexcept>

#include "wkg/norms.hpp"

namespace wkg {

bool is_hatted(VectorFieldId id) {
  switch (id) {
    case VectorFieldId::HatOmega12:
    case VectorFieldId::HatOmega13:
    case VectorFieldId::HatOmega23:
    case VectorFieldId::HatL1:
    case VectorFieldId::HatL2:
    case VectorFieldId::HatL3:
      return true;
    default:
      return false;
  }
}

std::string vf_name(VectorFieldId id) {
  switch (id) {
    case VectorFieldId::Dt: return "dt";
    case VectorFieldId::Dx1: return "dx1";
    case VectorFieldId::Dx2: return "dx2";
    case VectorFieldId::Dx3: return "dx3";
    case VectorFieldId::Omega12: return "Omega12";
    case VectorFieldId::Omega13: return "Omega13";
    case VectorFieldId::Omega23: return "Omega23";
    case VectorFieldId::L1: return "L1";
    case VectorFieldId::L2: return "L2";
    case VectorFieldId::L3: return "L3";
    case VectorFieldId::L0: return "L0";
    case VectorFieldId::HatOmega12: return "hatOmega12";
    case VectorFieldId::HatOmega13: return "hatOmega13";
    case VectorFieldId::HatOmega23: return "hatOmega23";
    case VectorFieldId::HatL1: return "hatL1";
    case VectorFieldId::HatL2: return "hatL2";
    case VectorFieldId::HatL3: return "hatL3";
  }
  return "?";
}

const std::vector<VectorFieldId>& gamma_fields() {
  static const std::vector<VectorFieldId> v = {
      VectorFieldId::Dt,      VectorFieldId::Dx1,     VectorFieldId::Dx2, VectorFieldId::Dx3,
      VectorFieldId::Omega12, VectorFieldId::Omega13, VectorFieldId::Omega23,
      VectorFieldId::L1,      VectorFieldId::L2,      VectorFieldId::L3};
  return v;
}

const std::vector<VectorFieldId>& z_fields() {
  static const std::vector<VectorFieldId> v = [] {
    std::vector<VectorFieldId> z = {VectorFieldId::L0};
    for (auto id : gamma_fields()) z.push_back(id);
    return z;
  }();
  return v;
}

// --------------------------------------------------------- derivatives

template <class T>
Field<T> TimeBracket<T>::time_derivative(std::size_t i) const {
  if (i < 2 || i + 2 >= slices_.size())
    throw std::invalid_argument("TimeBracket: time derivative needs two slices on each side");
  const double d = dt();
  Field<T> out(slices_[i].grid(), slices_[i].time());
  out.add_scaled(1.0 / (12.0 * d), slices_[i - 2]);
  out.add_scaled(-8.0 / (12.0 * d), slices_[i - 1]);
  out.add_scaled(8.0 / (12.0 * d), slices_[i + 1]);
  out.add_scaled(-1.0 / (12.0 * d), slices_[i + 2]);
  return out;
}

template class TimeBracket<double>;
template class TimeBracket<Vec3>;
template class TimeBracket<Spinor4>;

namespace {

template <class T>
Field<T> radial_axis_derivative(const Field<T>& f, int axis);

template <>
ScalarField radial_axis_derivative<double>(const ScalarField& f, int axis) {
  if (axis != 1) return ScalarField(f.grid(), f.time());  // off-axis components vanish
  const auto d = radial_d1(f.values(), f.grid().spacing(), RadialParity::Even);
  ScalarField out(f.grid(), f.time());
  for (std::int64_t i = 0; i < f.size(); ++i) out[i] = d[static_cast<std::size_t>(i)];
  return out;
}

template <>
Vec3Field radial_axis_derivative<Vec3>(const Vec3Field& f, int axis) {
  Vec3Field out(f.grid(), f.time());
  if (axis != 1) return out;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> comp(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i)
      comp[static_cast<std::size_t>(i)] = f[i][static_cast<std::size_t>(c)];
    const auto d = radial_d1(comp, f.grid().spacing(), RadialParity::Even);
    for (std::int64_t i = 0; i < f.size(); ++i)
      out[i][static_cast<std::size_t>(c)] = d[static_cast<std::size_t>(i)];
  }
  return out;
}

template <>
SpinorField radial_axis_derivative<Spinor4>(const SpinorField& f, int axis) {
  SpinorField out(f.grid(), f.time());
  if (axis != 1) return out;
  for (int c = 0; c < 4; ++c) {
    std::vector<double> re(static_cast<std::size_t>(f.size())), im(static_cast<std::size_t>(f.size()));
    for (std::int64_t i = 0; i < f.size(); ++i) {
      re[static_cast<std::size_t>(i)] = f[i][static_cast<std::size_t>(c)].real();
      im[static_cast<std::size_t>(i)] = f[i][static_cast<std::size_t>(c)].imag();
    }
    const auto dre = radial_d1(re, f.grid().spacing(), RadialParity::Even);
    const auto dim = radial_d1(im, f.grid().spacing(), RadialParity::Even);
    for (std::int64_t i = 0; i < f.size(); ++i)
      out[i][static_cast<std::size_t>(c)] =
          Complex(dre[static_cast<std::size_t>(i)], dim[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

ScalarField spatial_derivative(const ScalarField& f, int axis) {
  if (f.grid().kind() == GridKind::PeriodicBox3d)
    return SpectralBox3d::shared(f.grid()).derivative(f, axis);
  return radial_axis_derivative<double>(f, axis);
}
Vec3Field spatial_derivative(const Vec3Field& f, int axis) {
  if (f.grid().kind() == GridKind::PeriodicBox3d)
    return SpectralBox3d::shared(f.grid()).derivative(f, axis);
  return radial_axis_derivative<Vec3>(f, axis);
}
SpinorField spatial_derivative(const SpinorField& f, int axis) {
  if (f.grid().kind() == GridKind::PeriodicBox3d)
    return SpectralBox3d::shared(f.grid()).derivative(f, axis);
  return radial_axis_derivative<Spinor4>(f, axis);
}


// ------------------------------------------------- stencil-4 box helpers

namespace {

template <class Op>
ScalarField fd4_apply_box(const ScalarField& f, Op&& op) {
  const auto& g = f.grid();
  const std::int64_t n = g.points_per_axis();
  ScalarField out(g, f.time());
  auto wrap = [n](std::int64_t i) { return (i % n + n) % n; };
  auto at = [&](std::int64_t i, std::int64_t j, std::int64_t k) {
    return f[g.index_of(wrap(i), wrap(j), wrap(k))];
  };
  for (std::int64_t k = 0; k < n; ++k)
    for (std::int64_t j = 0; j < n; ++j)
      for (std::int64_t i = 0; i < n; ++i)
        out[g.index_of(i, j, k)] = op(at, i, j, k);
  return out;
}

}  // namespace

ScalarField fd4_derivative(const ScalarField& f, int axis) {
  if (f.grid().kind() == GridKind::RadialLine1d) return radial_axis_derivative<double>(f, axis);
  const double c = 1.0 / (12.0 * f.grid().spacing());
  return fd4_apply_box(f, [axis, c](auto&& at, std::int64_t i, std::int64_t j, std::int64_t k) {
    auto sh = [&](int d) {
      return axis == 1 ? at(i + d, j, k) : axis == 2 ? at(i, j + d, k) : at(i, j, k + d);
    };
    return c * (sh(-2) - 8.0 * sh(-1) + 8.0 * sh(1) - sh(2));
  });
}

ScalarField fd4_laplacian(const ScalarField& f) {
  if (f.grid().kind() == GridKind::RadialLine1d) {
    std::vector<double> w(static_cast<std::size_t>(f.size()));
    for (std::int64_t j = 0; j < f.size(); ++j)
      w[static_cast<std::size_t>(j)] = f.grid().radius_of(j) * f[j];
    const auto d2 = radial_d2(w, f.grid().spacing(), RadialParity::Odd);
    ScalarField out(f.grid(), f.time());
    for (std::int64_t j = 0; j < f.size(); ++j)
      out[j] = d2[static_cast<std::size_t>(j)] / f.grid().radius_of(j);
    return out;
  }
  const double c = 1.0 / (12.0 * f.grid().spacing() * f.grid().spacing());
  return fd4_apply_box(f, [c](auto&& at, std::int64_t i, std::int64_t j, std::int64_t k) {
    double acc = -90.0 * c * at(i, j, k);
    acc += c * (-at(i - 2, j, k) + 16.0 * at(i - 1, j, k) + 16.0 * at(i + 1, j, k) - at(i + 2, j, k));
    acc += c * (-at(i, j - 2, k) + 16.0 * at(i, j - 1, k) + 16.0 * at(i, j + 1, k) - at(i, j + 2, k));
    acc += c * (-at(i, j, k - 2) + 16.0 * at(i, j, k - 1) + 16.0 * at(i, j, k + 1) - at(i, j, k + 2));
    return acc;
  });
}

double interior_l2_norm(const ScalarField& f, double margin) {
  const auto& g = f.grid();
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(f.size()));
  for (std::int64_t i = 0; i < f.size(); ++i) {
    if (g.kind() == GridKind::PeriodicBox3d) {
      const auto p = g.point_of(i);
      const double L = g.extent();
      if (std::abs(p[0]) > L - margin || std::abs(p[1]) > L - margin || std::abs(p[2]) > L - margin)
        continue;
    } else if (g.radius_of(i) > g.extent() - margin) {
      continue;
    }
    terms.push_back(f[i] * f[i] * g.cell_measure(i));
  }
  return std::sqrt(pairwise_sum(terms));
}

// --------------------------------------------------------- vector fields

namespace {

inline ScalarField sderiv(const ScalarField& f, int axis, SpaceScheme scheme) {
  return scheme == SpaceScheme::Stencil4 ? fd4_derivative(f, axis) : spatial_derivative(f, axis);
}
inline Vec3Field sderiv(const Vec3Field& f, int axis, SpaceScheme) {
  return spatial_derivative(f, axis);
}
inline SpinorField sderiv(const SpinorField& f, int axis, SpaceScheme) {
  return spatial_derivative(f, axis);
}

template <class T>
void node_scale_add(Field<T>& acc, const Field<T>& f,
                    const std::function<double(double, const Vec3&)>& coeff, double t) {
  for (std::int64_t i = 0; i < f.size(); ++i) {
    const auto p = f.grid().point_of(i);
    detail::axpy(coeff(t, p), f[i], acc[i]);
  }
}

// unhatted part shared between scalar/vec3/spinor inputs
template <class T>
Field<T> apply_unhatted(VectorFieldId id, const TimeBracket<T>& b,
                        SpaceScheme scheme = SpaceScheme::Native) {
  if (b.size() < 5) throw std::invalid_argument("apply_vf: bracket needs >= 5 slices");
  const std::size_t c = b.size() / 2;
  const Field<T>& f = b.slice(c);
  const double t = f.time();
  Field<T> out(f.grid(), t);
  auto x = [](int a) {
    return [a](double, const Vec3& p) { return p[static_cast<std::size_t>(a - 1)]; };
  };
  auto tt = [](double tv, const Vec3&) { return tv; };
  switch (id) {
    case VectorFieldId::Dt:
      return b.time_derivative(c);
    case VectorFieldId::Dx1:
      return sderiv(f, 1, scheme);
    case VectorFieldId::Dx2:
      return sderiv(f, 2, scheme);
    case VectorFieldId::Dx3:
      return sderiv(f, 3, scheme);
    case VectorFieldId::Omega12:
    case VectorFieldId::HatOmega12:
      node_scale_add(out, sderiv(f, 2, scheme), x(1), t);
      node_scale_add(out, sderiv(f, 1, scheme), [&](double tv, const Vec3& p) { return -x(2)(tv, p); }, t);
      return out;
    case VectorFieldId::Omega13:
    case VectorFieldId::HatOmega13:
      node_scale_add(out, sderiv(f, 3, scheme), x(1), t);
      node_scale_add(out, sderiv(f, 1, scheme), [&](double tv, const Vec3& p) { return -x(3)(tv, p); }, t);
      return out;
    case VectorFieldId::Omega23:
    case VectorFieldId::HatOmega23:
      node_scale_add(out, sderiv(f, 3, scheme), x(2), t);
      node_scale_add(out, sderiv(f, 2, scheme), [&](double tv, const Vec3& p) { return -x(3)(tv, p); }, t);
      return out;
    case VectorFieldId::L1:
    case VectorFieldId::HatL1:
      node_scale_add(out, sderiv(f, 1, scheme), tt, t);
      node_scale_add(out, b.time_derivative(c), x(1), t);
      return out;
    case VectorFieldId::L2:
    case VectorFieldId::HatL2:
      node_scale_add(out, sderiv(f, 2, scheme), tt, t);
      node_scale_add(out, b.time_derivative(c), x(2), t);
      return out;
    case VectorFieldId::L3:
    case VectorFieldId::HatL3:
      node_scale_add(out, sderiv(f, 3, scheme), tt, t);
      node_scale_add(out, b.time_derivative(c), x(3), t);
      return out;
    case VectorFieldId::L0: {
      node_scale_add(out, b.time_derivative(c), tt, t);
      for (int a = 1; a <= 3; ++a) node_scale_add(out, sderiv(f, a, scheme), x(a), t);
      return out;
    }
    default:
      throw std::logic_error("apply_unhatted: unreachable");
  }
}

void add_matrix_term(SpinorField& out, const SpinorField& f, const Mat4c& m) {
  for (std::int64_t i = 0; i < f.size(); ++i) {
    const Vec4c v = m * to_eigen(f[i]);
    for (int c = 0; c < 4; ++c) out[i][static_cast<std::size_t>(c)] += v(c);
  }
}

Mat4c hat_matrix(VectorFieldId id, const GammaSet& g) {
  switch (id) {
    case VectorFieldId::HatOmega12: return -0.5 * g.gamma(1) * g.gamma(2);
    case VectorFieldId::HatOmega13: return -0.5 * g.gamma(1) * g.gamma(3);
    case VectorFieldId::HatOmega23: return -0.5 * g.gamma(2) * g.gamma(3);
    case VectorFieldId::HatL1: return -0.5 * g.gamma(0) * g.gamma(1);
    case VectorFieldId::HatL2: return -0.5 * g.gamma(0) * g.gamma(2);
    case VectorFieldId::HatL3: return -0.5 * g.gamma(0) * g.gamma(3);
    default: return Mat4c::Zero();
  }
}

}  // namespace

ScalarField apply_vf(VectorFieldId id, const TimeBracket<double>& b, SpaceScheme scheme) {
  if (is_hatted(id)) throw std::invalid_argument("apply_vf: hatted field needs a spinor input");
  return apply_unhatted(id, b, scheme);
}

Vec3Field apply_vf(VectorFieldId id, const TimeBracket<Vec3>& b) {
  if (is_hatted(id)) throw std::invalid_argument("apply_vf: hatted field needs a spinor input");
  return apply_unhatted(id, b);
}

SpinorField apply_vf(VectorFieldId id, const TimeBracket<Spinor4>& b, const GammaSet& g) {
  SpinorField out = apply_unhatted(id, b);
  if (is_hatted(id)) add_matrix_term(out, b.center(), hat_matrix(id, g));
  return out;
}

template <class T>
TimeBracket<T> sub_bracket(const TimeBracket<T>& b, std::size_t lo, std::size_t hi) {
  TimeBracket<T> out;
  for (std::size_t i = lo; i <= hi; ++i) out.push(b.slice(i));
  return out;
}

template <class T>
TimeBracket<T> apply_vf_bracket(VectorFieldId id, const TimeBracket<T>& b, const GammaSet* g) {
  if (b.size() < 9) throw std::invalid_argument("apply_vf_bracket: needs >= 9 slices");
  TimeBracket<T> out;
  for (std::size_t i = 2; i + 2 < b.size(); ++i) {
    const auto win = sub_bracket(b, i - 2, i + 2);
    if constexpr (std::is_same_v<T, Spinor4>) {
      out.push(apply_vf(id, win, g ? *g : GammaSet::standard()));
    } else {
      out.push(apply_vf(id, win));
    }
  }
  return out;
}

template TimeBracket<double> apply_vf_bracket<double>(VectorFieldId, const TimeBracket<double>&,
                                                      const GammaSet*);
template TimeBracket<Spinor4> apply_vf_bracket<Spinor4>(VectorFieldId,
                                                        const TimeBracket<Spinor4>&,
                                                        const GammaSet*);

ScalarField apply_vf_chain(const std::vector<VectorFieldId>& ids, const TimeBracket<double>& b) {
  if (ids.empty()) return b.center();
  if (b.size() < 4 * ids.size() + 1)
    throw std::invalid_argument("apply_vf_chain: bracket too short for the chain");
  TimeBracket<double> cur = b;
  for (std::size_t j = ids.size(); j-- > 1;) {
    if (cur.size() >= 9) {
      cur = apply_vf_bracket<double>(ids[j], cur, nullptr);
    } else {
      throw std::invalid_argument("apply_vf_chain: bracket too short");
    }
  }
  return apply_vf(ids[0], cur);
}

SpinorField apply_vf_chain(const std::vector<VectorFieldId>& ids, const TimeBracket<Spinor4>& b,
                           const GammaSet& g) {
  if (ids.empty()) return b.center();
  if (b.size() < 4 * ids.size() + 1)
    throw std::invalid_argument("apply_vf_chain: bracket too short for the chain");
  TimeBracket<Spinor4> cur = b;
  for (std::size_t j = ids.size(); j-- > 1;) cur = apply_vf_bracket<Spinor4>(ids[j], cur, &g);
  return apply_vf(ids[0], cur, g);
}

GoodDerivativeResult good_derivative(int axis, const TimeBracket<double>& b,
                                     std::optional<double> excluded_radius, SpaceScheme scheme) {
  const std::size_t c = b.size() / 2;
  const ScalarField& f = b.slice(c);
  const double rex = excluded_radius.value_or(2.0 * f.grid().spacing());
  const ScalarField da = sderiv(f, axis, scheme);
  const ScalarField dt = b.time_derivative(c);
  GoodDerivativeResult res{ScalarField(f.grid(), f.time()), 0, 0.0};
  for (std::int64_t i = 0; i < f.size(); ++i) {
    const auto p = f.grid().point_of(i);
    const double r = f.grid().radius_of(i);
    if (r < rex) {
      res.field[i] = 0.0;
      res.excluded_nodes += 1;
      res.excluded_measure += f.grid().cell_measure(i);
      continue;
    }
    const double omega = p[static_cast<std::size_t>(axis - 1)] / r;
    res.field[i] = da[i] + omega * dt[i];
  }
  return res;
}

ScalarField null_form_q0(const TimeBracket<double>& bu, const TimeBracket<double>& bv,
                         SpaceScheme scheme) {
  const std::size_t cu = bu.size() / 2, cv = bv.size() / 2;
  const ScalarField& u = bu.slice(cu);
  const ScalarField& v = bv.slice(cv);
  u.require_same_grid(v);
  if (std::abs(u.time() - v.time()) > 1e-12)
    throw std::invalid_argument("null_form_q0: center times differ");
  const ScalarField ut = bu.time_derivative(cu);
  const ScalarField vt = bv.time_derivative(cv);
  ScalarField out(u.grid(), u.time());
  for (std::int64_t i = 0; i < u.size(); ++i) out[i] = ut[i] * vt[i];
  for (int a = 1; a <= 3; ++a) {
    const ScalarField du = sderiv(u, a, scheme);
    const ScalarField dv = sderiv(v, a, scheme);
    for (std::int64_t i = 0; i < u.size(); ++i) out[i] -= du[i] * dv[i];
  }
  return out;
}

TimeBracket<double> make_bracket(const std::function<double(double, const Vec3&)>& u,
                                 const GridSpec& grid, double t_center, double dt, int m) {
  TimeBracket<double> b;
  for (int j = -m; j <= m; ++j) {
    const double t = t_center + static_cast<double>(j) * dt;
    b.push(sample<double>(grid, t, [&](const Vec3& p) { return u(t, p); }));
  }
  return b;
}

TimeBracket<Spinor4> make_spinor_bracket(const std::function<Spinor4(double, const Vec3&)>& u,
                                         const GridSpec& grid, double t_center, double dt, int m) {
  TimeBracket<Spinor4> b;
  for (int j = -m; j <= m; ++j) {
    const double t = t_center + static_cast<double>(j) * dt;
    b.push(sample<Spinor4>(grid, t, [&](const Vec3& p) { return u(t, p); }));
  }
  return b;
}

ScalarField minus_box(const TimeBracket<double>& b, std::size_t i, SpaceScheme scheme) {
  if (i < 2 || i + 2 >= b.size())
    throw std::invalid_argument("minus_box: needs two slices on each side");
  const double d = b.dt();
  const ScalarField& f = b.slice(i);
  // 4th-order d_t^2
  ScalarField out(f.grid(), f.time());
  out.add_scaled(-1.0 / (12.0 * d * d), b.slice(i - 2));
  out.add_scaled(16.0 / (12.0 * d * d), b.slice(i - 1));
  out.add_scaled(-30.0 / (12.0 * d * d), f);
  out.add_scaled(16.0 / (12.0 * d * d), b.slice(i + 1));
  out.add_scaled(-1.0 / (12.0 * d * d), b.slice(i + 2));
  if (f.grid().kind() == GridKind::PeriodicBox3d) {
    out.add_scaled(-1.0, scheme == SpaceScheme::Stencil4
                             ? fd4_laplacian(f)
                             : SpectralBox3d::shared(f.grid()).laplacian(f));
  } else {
    // (1/r) d_r^2 (r f) with 4th-order stencils, odd extension of r f
    std::vector<double> w(static_cast<std::size_t>(f.size()));
    for (std::int64_t j = 0; j < f.size(); ++j)
      w[static_cast<std::size_t>(j)] = f.grid().radius_of(j) * f[j];
    const auto d2 = radial_d2(w, f.grid().spacing(), RadialParity::Odd);
    for (std::int64_t j = 0; j < f.size(); ++j)
      out[j] -= d2[static_cast<std::size_t>(j)] / f.grid().radius_of(j);
  }
  return out;
}

CommutatorResidual commutator_residual(VectorFieldId id,
                                       const std::function<double(double, const Vec3&)>& u,
                                       const GridSpec& coarse_grid, double t_center, double dt) {
  // local stencils; the wrap-contaminated boundary band stays out of the norm
  const double margin = 8.0 * coarse_grid.spacing();
  auto residual_at = [&](const GridSpec& g, double d) {
    const auto master = make_bracket(u, g, t_center, d, 4);  // 9 slices
    // -Box(Gamma u): Gamma u on the middle five slices, then d_t^2 - Lap
    TimeBracket<double> gu;
    for (std::size_t i = 2; i <= 6; ++i)
      gu.push(apply_vf(id, sub_bracket(master, i - 2, i + 2), SpaceScheme::Stencil4));
    const ScalarField box_gu = minus_box(gu, 2, SpaceScheme::Stencil4);
    // Gamma(-Box u)
    TimeBracket<double> bu;
    for (std::size_t i = 2; i <= 6; ++i) bu.push(minus_box(master, i, SpaceScheme::Stencil4));
    const ScalarField gu_box = apply_vf(id, bu, SpaceScheme::Stencil4);
    ScalarField res = box_gu;
    res -= gu_box;
    if (id == VectorFieldId::L0) {
      // [-Box, L0] u = -2 Box u, so subtract 2 (-Box u) at the center
      res.add_scaled(-2.0, bu.slice(2));
    }
    return interior_l2_norm(res, margin);
  };
  CommutatorResidual out;
  out.coarse = residual_at(coarse_grid, dt);
  const GridSpec fine = coarse_grid.kind() == GridKind::PeriodicBox3d
                            ? GridSpec::box3d(coarse_grid.extent(), 2 * coarse_grid.points_per_axis())
                            : GridSpec::radial(coarse_grid.extent(), 2 * coarse_grid.points_per_axis());
  out.fine = residual_at(fine, 0.5 * dt);
  // rounding guard: compare against the scale of the fields entering the
  // residual; below it the identity holds to machine precision and the
  // ratio of two noise values is meaningless
  double scale;
  {
    const auto master = make_bracket(u, coarse_grid, t_center, dt, 4);
    const ScalarField mb = minus_box(master, 4, SpaceScheme::Stencil4);
    scale = std::fmax(interior_l2_norm(mb, margin), interior_l2_norm(master.center(), margin));
  }
  if (out.fine <= 1e-9 * scale && out.coarse <= 1e-9 * scale) {
    out.at_rounding_floor = true;
    out.order = 10.0;
  } else {
    out.order = std::log2(out.coarse / out.fine);
  }
  return out;
}

double q0_leibniz_residual(VectorFieldId id, const std::function<double(double, const Vec3&)>& u,
                           const std::function<double(double, const Vec3&)>& v,
                           const GridSpec& grid, double t_center, double dt,
                           std::optional<double> margin) {
  if (id == VectorFieldId::L0 || is_hatted(id))
    throw std::invalid_argument("q0_leibniz_residual: identity holds for the ten Gamma fields only");
  const auto bu = make_bracket(u, grid, t_center, dt, 4);
  const auto bv = make_bracket(v, grid, t_center, dt, 4);
  const auto sch = SpaceScheme::Stencil4;
  // Gamma Q0(u, v)
  TimeBracket<double> q0b;
  for (std::size_t i = 2; i <= 6; ++i)
    q0b.push(null_form_q0(sub_bracket(bu, i - 2, i + 2), sub_bracket(bv, i - 2, i + 2), sch));
  const ScalarField lhs = apply_vf(id, q0b, sch);
  // Q0(Gamma u, v) + Q0(u, Gamma v) at the center
  TimeBracket<double> gub, gvb;
  for (std::size_t i = 2; i <= 6; ++i) {
    gub.push(apply_vf(id, sub_bracket(bu, i - 2, i + 2), sch));
    gvb.push(apply_vf(id, sub_bracket(bv, i - 2, i + 2), sch));
  }
  ScalarField rhs = null_form_q0(gub, sub_bracket(bv, 2, 6), sch);
  rhs += null_form_q0(sub_bracket(bu, 2, 6), gvb, sch);
  ScalarField res = lhs;
  res -= rhs;
  return interior_l2_norm(res, margin.value_or(8.0 * grid.spacing()));
}

}  // namespace wkg
