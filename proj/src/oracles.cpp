#include "wkg/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace wkg::oracle {

void OracleConfig::validate() const {
  if (levels.empty()) throw std::invalid_argument("OracleConfig: no levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i].first >= levels[i - 1].first || levels[i].second >= levels[i - 1].second)
      throw std::invalid_argument("OracleConfig: levels must strictly decrease");
  for (const auto& [k, v] : tolerances)
    if (v <= 0.0) throw std::invalid_argument("OracleConfig: tolerance " + k + " must be > 0");
}

namespace {

double central_diff(const std::function<double(const std::array<double, 4>&)>& f,
                    std::array<double, 4> p, int order, int dir, double h) {
  std::array<double, 4> lo = p, hi = p;
  lo[static_cast<std::size_t>(dir)] -= h;
  hi[static_cast<std::size_t>(dir)] += h;
  if (order == 1) return (f(hi) - f(lo)) / (2.0 * h);
  return (f(hi) - 2.0 * f(p) + f(lo)) / (h * h);
}

}  // namespace

FdResult fd_derivative(const std::function<double(const std::array<double, 4>&)>& f,
                       const std::array<double, 4>& point, int order, int direction, double h0) {
  if (order != 1 && order != 2) throw std::invalid_argument("fd_derivative: order is 1 or 2");
  // Richardson table over halved steps, 2nd-order base rule
  constexpr int kLevels = 8;
  double tab[kLevels][kLevels];
  double h = h0;
  double best = 0.0, err = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kLevels; ++i, h *= 0.5) {
    tab[i][0] = central_diff(f, point, order, direction, h);
    double p4 = 4.0;
    for (int j = 1; j <= i; ++j, p4 *= 4.0)
      tab[i][j] = (p4 * tab[i][j - 1] - tab[i - 1][j - 1]) / (p4 - 1.0);
    if (i > 0) {
      const double e = std::abs(tab[i][i] - tab[i - 1][i - 1]);
      if (e < err) {
        err = e;
        best = tab[i][i];
      } else if (e > 4.0 * err) {
        break;  // rounding noise took over
      }
    } else {
      best = tab[0][0];
    }
  }
  if (!std::isfinite(best) || !std::isfinite(err))
    throw std::runtime_error("fd_derivative: extrapolation did not converge");
  return {best, err};
}

FdResult fd_mixed_derivative(const std::function<double(const std::array<double, 4>&)>& f,
                             const std::array<double, 4>& point, int di, int dj, double h0) {
  auto inner = [&](const std::array<double, 4>& p) {
    return fd_derivative(f, p, 1, dj, h0).value;
  };
  return fd_derivative(inner, point, 1, di, h0);
}

void rk4_step(std::vector<double>& y, double t, double dt,
              const std::function<std::vector<double>(double, const std::vector<double>&)>& rhs) {
  const std::vector<double> k1 = rhs(t, y);
  std::vector<double> tmp(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
  const std::vector<double> k2 = rhs(t + 0.5 * dt, tmp);
  for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
  const std::vector<double> k3 = rhs(t + 0.5 * dt, tmp);
  for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + dt * k3[i];
  const std::vector<double> k4 = rhs(t + dt, tmp);
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// ------------------------------------------------------------- matrices

OMat omat_zero() {
  OMat m{};
  return m;
}
OMat omat_identity() {
  OMat m{};
  for (int i = 0; i < 4; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
  return m;
}
OMat omat_mul(const OMat& a, const OMat& b) {
  OMat m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      std::complex<double> s = 0.0;
      for (int k = 0; k < 4; ++k)
        s += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
             b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
    }
  return m;
}
OMat omat_add(const OMat& a, const OMat& b) {
  OMat m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
          b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}
OMat omat_scale(std::complex<double> s, const OMat& a) {
  OMat m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          s * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}
OMat omat_adjoint(const OMat& a) {
  OMat m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          std::conj(a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
  return m;
}
double omat_max_abs(const OMat& a) {
  double v = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      v = std::fmax(v, std::abs(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
  return v;
}

std::array<OMat, 4> standard_gammas() {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  std::array<OMat, 4> g;
  g[0] = omat_zero();
  g[0][0][0] = 1;
  g[0][1][1] = 1;
  g[0][2][2] = -1;
  g[0][3][3] = -1;
  const C s1[2][2] = {{0, 1}, {1, 0}};
  const C s2[2][2] = {{0, -I}, {I, 0}};
  const C s3[2][2] = {{1, 0}, {0, C(-1.0)}};
  auto fill = [](const C s[2][2]) {
    OMat m{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j + 2)] = s[i][j];
        m[static_cast<std::size_t>(i + 2)][static_cast<std::size_t>(j)] = -s[i][j];
      }
    return m;
  };
  g[1] = fill(s1);
  g[2] = fill(s2);
  g[3] = fill(s3);
  return g;
}

// ----------------------------------------------------------- quadrature

namespace {
void legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * xi * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      const double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = xi;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
}
}  // namespace

double box_quadrature(const std::function<double(double, double, double)>& f, double half_width,
                      int points_per_axis) {
  std::vector<double> x, w;
  legendre_nodes(points_per_axis, x, w);
  const double L = half_width;
  double total = 0.0;
  for (int i = 0; i < points_per_axis; ++i)
    for (int j = 0; j < points_per_axis; ++j)
      for (int k = 0; k < points_per_axis; ++k)
        total += w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] *
                 w[static_cast<std::size_t>(k)] *
                 f(L * x[static_cast<std::size_t>(i)], L * x[static_cast<std::size_t>(j)],
                   L * x[static_cast<std::size_t>(k)]);
  return total * L * L * L;
}

namespace {
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

// ------------------------------------------------------------------ MOL

namespace {

// periodic 4th-order stencils on the box, independent of the FFT path
struct BoxStencil {
  std::int64_t n;
  double h;
  explicit BoxStencil(const GridSpec& g) : n(g.points_per_axis()), h(g.spacing()) {
    if (g.kind() != GridKind::PeriodicBox3d)
      throw std::invalid_argument("reference integrator: needs the 3d box");
    if (n > 48) throw std::invalid_argument("reference integrator: grids above 48^3 not supported");
  }
  std::int64_t wrap(std::int64_t i) const { return (i % n + n) % n; }
  std::int64_t idx(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return wrap(i) + n * (wrap(j) + n * wrap(k));
  }

  template <class T>
  std::vector<T> laplacian(const std::vector<T>& f) const {
    std::vector<T> out(f.size());
    const double c = 1.0 / (12.0 * h * h);
    for (std::int64_t k = 0; k < n; ++k)
      for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < n; ++i) {
          T acc = -90.0 * c * f[static_cast<std::size_t>(idx(i, j, k))];
          acc += c * (-f[static_cast<std::size_t>(idx(i - 2, j, k))] +
                      16.0 * f[static_cast<std::size_t>(idx(i - 1, j, k))] +
                      16.0 * f[static_cast<std::size_t>(idx(i + 1, j, k))] -
                      f[static_cast<std::size_t>(idx(i + 2, j, k))]);
          acc += c * (-f[static_cast<std::size_t>(idx(i, j - 2, k))] +
                      16.0 * f[static_cast<std::size_t>(idx(i, j - 1, k))] +
                      16.0 * f[static_cast<std::size_t>(idx(i, j + 1, k))] -
                      f[static_cast<std::size_t>(idx(i, j + 2, k))]);
          acc += c * (-f[static_cast<std::size_t>(idx(i, j, k - 2))] +
                      16.0 * f[static_cast<std::size_t>(idx(i, j, k - 1))] +
                      16.0 * f[static_cast<std::size_t>(idx(i, j, k + 1))] -
                      f[static_cast<std::size_t>(idx(i, j, k + 2))]);
          out[static_cast<std::size_t>(idx(i, j, k))] = acc;
        }
    return out;
  }

  template <class T>
  std::vector<T> derivative(const std::vector<T>& f, int axis) const {
    std::vector<T> out(f.size());
    const double c = 1.0 / (12.0 * h);
    auto shift = [&](std::int64_t i, std::int64_t j, std::int64_t k, int d) {
      if (axis == 1) return idx(i + d, j, k);
      if (axis == 2) return idx(i, j + d, k);
      return idx(i, j, k + d);
    };
    for (std::int64_t k = 0; k < n; ++k)
      for (std::int64_t j = 0; j < n; ++j)
        for (std::int64_t i = 0; i < n; ++i)
          out[static_cast<std::size_t>(idx(i, j, k))] =
              c * (f[static_cast<std::size_t>(shift(i, j, k, -2))] -
                   8.0 * f[static_cast<std::size_t>(shift(i, j, k, -1))] +
                   8.0 * f[static_cast<std::size_t>(shift(i, j, k, 1))] -
                   f[static_cast<std::size_t>(shift(i, j, k, 2))]);
    return out;
  }
};

template <class S>
void axpy(std::vector<S>& y, double a, const std::vector<S>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

RefKgzState kgz_rhs(const BoxStencil& st, const RefKgzState& s) {
  RefKgzState f;
  std::vector<double> pot = st.laplacian(s.n1);
  for (std::size_t i = 0; i < pot.size(); ++i) pot[i] += s.n0[i];
  for (int c = 0; c < 3; ++c) {
    const auto& E = s.E[static_cast<std::size_t>(c)];
    f.E[static_cast<std::size_t>(c)] = s.Et[static_cast<std::size_t>(c)];
    auto lap = st.laplacian(E);
    for (std::size_t i = 0; i < lap.size(); ++i) lap[i] += -E[i] - pot[i] * E[i];
    f.Et[static_cast<std::size_t>(c)] = std::move(lap);
  }
  f.n0 = s.n0t;
  f.n0t = st.laplacian(s.n0);
  f.n1 = s.n1t;
  f.n1t = st.laplacian(s.n1);
  for (std::size_t i = 0; i < f.n1t.size(); ++i) {
    double e2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double v = s.E[static_cast<std::size_t>(c)][i];
      e2 += v * v;
    }
    f.n1t[i] += e2;
  }
  return f;
}

void kgz_axpy(RefKgzState& y, double a, const RefKgzState& d) {
  for (int c = 0; c < 3; ++c) {
    axpy(y.E[static_cast<std::size_t>(c)], a, d.E[static_cast<std::size_t>(c)]);
    axpy(y.Et[static_cast<std::size_t>(c)], a, d.Et[static_cast<std::size_t>(c)]);
  }
  axpy(y.n0, a, d.n0);
  axpy(y.n0t, a, d.n0t);
  axpy(y.n1, a, d.n1);
  axpy(y.n1t, a, d.n1t);
}

RefDkgState dkg_rhs(const BoxStencil& st, const RefDkgState& s) {
  using C = std::complex<double>;
  const auto g = standard_gammas();
  RefDkgState f;
  std::vector<double> v = s.V0;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += s.V1[i];

  // d_t psi = -g0 g^a d_a psi + i v g0 psi (massless)
  std::array<OMat, 3> m;
  for (int a = 0; a < 3; ++a)
    m[static_cast<std::size_t>(a)] = omat_scale(-1.0, omat_mul(g[0], g[static_cast<std::size_t>(a) + 1]));
  const std::size_t nn = s.psi[0].size();
  for (int c = 0; c < 4; ++c) f.psi[static_cast<std::size_t>(c)].assign(nn, C(0.0));
  for (int a = 1; a <= 3; ++a) {
    std::array<std::vector<C>, 4> d;
    for (int c = 0; c < 4; ++c)
      d[static_cast<std::size_t>(c)] = st.derivative(s.psi[static_cast<std::size_t>(c)], a);
    for (std::size_t i = 0; i < nn; ++i)
      for (int r = 0; r < 4; ++r) {
        C acc = 0.0;
        for (int c = 0; c < 4; ++c)
          acc += m[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(r)]
                  [static_cast<std::size_t>(c)] *
                 d[static_cast<std::size_t>(c)][i];
        f.psi[static_cast<std::size_t>(r)][i] += acc;
      }
  }
  // potential term: i v g0 psi with g0 = diag(1,1,-1,-1)
  for (std::size_t i = 0; i < nn; ++i) {
    const C iv(0.0, v[i]);
    f.psi[0][i] += iv * s.psi[0][i];
    f.psi[1][i] += iv * s.psi[1][i];
    f.psi[2][i] -= iv * s.psi[2][i];
    f.psi[3][i] -= iv * s.psi[3][i];
  }

  f.V0 = s.V0t;
  f.V0t = st.laplacian(s.V0);
  for (std::size_t i = 0; i < nn; ++i) f.V0t[i] -= s.V0[i];
  f.V1 = s.V1t;
  f.V1t = st.laplacian(s.V1);
  for (std::size_t i = 0; i < nn; ++i) {
    // psi* g0 psi
    const double dens = std::norm(s.psi[0][i]) + std::norm(s.psi[1][i]) -
                        std::norm(s.psi[2][i]) - std::norm(s.psi[3][i]);
    f.V1t[i] += -s.V1[i] + dens;
  }
  return f;
}

void dkg_axpy(RefDkgState& y, double a, const RefDkgState& d) {
  for (int c = 0; c < 4; ++c)
    for (std::size_t i = 0; i < y.psi[static_cast<std::size_t>(c)].size(); ++i)
      y.psi[static_cast<std::size_t>(c)][i] += a * d.psi[static_cast<std::size_t>(c)][i];
  axpy(y.V0, a, d.V0);
  axpy(y.V0t, a, d.V0t);
  axpy(y.V1, a, d.V1);
  axpy(y.V1t, a, d.V1t);
}

}  // namespace

RefKgzState ref_kgz_step(const RefKgzState& s, const GridSpec& g, double dt) {
  const BoxStencil st(g);
  if (dt > 0.5 * g.spacing()) throw std::invalid_argument("reference integrator: CFL dt <= h/2");
  const RefKgzState k1 = kgz_rhs(st, s);
  RefKgzState y = s;
  kgz_axpy(y, 0.5 * dt, k1);
  const RefKgzState k2 = kgz_rhs(st, y);
  y = s;
  kgz_axpy(y, 0.5 * dt, k2);
  const RefKgzState k3 = kgz_rhs(st, y);
  y = s;
  kgz_axpy(y, dt, k3);
  const RefKgzState k4 = kgz_rhs(st, y);
  RefKgzState out = s;
  kgz_axpy(out, dt / 6.0, k1);
  kgz_axpy(out, dt / 3.0, k2);
  kgz_axpy(out, dt / 3.0, k3);
  kgz_axpy(out, dt / 6.0, k4);
  out.t = s.t + dt;
  return out;
}

RefDkgState ref_dkg_step(const RefDkgState& s, const GridSpec& g, double dt) {
  const BoxStencil st(g);
  if (dt > 0.5 * g.spacing()) throw std::invalid_argument("reference integrator: CFL dt <= h/2");
  const RefDkgState k1 = dkg_rhs(st, s);
  RefDkgState y = s;
  dkg_axpy(y, 0.5 * dt, k1);
  const RefDkgState k2 = dkg_rhs(st, y);
  y = s;
  dkg_axpy(y, 0.5 * dt, k2);
  const RefDkgState k3 = dkg_rhs(st, y);
  y = s;
  dkg_axpy(y, dt, k3);
  const RefDkgState k4 = dkg_rhs(st, y);
  RefDkgState out = s;
  dkg_axpy(out, dt / 6.0, k1);
  dkg_axpy(out, dt / 3.0, k2);
  dkg_axpy(out, dt / 3.0, k3);
  dkg_axpy(out, dt / 6.0, k4);
  out.t = s.t + dt;
  return out;
}

}  // namespace wkg::oracle
