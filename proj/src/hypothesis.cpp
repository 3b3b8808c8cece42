#include "wkg/hypothesis.hpp"

#include <cmath>
#include <stdexcept>

#include "wkg/norms.hpp"
#include "wkg/weights.hpp"

namespace wkg {

namespace {

// coefficients of p_m in powers of xi = x - c, p_0 = 1,
// p_{m+1} = p_m' - (2 xi / w^2) p_m
std::vector<std::vector<double>> hermite_polys(int max_order, double w) {
  std::vector<std::vector<double>> p(static_cast<std::size_t>(max_order) + 1);
  p[0] = {1.0};
  const double c = -2.0 / (w * w);
  for (int m = 0; m < max_order; ++m) {
    const auto& cur = p[static_cast<std::size_t>(m)];
    std::vector<double> next(cur.size() + 1, 0.0);
    for (std::size_t k = 1; k < cur.size(); ++k)
      next[k - 1] += static_cast<double>(k) * cur[k];        // derivative
    for (std::size_t k = 0; k < cur.size(); ++k) next[k + 1] += c * cur[k];  // -2 xi/w^2 term
    p[static_cast<std::size_t>(m) + 1] = std::move(next);
  }
  return p;
}

double poly_eval(const std::vector<double>& coeff, double xi) {
  double v = 0.0;
  for (std::size_t k = coeff.size(); k-- > 0;) v = v * xi + coeff[k];
  return v;
}

// one bump: d^m of exp(-xi^2/w^2) along one axis
double axis_derivative(const std::vector<std::vector<double>>& polys, int order, double xi,
                       double w) {
  return poly_eval(polys[static_cast<std::size_t>(order)], xi) * std::exp(-xi * xi / (w * w));
}

}  // namespace

double GaussianSum::eval(const Vec3& x) const {
  double v = 0.0;
  for (const auto& b : bumps_) {
    const double dx = x[0] - b.center[0], dy = x[1] - b.center[1], dz = x[2] - b.center[2];
    v += b.amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) / (b.width * b.width));
  }
  return v;
}

Vec3 GaussianSum::gradient(const Vec3& x) const {
  Vec3 g = {0.0, 0.0, 0.0};
  for (const auto& b : bumps_) {
    const double dx = x[0] - b.center[0], dy = x[1] - b.center[1], dz = x[2] - b.center[2];
    const double e =
        b.amplitude * std::exp(-(dx * dx + dy * dy + dz * dz) / (b.width * b.width));
    const double c = -2.0 / (b.width * b.width);
    g[0] += c * dx * e;
    g[1] += c * dy * e;
    g[2] += c * dz * e;
  }
  return g;
}

double GaussianSum::derivative(const std::array<int, 3>& alpha, const Vec3& x) const {
  double v = 0.0;
  const int maxo = std::max({alpha[0], alpha[1], alpha[2]});
  for (const auto& b : bumps_) {
    const auto polys = hermite_polys(maxo, b.width);
    double term = b.amplitude;
    for (int a = 0; a < 3; ++a)
      term *= axis_derivative(polys, alpha[static_cast<std::size_t>(a)],
                              x[static_cast<std::size_t>(a)] - b.center[static_cast<std::size_t>(a)],
                              b.width);
    v += term;
  }
  return v;
}

std::vector<std::vector<double>> gradient_square_tables(const GaussianSum& f, const GridSpec& g,
                                                        int kmax) {
  const std::int64_t nn = g.node_count();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(kmax) + 1,
                                       std::vector<double>(static_cast<std::size_t>(nn), 0.0));
  if (f.empty()) return out;
  if (g.kind() != GridKind::PeriodicBox3d)
    throw std::invalid_argument("gradient_square_tables: needs the 3d box");
  const std::int64_t n = g.points_per_axis();

  // per-node cache of d^alpha f summed over bumps, one alpha at a time
  std::vector<double> dalpha(static_cast<std::size_t>(nn));
  for (int k = 0; k <= kmax; ++k) {
    for (int a0 = k; a0 >= 0; --a0)
      for (int a1 = k - a0; a1 >= 0; --a1) {
        const int a2 = k - a0 - a1;
        std::fill(dalpha.begin(), dalpha.end(), 0.0);
        for (const auto& b : f.bumps()) {
          const auto polys = hermite_polys(k, b.width);
          // per-axis value tables along each coordinate line
          std::vector<double> tx(static_cast<std::size_t>(n)), ty(static_cast<std::size_t>(n)),
              tz(static_cast<std::size_t>(n));
          for (std::int64_t i = 0; i < n; ++i) {
            tx[static_cast<std::size_t>(i)] =
                axis_derivative(polys, a0, g.coord(i) - b.center[0], b.width);
            ty[static_cast<std::size_t>(i)] =
                axis_derivative(polys, a1, g.coord(i) - b.center[1], b.width);
            tz[static_cast<std::size_t>(i)] =
                axis_derivative(polys, a2, g.coord(i) - b.center[2], b.width);
          }
          std::int64_t idx = 0;
          for (std::int64_t kz = 0; kz < n; ++kz)
            for (std::int64_t ky = 0; ky < n; ++ky) {
              const double yz = b.amplitude * ty[static_cast<std::size_t>(ky)] *
                                tz[static_cast<std::size_t>(kz)];
              for (std::int64_t kx = 0; kx < n; ++kx, ++idx)
                dalpha[static_cast<std::size_t>(idx)] += yz * tx[static_cast<std::size_t>(kx)];
            }
        }
        auto& acc = out[static_cast<std::size_t>(k)];
        for (std::int64_t i = 0; i < nn; ++i)
          acc[static_cast<std::size_t>(i)] +=
              dalpha[static_cast<std::size_t>(i)] * dalpha[static_cast<std::size_t>(i)];
      }
  }
  return out;
}

namespace {

// || <x>^i sqrt(table_k) || by grid quadrature
double weighted_norm(const GridSpec& g, const std::vector<double>& table_k, int i) {
  std::vector<double> dens(table_k.size());
  for (std::int64_t j = 0; j < static_cast<std::int64_t>(table_k.size()); ++j) {
    const double w = std::pow(jbracket(g.radius_of(j)), 2.0 * static_cast<double>(i));
    dens[static_cast<std::size_t>(j)] = w * table_k[static_cast<std::size_t>(j)];
  }
  return std::sqrt(integrate(g, dens));
}

void add_tables(std::vector<std::vector<double>>& acc,
                const std::vector<std::vector<double>>& more) {
  for (std::size_t k = 0; k < acc.size(); ++k)
    for (std::size_t i = 0; i < acc[k].size(); ++i) acc[k][i] += more[k][i];
}

ConditionVerdict make_verdict(const std::string& name, double measured, double bound) {
  return {name, measured, bound, bound - measured, measured <= bound};
}

}  // namespace

double eq16_bound_value(double C_KS, double K0) {
  return 1.0 / (71.0 * 71.0 * 174.0 * C_KS * C_KS * C_KS * K0 * K0);
}

HypothesisReport hypothesis_check_kgz(const KgzClosedFormData& d, const GridSpec& grid, double K0,
                                      double epsilon, int N, double C_KS) {
  if (N < 10)
    throw std::invalid_argument("hypothesis_check_kgz: the theorem needs N >= 10");
  HypothesisReport rep;
  rep.K0 = K0;
  rep.epsilon = epsilon;
  rep.C_KS = C_KS;
  rep.N = N;
  rep.eq16_bound = eq16_bound_value(C_KS, K0);

  const auto tn0 = gradient_square_tables(d.n0, grid, N);
  const auto tn1 = gradient_square_tables(d.n1, grid, N);
  std::vector<std::vector<double>> tE0(static_cast<std::size_t>(N) + 2,
                                       std::vector<double>(static_cast<std::size_t>(grid.node_count()), 0.0));
  std::vector<std::vector<double>> tE1(static_cast<std::size_t>(N) + 1,
                                       std::vector<double>(static_cast<std::size_t>(grid.node_count()), 0.0));
  for (int c = 0; c < 3; ++c) {
    add_tables(tE0, gradient_square_tables(d.E0[static_cast<std::size_t>(c)], grid, N + 1));
    add_tables(tE1, gradient_square_tables(d.E1[static_cast<std::size_t>(c)], grid, N));
  }

  // Eq. (1.3) / (1.5): wave data below K0, Klein-Gordon data below epsilon
  double wave_sum = 0.0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; i + j <= N; ++j) wave_sum += weighted_norm(grid, tn0[static_cast<std::size_t>(i + j)], i);
  for (int i = 0; i <= 9; ++i)
    for (int j = 0; i + j <= N - 1; ++j)
      wave_sum += weighted_norm(grid, tn1[static_cast<std::size_t>(i + j)], i + 1);
  double kg_sum = 0.0;
  for (int i = 0; i <= N + 1; ++i) kg_sum += weighted_norm(grid, tE0[static_cast<std::size_t>(i)], 12);
  for (int i = 0; i <= N; ++i) kg_sum += weighted_norm(grid, tE1[static_cast<std::size_t>(i)], 12);

  rep.conditions.push_back(make_verdict("eq13-wave", wave_sum, K0));
  rep.conditions.push_back(make_verdict("eq13-kg", kg_sum, epsilon));
  rep.conditions.push_back(make_verdict("eq15-wave", wave_sum, K0));
  rep.conditions.push_back(make_verdict("eq15-kg", kg_sum, epsilon));

  // Eq. (1.6): sign conditions and the smallness of the second-order tail
  double min_n0 = std::numeric_limits<double>::infinity();
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < grid.node_count(); ++i) {
    const auto p = grid.point_of(i);
    min_n0 = std::fmin(min_n0, d.n0.eval(p));
    const Vec3 gr = d.n0.gradient(p);
    const double gn = std::sqrt(gr[0] * gr[0] + gr[1] * gr[1] + gr[2] * gr[2]);
    min_gap = std::fmin(min_gap, d.n1.eval(p) - gn);
  }
  rep.conditions.push_back(make_verdict("eq16-n0-nonneg", -min_n0, 0.0));
  rep.conditions.push_back(make_verdict("eq16-n1-dominates", -min_gap, 0.0));
  double tail = 0.0;
  for (int i = 0; i <= 2; ++i) tail += weighted_norm(grid, tn0[static_cast<std::size_t>(i + 2)], i);
  for (int i = 0; i <= 2; ++i) tail += weighted_norm(grid, tn1[static_cast<std::size_t>(i + 1)], i);
  rep.conditions.push_back(make_verdict("eq16-smallness", tail, rep.eq16_bound));
  return rep;
}

HypothesisReport hypothesis_check_dkg(const DkgClosedFormData& d, const GridSpec& grid, double K0,
                                      double epsilon, int N, double C_KS) {
  if (N < 13)
    throw std::invalid_argument("hypothesis_check_dkg: the theorem needs N >= 13");
  HypothesisReport rep;
  rep.K0 = K0;
  rep.epsilon = epsilon;
  rep.C_KS = C_KS;
  rep.N = N;
  rep.eq16_bound = eq16_bound_value(C_KS, K0);

  // Eq. (1.11)/(1.12) sum over multi-indices I, each with its own norm
  // (unlike the KGZ conditions, which weigh the full gradient magnitude);
  // walk the alphas with the per-axis machinery and accumulate norms.
  auto alpha_norm_sum = [&](const GaussianSum& f, int kmax, int w) {
    if (f.empty()) return 0.0;
    const std::int64_t n = grid.points_per_axis();
    double total = 0.0;
    std::vector<double> dalpha(static_cast<std::size_t>(grid.node_count()));
    for (int k = 0; k <= kmax; ++k)
      for (int a0 = k; a0 >= 0; --a0)
        for (int a1 = k - a0; a1 >= 0; --a1) {
          const int a2 = k - a0 - a1;
          std::fill(dalpha.begin(), dalpha.end(), 0.0);
          for (const auto& b : f.bumps()) {
            const auto polys = hermite_polys(k, b.width);
            std::vector<double> tx(static_cast<std::size_t>(n)), ty(static_cast<std::size_t>(n)),
                tz(static_cast<std::size_t>(n));
            for (std::int64_t i = 0; i < n; ++i) {
              tx[static_cast<std::size_t>(i)] =
                  axis_derivative(polys, a0, grid.coord(i) - b.center[0], b.width);
              ty[static_cast<std::size_t>(i)] =
                  axis_derivative(polys, a1, grid.coord(i) - b.center[1], b.width);
              tz[static_cast<std::size_t>(i)] =
                  axis_derivative(polys, a2, grid.coord(i) - b.center[2], b.width);
            }
            std::int64_t idx = 0;
            for (std::int64_t kz = 0; kz < n; ++kz)
              for (std::int64_t ky = 0; ky < n; ++ky) {
                const double yz = b.amplitude * ty[static_cast<std::size_t>(ky)] *
                                  tz[static_cast<std::size_t>(kz)];
                for (std::int64_t kx = 0; kx < n; ++kx, ++idx)
                  dalpha[static_cast<std::size_t>(idx)] += yz * tx[static_cast<std::size_t>(kx)];
              }
          }
          std::vector<double> dens(dalpha.size());
          for (std::int64_t i = 0; i < grid.node_count(); ++i) {
            const double ww = std::pow(jbracket(grid.radius_of(i)), 2.0 * w);
            dens[static_cast<std::size_t>(i)] =
                ww * dalpha[static_cast<std::size_t>(i)] * dalpha[static_cast<std::size_t>(i)];
          }
          total += std::sqrt(integrate(grid, dens));
        }
    return total;
  };

  double kg_sum = alpha_norm_sum(d.v0, N + 1, N + 2) + alpha_norm_sum(d.v1, N, N + 1);
  double dirac_sum = 0.0;
  // spinor components enter quadratically per index: sum over alpha of
  // || <x>^{N+1} d^alpha psi0 || with |psi| the C^4 norm; assemble the
  // component sum of squares per alpha
  {
    const std::int64_t n = grid.points_per_axis();
    std::vector<double> sq(static_cast<std::size_t>(grid.node_count()));
    for (int k = 0; k <= N; ++k)
      for (int a0 = k; a0 >= 0; --a0)
        for (int a1 = k - a0; a1 >= 0; --a1) {
          const int a2 = k - a0 - a1;
          std::fill(sq.begin(), sq.end(), 0.0);
          for (int c = 0; c < 8; ++c) {
            const auto& f = d.psi0[static_cast<std::size_t>(c)];
            if (f.empty()) continue;
            std::vector<double> dalpha(static_cast<std::size_t>(grid.node_count()), 0.0);
            for (const auto& b : f.bumps()) {
              const auto polys = hermite_polys(k, b.width);
              std::vector<double> tx(static_cast<std::size_t>(n)), ty(static_cast<std::size_t>(n)),
                  tz(static_cast<std::size_t>(n));
              for (std::int64_t i = 0; i < n; ++i) {
                tx[static_cast<std::size_t>(i)] =
                    axis_derivative(polys, a0, grid.coord(i) - b.center[0], b.width);
                ty[static_cast<std::size_t>(i)] =
                    axis_derivative(polys, a1, grid.coord(i) - b.center[1], b.width);
                tz[static_cast<std::size_t>(i)] =
                    axis_derivative(polys, a2, grid.coord(i) - b.center[2], b.width);
              }
              std::int64_t idx = 0;
              for (std::int64_t kz = 0; kz < n; ++kz)
                for (std::int64_t ky = 0; ky < n; ++ky) {
                  const double yz = b.amplitude * ty[static_cast<std::size_t>(ky)] *
                                    tz[static_cast<std::size_t>(kz)];
                  for (std::int64_t kx = 0; kx < n; ++kx, ++idx)
                    dalpha[static_cast<std::size_t>(idx)] += yz * tx[static_cast<std::size_t>(kx)];
                }
            }
            for (std::int64_t i = 0; i < grid.node_count(); ++i)
              sq[static_cast<std::size_t>(i)] +=
                  dalpha[static_cast<std::size_t>(i)] * dalpha[static_cast<std::size_t>(i)];
          }
          dirac_sum += weighted_norm(grid, sq, N + 1);
        }
  }

  rep.conditions.push_back(make_verdict("eq111-kg", kg_sum, K0));
  rep.conditions.push_back(make_verdict("eq112-dirac", dirac_sum, epsilon));
  return rep;
}

}  // namespace wkg
