#include "wkg/energies.hpp"

#include <cmath>
#include <sstream>

#include "wkg/norms.hpp"

namespace wkg {

std::string EnergyReport::csv_header() {
  return "t,natural,conformal,ghost_stored,ghost_acc,dirac_stored,dirac_acc,exterior,"
         "matter_weighted,min_n0,min_sign2";
}

std::string EnergyReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << t << ',' << natural << ',' << conformal << ',' << ghost_kg.stored << ','
     << ghost_kg.accumulated << ',' << ghost_dirac.stored << ',' << ghost_dirac.accumulated << ','
     << exterior_chi << ',' << (matter_weighted ? *matter_weighted : 0.0) << ',' << min_n0 << ','
     << min_sign2;
  return os.str();
}

namespace {

std::array<ScalarField, 3> gradient(const ScalarField& u) {
  return {spatial_derivative(u, 1), spatial_derivative(u, 2), spatial_derivative(u, 3)};
}

inline Vec3 omega_at(const GridSpec& g, std::int64_t i) {
  const double r = g.radius_of(i);
  if (r < 1e-12) return {0.0, 0.0, 0.0};  // single undefined node
  const auto p = g.point_of(i);
  return {p[0] / r, p[1] / r, p[2] / r};
}

}  // namespace

double natural_energy(const ScalarPair& s) {
  const auto grad = gradient(s.u);
  std::vector<double> dens(static_cast<std::size_t>(s.u.size()));
  for (std::int64_t i = 0; i < s.u.size(); ++i) {
    double v = s.ut[i] * s.ut[i];
    for (int a = 0; a < 3; ++a)
      v += grad[static_cast<std::size_t>(a)][i] * grad[static_cast<std::size_t>(a)][i];
    dens[static_cast<std::size_t>(i)] = v;
  }
  return integrate(s.u.grid(), dens);
}

double natural_energy(const Vec3Field& u, const Vec3Field& ut) {
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    ScalarField uc(u.grid(), u.time()), utc(u.grid(), u.time());
    for (std::int64_t i = 0; i < u.size(); ++i) {
      uc[i] = u[i][static_cast<std::size_t>(c)];
      utc[i] = ut[i][static_cast<std::size_t>(c)];
    }
    total += natural_energy(ScalarPair(std::move(uc), std::move(utc)));
  }
  return total;
}

double conformal_energy(const TimeBracket<double>& b) {
  const ScalarField& u = b.center();
  static const VectorFieldId ids[] = {VectorFieldId::L0,      VectorFieldId::Omega12,
                                      VectorFieldId::Omega13, VectorFieldId::Omega23,
                                      VectorFieldId::L1,      VectorFieldId::L2,
                                      VectorFieldId::L3};
  std::vector<double> dens(static_cast<std::size_t>(u.size()));
  for (std::int64_t i = 0; i < u.size(); ++i) dens[static_cast<std::size_t>(i)] = u[i] * u[i];
  for (auto id : ids) {
    const ScalarField f = apply_vf(id, b);
    for (std::int64_t i = 0; i < u.size(); ++i) dens[static_cast<std::size_t>(i)] += f[i] * f[i];
  }
  return integrate(u.grid(), dens);
}

double conformal_energy(const ScalarPair& s) {
  const auto& g = s.u.grid();
  const double t = s.time();
  const auto grad = gradient(s.u);
  std::vector<double> dens(static_cast<std::size_t>(s.u.size()));
  for (std::int64_t i = 0; i < s.u.size(); ++i) {
    const auto p = g.point_of(i);
    double v = s.u[i] * s.u[i];
    // L0 = t d_t + x.grad
    double l0 = t * s.ut[i];
    for (int a = 0; a < 3; ++a)
      l0 += p[static_cast<std::size_t>(a)] * grad[static_cast<std::size_t>(a)][i];
    v += l0 * l0;
    // rotations
    const double o12 = p[0] * grad[1][i] - p[1] * grad[0][i];
    const double o13 = p[0] * grad[2][i] - p[2] * grad[0][i];
    const double o23 = p[1] * grad[2][i] - p[2] * grad[1][i];
    v += o12 * o12 + o13 * o13 + o23 * o23;
    // boosts
    for (int a = 0; a < 3; ++a) {
      const double la = t * grad[static_cast<std::size_t>(a)][i] +
                        p[static_cast<std::size_t>(a)] * s.ut[i];
      v += la * la;
    }
    dens[static_cast<std::size_t>(i)] = v;
  }
  return integrate(g, dens);
}

namespace {

double exterior_density_norm(const GridSpec& g, double t, double shift,
                             const std::vector<double>& sq) {
  std::vector<double> dens(sq.size());
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(sq.size()); ++i) {
    const double r = g.radius_of(i);
    const double w = jbracket(r - t) * chi_cutoff(r - 2.0 * t + shift);
    dens[static_cast<std::size_t>(i)] = w * w * sq[static_cast<std::size_t>(i)];
  }
  return std::sqrt(integrate(g, dens));
}

}  // namespace

double exterior_energy(const ScalarPair& s, double t, double chi_shift) {
  const auto& g = s.u.grid();
  std::vector<double> usq(static_cast<std::size_t>(s.u.size()));
  std::vector<double> dsq(static_cast<std::size_t>(s.u.size()));
  const auto grad = gradient(s.u);
  for (std::int64_t i = 0; i < s.u.size(); ++i) {
    usq[static_cast<std::size_t>(i)] = s.u[i] * s.u[i];
    double v = s.ut[i] * s.ut[i];
    for (int a = 0; a < 3; ++a)
      v += grad[static_cast<std::size_t>(a)][i] * grad[static_cast<std::size_t>(a)][i];
    dsq[static_cast<std::size_t>(i)] = v;
  }
  return exterior_density_norm(g, t, chi_shift, usq) + exterior_density_norm(g, t, chi_shift, dsq);
}

double exterior_energy(const Vec3Field& u, const Vec3Field& ut, double t, double chi_shift) {
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    ScalarField uc(u.grid(), u.time()), utc(u.grid(), u.time());
    for (std::int64_t i = 0; i < u.size(); ++i) {
      uc[i] = u[i][static_cast<std::size_t>(c)];
      utc[i] = ut[i][static_cast<std::size_t>(c)];
    }
    total += exterior_energy(ScalarPair(std::move(uc), std::move(utc)), t, chi_shift);
  }
  return total;
}

double exterior_energy(const SpinorField& u, double t, double chi_shift) {
  std::vector<double> sq(static_cast<std::size_t>(u.size()));
  for (std::int64_t i = 0; i < u.size(); ++i) sq[static_cast<std::size_t>(i)] = detail::abs2(u[i]);
  return exterior_density_norm(u.grid(), t, chi_shift, sq);
}

// ------------------------------------------------------------- KG ghost

void KgGhostTracker::push(const ScalarPair& s, const ScalarField* source) {
  push(s, gradient(s.u), source);
}

void KgGhostTracker::push(const ScalarPair& s, const std::array<ScalarField, 3>& grad,
                          const ScalarField* source) {
  const auto& g = s.u.grid();
  const double t = s.time();

  std::vector<double> stored_p(static_cast<std::size_t>(s.u.size()));
  std::vector<double> stored_e(static_cast<std::size_t>(s.u.size()));
  std::vector<double> diss_p(static_cast<std::size_t>(s.u.size()));
  std::vector<double> diss_e(static_cast<std::size_t>(s.u.size()));
  std::vector<double> src_e(source ? static_cast<std::size_t>(s.u.size()) : 0);

  for (std::int64_t i = 0; i < s.u.size(); ++i) {
    const double r = g.radius_of(i);
    const double rho = r - t;
    const double eq = table_->exp_q(rho);
    const double qp = table_->q_prime(rho);
    const Vec3 w = omega_at(g, i);
    double du2 = s.ut[i] * s.ut[i];
    double gsum = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double da = grad[static_cast<std::size_t>(a)][i];
      du2 += da * da;
      const double ga = da + w[static_cast<std::size_t>(a)] * s.ut[i];
      gsum += ga * ga;
    }
    const double u2 = s.u[i] * s.u[i];
    stored_p[static_cast<std::size_t>(i)] = du2 + u2;
    stored_e[static_cast<std::size_t>(i)] = 0.5 * eq * (du2 + u2);
    diss_p[static_cast<std::size_t>(i)] = qp * (u2 + gsum);
    diss_e[static_cast<std::size_t>(i)] = 0.5 * eq * qp * (u2 + gsum);
    if (source) src_e[static_cast<std::size_t>(i)] = eq * s.ut[i] * (*source)[i];
  }

  stored_plain_ = integrate(g, stored_p);
  stored_eq_ = integrate(g, stored_e);
  const double dp = integrate(g, diss_p);
  const double de = integrate(g, diss_e);
  const double sr = source ? integrate(g, src_e) : 0.0;

  if (count_ > 0) {
    const double dt = t - last_t_;
    acc_plain_ += 0.5 * dt * (prev_diss_plain_ + dp);
    acc_eq_ += 0.5 * dt * (prev_diss_eq_ + de);
    acc_src_ += 0.5 * dt * (prev_src_ + sr);
  }
  prev_diss_plain_ = dp;
  prev_diss_eq_ = de;
  prev_src_ = sr;
  last_t_ = t;
  if (count_ == 0) first_identity_ = stored_eq_;
  ++count_;
}

double KgGhostTracker::identity_drift_rel() const {
  if (count_ == 0 || first_identity_ == 0.0) return 0.0;
  return std::abs(identity_value() - first_identity_) / first_identity_;
}

// ----------------------------------------------------------- Dirac ghost

void DiracGhostTracker::push(const SpinorField& phi, const SpinorField* F) {
  const auto& g = phi.grid();
  const double t = phi.time();

  std::vector<double> stored_p(static_cast<std::size_t>(phi.size()));
  std::vector<double> stored_e(static_cast<std::size_t>(phi.size()));
  std::vector<double> diss_p(static_cast<std::size_t>(phi.size()));
  std::vector<double> diss_e(static_cast<std::size_t>(phi.size()));
  std::vector<double> src_e(F ? static_cast<std::size_t>(phi.size()) : 0);

  const Mat4c g0 = gamma_->gamma(0);
  for (std::int64_t i = 0; i < phi.size(); ++i) {
    const double r = g.radius_of(i);
    const double rho = r - t;
    const double eq = table_->exp_q(rho);
    const double qp = table_->q_prime(rho);
    const double a2 = detail::abs2(phi[i]);
    // |[phi]_-|^2 = phi^* (I - A)^2 phi = 2 phi^* (I - A) phi
    const Vec3 w = omega_at(g, i);
    const Vec4c v = to_eigen(phi[i]);
    Vec4c av = Vec4c::Zero();
    for (int a = 0; a < 3; ++a)
      av += w[static_cast<std::size_t>(a)] * (gamma_->gamma0_gamma(a + 1) * v);
    const double minus2 = (v - av).squaredNorm();
    stored_p[static_cast<std::size_t>(i)] = a2;
    stored_e[static_cast<std::size_t>(i)] = eq * a2;
    diss_p[static_cast<std::size_t>(i)] = qp * minus2;
    diss_e[static_cast<std::size_t>(i)] = 0.5 * eq * qp * minus2;
    if (F) {
      const Vec4c f = to_eigen((*F)[i]);
      const Complex z = v.dot(g0 * f);  // phi^* g0 F
      src_e[static_cast<std::size_t>(i)] = eq * (Complex(0, 1) * (z - std::conj(z))).real();
    }
  }

  stored_plain_ = integrate(g, stored_p);
  stored_eq_ = integrate(g, stored_e);
  const double dp = integrate(g, diss_p);
  const double de = integrate(g, diss_e);
  const double sr = F ? integrate(g, src_e) : 0.0;

  if (count_ > 0) {
    const double dt = t - last_t_;
    acc_plain_ += 0.5 * dt * (prev_diss_plain_ + dp);
    acc_eq_ += 0.5 * dt * (prev_diss_eq_ + de);
    acc_src_ += 0.5 * dt * (prev_src_ + sr);
  }
  prev_diss_plain_ = dp;
  prev_diss_eq_ = de;
  prev_src_ = sr;
  last_t_ = t;
  if (count_ == 0) first_identity_ = stored_eq_;
  ++count_;
}

double DiracGhostTracker::identity_drift_rel() const {
  if (count_ == 0 || first_identity_ == 0.0) return 0.0;
  return std::abs(identity_value() - first_identity_) / first_identity_;
}

// -------------------------------------------------------- matter weighted

void MatterWeightedTracker::push(const Vec3Field& E, const Vec3Field& Et, const ScalarField& n0,
                                 const ScalarField& n0t) {
  const auto& g = E.grid();
  const double t = E.time();
  std::vector<double> dens(static_cast<std::size_t>(E.size()));

  std::array<Vec3Field, 3> grad = {spatial_derivative(E, 1), spatial_derivative(E, 2),
                                   spatial_derivative(E, 3)};
  for (std::int64_t i = 0; i < E.size(); ++i) {
    const double rho = g.radius_of(i) - t;
    const double eq = table_->exp_q(rho);
    double dE2 = detail::abs2(Et[i]);
    for (int a = 0; a < 3; ++a) dE2 += detail::abs2(grad[static_cast<std::size_t>(a)][i]);
    const double E2 = detail::abs2(E[i]);
    dens[static_cast<std::size_t>(i)] = 0.5 * eq * (dE2 + E2 + n0[i] * E2);
    min_n0_ = std::fmin(min_n0_, n0[i]);
    min_sign2_ = std::fmin(min_sign2_, table_->q_prime(rho) - n0t[i]);
  }
  value_ = integrate(g, dens);
}

}  // namespace wkg
