#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wkg/energies.hpp"
#include "wkg/jets.hpp"
#include "wkg/kirchhoff.hpp"
#include "wkg/propagators.hpp"
#include "wkg/vector_fields.hpp"

namespace wkg {

// ---------------------------------------------------------- decay fits

struct DecayFit {
  std::string observable;
  double t_min = 0.0, t_max = 0.0;
  double exponent = 0.0;  // log-log least-squares slope
  double r2 = 0.0;
  double ratio_max_min = 0.0;  // boundedness statistic for weighted sups
  std::vector<std::pair<double, double>> series;
};

/// Least-squares fit of log(y) against log(t) on the window; the series
/// must be strictly positive there.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   const std::string& observable, double t_min, double t_max);

// ---------------------------------------------------------- scattering

/// || S(-t2) state(t2) - S(-t1) state(t1) || in the component norm:
/// wave Hdot^1 x L^2, Klein-Gordon H^1 x L^2. States carry their times.
double pullback_distance(PropagatorKind kind, const ScalarPair& a, const ScalarPair& b);
/// Dirac pull-back Cauchy difference in L^2.
double pullback_distance_dirac(const SpinorField& a, const SpinorField& b, const GammaSet& g,
                               double mass = 0.0);

/// Distances d(t_k, t_{k+1}) for consecutive states of a trajectory; a
/// forced component scatters iff these decay along dyadic pairs.
std::vector<double> scattering_residual(PropagatorKind kind, const std::vector<ScalarPair>& states);
std::vector<double> scattering_residual_dirac(const std::vector<SpinorField>& states,
                                              const GammaSet& g, double mass = 0.0);

// ------------------------------------------------- manufactured subjects

/// Closed-form scalar function of (t, x) with derivatives to order 3
/// through jets; the same callable serves pointwise probes and grid
/// sampling.
struct ManufacturedScalar {
  std::string name;
  std::function<Jet(const std::array<Jet, 4>&)> fn;

  Jet jet(double t, const Vec3& x, int ord = 3) const;
  double eval(double t, const Vec3& x) const { return jet(t, x, 0).value(); }
  std::function<double(double, const Vec3&)> sampler() const;
};

struct ManufacturedSpinor {
  std::string name;
  std::function<std::array<CJet, 4>(const std::array<CJet, 4>&)> fn;
  std::array<CJet, 4> jet(double t, const Vec3& x, int ord = 3) const;
};

/// Jet-level application of one Klainerman field (value drops one order).
Jet jet_vf(VectorFieldId id, const Jet& u, const std::array<Jet, 4>& X);

/// Sum over all canonical products Gamma^I (multisets of the given fields)
/// with |I| <= max_order of || Gamma^I u || at the master bracket's center,
/// reusing shared prefixes. Orders: sums[k] collects |I| = k.
std::vector<double> vf_norm_levels(const TimeBracket<double>& master,
                                   const std::vector<VectorFieldId>& fields, int max_order);

// ------------------------------------------------- inequality margins

enum class InequalityName {
  PartialDecay,
  KlainermanSobolev,
  StandardSobolev,
  ConeInterior,
  GlobalSobolev,
  MksDecay,
  HessianExtra,
  KgWeighted,
  DiracDecay,
  Q0Bound,
  Q0Interior,
  HomoL2,
};

std::string inequality_name(InequalityName n);

struct MarginConfig {
  GridSpec grid = GridSpec::box3d(8.0, 32);
  double t = 2.0;             // evaluation time
  int probes = 2000;          // pointwise probe budget
  std::uint64_t seed = 7;
  double bracket_dt = 0.02;   // time-stencil spacing for norm machinery
  double probe_radius = 6.0;  // spatial probe range
};

struct MarginReport {
  InequalityName name;
  double lhs_max = 0.0;
  double rhs_at_lhs_max = 0.0;
  double empirical_constant = 0.0;  // max over probes of lhs / rhs
  int probes_used = 0;
};

/// Empirical constant of one decay/Sobolev/null-form lemma on a
/// manufactured subject. Pointwise lemmas probe random points in the
/// stated region (origin neighborhood excluded); norm-based lemmas
/// evaluate the right side on the grid. Pass a second subject for the
/// bilinear Q0 lemmas; pass a spinor subject for the Dirac lemma; HomoL2
/// takes closed-form wave data.
MarginReport inequality_margin(InequalityName name, const ManufacturedScalar& u,
                               const MarginConfig& cfg,
                               const ManufacturedScalar* v = nullptr);
MarginReport inequality_margin_dirac(const ManufacturedSpinor& phi, const GammaSet& g,
                                     const MarginConfig& cfg);
MarginReport inequality_margin_homo_l2(const ClosedFormWave& data, const MarginConfig& cfg);

// --------------------------------------------- Sobolev constant estimate

struct WaveTrial {
  std::string description;
  std::function<double(const Vec3&)> u0;
  std::function<double(const Vec3&)> u1;
};

struct SobolevEstimate {
  double lower_bound = 0.0;
  std::string maximizer;
  int trial_count = 0;
};

/// Lower bound for the Klainerman-Sobolev constant: max over trials,
/// probe times, and grid nodes of
///   |u(t,x)| <t+r> <t-r>^{1/2} / sum_{|I|<=2} ||Z^I u(t)||
/// with u the free wave evolution of the trial data. Every ratio is a
/// valid certificate, so the maximum is a true lower bound for the
/// discretized problem.
SobolevEstimate sobolev_constant_estimate(const std::vector<WaveTrial>& trials,
                                          const GridSpec& grid,
                                          const std::vector<double>& sample_times,
                                          double bracket_dt = 0.02);

/// The shipped 20-trial family (Gaussian bumps and two-bump superpositions
/// of varying width and offset).
std::vector<WaveTrial> shipped_trial_family(int count = 20);

}  // namespace wkg
