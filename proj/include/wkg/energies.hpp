#pragma once

#include <optional>
#include <string>

#include "wkg/gamma.hpp"
#include "wkg/propagators.hpp"
#include "wkg/vector_fields.hpp"
#include "wkg/weights.hpp"

namespace wkg {

struct GhostEntry {
  double stored = 0.0;       // instantaneous part, no weight
  double accumulated = 0.0;  // history integral, nondecreasing
};

/// One row of the energy diagnostics: every functional the runs track,
/// evaluated at one time.
struct EnergyReport {
  double t = 0.0;
  double natural = 0.0;
  double conformal = 0.0;
  GhostEntry ghost_kg;
  GhostEntry ghost_dirac;
  double exterior_chi = 0.0;
  std::optional<double> matter_weighted;
  double min_n0 = 0.0;    // min of n0 over the slab so far
  double min_sign2 = 0.0; // min of <r-s>^{-1-2delta} - d_t n0 over the slab
  double delta = 0.05;

  static std::string csv_header();
  std::string csv_row() const;
};

/// E(t,u) = int (|d_t u|^2 + sum_a |d_a u|^2) dx.
double natural_energy(const ScalarPair& s);
double natural_energy(const Vec3Field& u, const Vec3Field& ut);

/// E_con(t,u) = int (|L0 u|^2 + u^2 + sum |Omega u|^2 + sum |L u|^2) dx,
/// with the vector fields applied through a >= 5 slice time bracket.
double conformal_energy(const TimeBracket<double>& b);
/// Same functional with the stored time derivative (integrator stage
/// values) instead of a bracket stencil.
double conformal_energy(const ScalarPair& s);

/// ||<r-t> chi(r-2t+shift) u|| + ||<r-t> chi(r-2t+shift) du||.
double exterior_energy(const ScalarPair& s, double t, double chi_shift = 0.0);
double exterior_energy(const Vec3Field& u, const Vec3Field& ut, double t, double chi_shift = 0.0);
double exterior_energy(const SpinorField& u, double t, double chi_shift = 0.0);

/// Ghost energy bookkeeping for a Klein-Gordon trajectory fed at uniform
/// time steps. Two layers:
///   - the plain functional E_gst,1: stored int(|du|^2+u^2) plus the
///     accumulated int <s-r>^{-1-2delta} (u^2 + sum |G_a u|^2),
///   - the exact e^q identity from multiplying the equation by
///     e^q d_t u: for -Box u + u = G,
///       (1/2) int e^q (|du|^2 + u^2)          (stored)
///     + (1/2) intint e^q q' (u^2 + |G u|^2)   (trapezoid accumulator)
///     - intint e^q (d_t u) G                  (source accumulator)
///     is conserved; the relative drift measures the time-quadrature
///     error and must shrink at order ~2 in the sampling dt.
/// Omega is taken as 0 at the exact origin node (single node, where
/// x/r is undefined).
class KgGhostTracker {
public:
  explicit KgGhostTracker(double delta) : delta_(delta), table_(&GhostWeightTable::shared(delta)) {}

  void push(const ScalarPair& s, const ScalarField* source = nullptr);
  /// Same, with caller-supplied spatial gradients (e.g. from cached
  /// spectra along an exact flow).
  void push(const ScalarPair& s, const std::array<ScalarField, 3>& grad,
            const ScalarField* source);

  double delta() const { return delta_; }
  GhostEntry entry() const { return {stored_plain_, acc_plain_}; }
  double identity_value() const { return stored_eq_ + acc_eq_ - acc_src_; }
  double identity_drift_rel() const;
  std::size_t samples() const { return count_; }

private:
  double delta_;
  const GhostWeightTable* table_;
  std::size_t count_ = 0;
  double last_t_ = 0.0;
  double stored_plain_ = 0.0, acc_plain_ = 0.0;
  double stored_eq_ = 0.0, acc_eq_ = 0.0, acc_src_ = 0.0;
  double first_identity_ = 0.0;
  double prev_diss_plain_ = 0.0, prev_diss_eq_ = 0.0, prev_src_ = 0.0;
};

/// Dirac analogue: stored int |phi|^2 (conserved by unitarity for the
/// free flow), accumulated int <s-r>^{-1-2delta} |[phi]_-|^2, and the e^q
/// identity
///   int e^q |phi|^2 + (1/2) intint e^q q' |[phi]_-|^2
///   - intint i e^q (phi* g0 F - F* g0 phi)
/// conserved along -i gamma^mu d_mu phi = F.
class DiracGhostTracker {
public:
  DiracGhostTracker(double delta, const GammaSet& g)
      : delta_(delta), table_(&GhostWeightTable::shared(delta)), gamma_(&g) {}

  void push(const SpinorField& phi, const SpinorField* F = nullptr);

  GhostEntry entry() const { return {stored_plain_, acc_plain_}; }
  double identity_value() const { return stored_eq_ + acc_eq_ - acc_src_; }
  double identity_drift_rel() const;
  std::size_t samples() const { return count_; }

private:
  double delta_;
  const GhostWeightTable* table_;
  const GammaSet* gamma_;
  std::size_t count_ = 0;
  double last_t_ = 0.0;
  double stored_plain_ = 0.0, acc_plain_ = 0.0;
  double stored_eq_ = 0.0, acc_eq_ = 0.0, acc_src_ = 0.0;
  double first_identity_ = 0.0;
  double prev_diss_plain_ = 0.0, prev_diss_eq_ = 0.0, prev_src_ = 0.0;
};

/// The matter-weighted ghost functional of the large-wave-field energy
/// argument:
///   (1/2) int e^q (|dE|^2 + |E|^2 + n0 |E|^2) dx
/// with sign diagnostics min n0 and min(<r-s>^{-1-2delta} - d_t n0) over
/// the slab; both must stay nonnegative for the refined estimate to close.
class MatterWeightedTracker {
public:
  explicit MatterWeightedTracker(double delta)
      : delta_(delta), table_(&GhostWeightTable::shared(delta)) {}

  void push(const Vec3Field& E, const Vec3Field& Et, const ScalarField& n0,
            const ScalarField& n0t);

  double value() const { return value_; }     // at the last pushed time
  double min_n0() const { return min_n0_; }
  double min_sign2() const { return min_sign2_; }

private:
  double delta_;
  const GhostWeightTable* table_;
  double value_ = 0.0;
  double min_n0_ = std::numeric_limits<double>::infinity();
  double min_sign2_ = std::numeric_limits<double>::infinity();
};

}  // namespace wkg
