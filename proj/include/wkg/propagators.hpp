#pragma once

#include "wkg/field.hpp"
#include "wkg/fourier.hpp"
#include "wkg/gamma.hpp"

namespace wkg {

/// Cauchy pair (u, du/dt) on one grid and time.
struct ScalarPair {
  ScalarField u;
  ScalarField ut;
  ScalarPair(ScalarField u_, ScalarField ut_) : u(std::move(u_)), ut(std::move(ut_)) {
    u.require_same_grid(ut);
  }
  double time() const { return u.time(); }
  void set_time(double t) {
    u.set_time(t);
    ut.set_time(t);
  }
};

struct SpinorPair {
  SpinorField u;
  SpinorField ut;
  SpinorPair(SpinorField u_, SpinorField ut_) : u(std::move(u_)), ut(std::move(ut_)) {}
  double time() const { return u.time(); }
  void set_time(double t) {
    u.set_time(t);
    ut.set_time(t);
  }
};

enum class PropagatorKind { WaveSW, KleinGordonSKG, DiracExpD };

/// Exact free evolution in Fourier space on the periodic box.
///
///   S_W(t):  (u, ut) -> (cos(t|k|) u + sin(t|k|)/|k| ut,
///                        -|k| sin(t|k|) u + cos(t|k|) ut)
///   S_KG(t): same with <k> = sqrt(1 + |k|^2)
///   exp(-i t D): D(k) = gamma^0 gamma^a k_a (+ m gamma^0 for massive),
///                exp(-i t H) = cos(t W) - i sin(t W)/W H(k),
///                W = sqrt(|k|^2 + m^2)
///
/// The |k|^{-1} sin multiplier at k = 0 is replaced by its limit t.
/// All three groups are unitary in their natural energy norms.
ScalarPair propagate_wave(const ScalarPair& s, double dt);
ScalarPair propagate_kg(const ScalarPair& s, double dt);
SpinorField propagate_dirac(const SpinorField& psi, double dt, const GammaSet& g,
                            double mass = 0.0);
/// Component-wise complex free wave; evolves the auxiliary spinor wave Psi.
SpinorPair propagate_wave(const SpinorPair& s, double dt);

/// Radial counterparts through the w = r u reduction (exact sine-spectral
/// groups of the 3d radial wave / Klein-Gordon operators).
ScalarPair propagate_wave_radial(const ScalarPair& s, double dt);
ScalarPair propagate_kg_radial(const ScalarPair& s, double dt);

/// Dispatch on grid kind for the two scalar groups.
ScalarPair propagate(PropagatorKind kind, const ScalarPair& s, double dt);

}  // namespace wkg
