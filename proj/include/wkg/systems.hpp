#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkg/field.hpp"
#include "wkg/gamma.hpp"
#include "wkg/propagators.hpp"

namespace wkg {

enum class Scheme { StrangSplitting, Rk4MethodOfLines };

struct IntegratorConfig {
  double dt = 0.0;
  Scheme scheme = Scheme::StrangSplitting;
  bool dealias = true;
  double dirac_mass = 0.0;  // optional massive Dirac term, 0 or 1

  void validate(const GridSpec& g) const {
    if (dt <= 0.0) throw std::invalid_argument("IntegratorConfig: dt must be positive");
    if (scheme == Scheme::Rk4MethodOfLines && dt > 0.5 * g.spacing())
      throw std::invalid_argument("IntegratorConfig: rk4-mol needs dt <= 0.5 h");
  }
};

/// Raised when a step produces non-finite values.
struct BlowUpError : std::runtime_error {
  double time;
  explicit BlowUpError(double t)
      : std::runtime_error("blow-up detected at t = " + std::to_string(t)), time(t) {}
};

/// Klein-Gordon-Zakharov in the decomposed form
///   (d_t^2 - Lap + 1) E   = -(n0 + Lap n1) E
///   (d_t^2 - Lap)     n0  = 0
///   (d_t^2 - Lap)     n1  = |E|^2
/// with data (E0, E1, n_0, n_1, 0, 0); the physical sound field is
/// n = n0 + Lap n1.
struct KGZState {
  Vec3Field E, Et;
  ScalarField n0, n0t, n1, n1t;
  double t = 0.0;

  static KGZState make(Vec3Field E0, Vec3Field E1, ScalarField n0d, ScalarField n1d);
  void check_finite() const;
};

/// Dirac-Klein-Gordon in the decomposed form
///   -i gamma^mu d_mu psi = (V0 + V1) psi
///   (d_t^2 - Lap + 1) V0 = 0
///   (d_t^2 - Lap + 1) V1 = psi^* gamma^0 psi
/// with data (psi0, v0, v1, 0, 0) and v = V0 + V1. The auxiliary wave
/// unknown Psi solves (d_t^2 - Lap) Psi = v psi with data
/// (0, -i gamma^0 psi0), so that i gamma^mu d_mu Psi = psi along the flow.
struct DKGState {
  SpinorField psi;
  ScalarField V0, V0t, V1, V1t;
  SpinorField Psi, Psit;
  double t = 0.0;

  static DKGState make(SpinorField psi0, ScalarField v0, ScalarField v1, const GammaSet& g);
  void check_finite() const;
};

KGZState kgz_step(const KGZState& s, const IntegratorConfig& cfg);
DKGState dkg_step(const DKGState& s, const IntegratorConfig& cfg, const GammaSet& g);

/// Composite fields: n = n0 + Lap n1 (spectral Laplacian) and its time
/// derivative; v = V0 + V1 likewise.
ScalarField reconstruct_n(const KGZState& s);
ScalarField reconstruct_nt(const KGZState& s);
ScalarField reconstruct_v(const DKGState& s);
ScalarField reconstruct_vt(const DKGState& s);

/// L2 residuals of the five transformation identities, evaluated with
/// discrete derivatives on >= 5 adjacent equal-dt snapshots (center slice):
///   wave_rep    i gamma^mu d_mu Psi = psi
///   psi_tilde   -Box(Psi + v psi) = (psi* g0 psi) psi + i gamma^mu v d_mu(v psi) + 2 Q0(v, psi)
///   wave_dirac  -Box psi = i (d_mu v) gamma^mu psi - v^2 psi
///   v1_tilde    (-Box + 1)(V1 - psi* g0 psi) = 2 v^2 psi* g0 psi - 2 Q0(psi*, g0 psi)
///   ghost_rep   [psi]_- = i (I - omega_b g0 g^b) gamma^a G_a Psi   (pointwise, r >= 2h)
/// On solution trajectories each residual converges to zero at the joint
/// order of the integrator; on non-solutions wave_dirac stays O(1).
std::map<std::string, double> transform_residuals(const std::vector<DKGState>& bracket,
                                                  const GammaSet& g);

}  // namespace wkg
