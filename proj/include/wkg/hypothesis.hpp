#pragma once

#include <array>
#include <string>
#include <vector>

#include "wkg/field.hpp"

namespace wkg {

/// Sum of isotropic Gaussian bumps A exp(-|x-c|^2 / w^2) with derivatives
/// of arbitrary order through the per-axis Hermite-type recurrence
///   p_{m+1} = p_m' - (2 xi / w^2) p_m,   d^m_x e^{-xi^2/w^2} = p_m e^{-xi^2/w^2}.
struct GaussianBump {
  double amplitude = 0.0;
  Vec3 center = {0.0, 0.0, 0.0};
  double width = 1.0;
};

class GaussianSum {
public:
  GaussianSum() = default;
  explicit GaussianSum(std::vector<GaussianBump> bumps) : bumps_(std::move(bumps)) {}

  bool empty() const { return bumps_.empty(); }
  const std::vector<GaussianBump>& bumps() const { return bumps_; }
  void add(const GaussianBump& b) { bumps_.push_back(b); }
  void scale(double c) {
    for (auto& b : bumps_) b.amplitude *= c;
  }

  double eval(const Vec3& x) const;
  Vec3 gradient(const Vec3& x) const;
  /// d^alpha f, any order.
  double derivative(const std::array<int, 3>& alpha, const Vec3& x) const;

private:
  std::vector<GaussianBump> bumps_;
};

/// |grad^k f|^2 = sum_{|alpha| = k} |d^alpha f|^2 at every grid node, for
/// all k <= kmax, using per-axis derivative tables (one pass per bump).
std::vector<std::vector<double>> gradient_square_tables(const GaussianSum& f, const GridSpec& g,
                                                        int kmax);

struct KgzClosedFormData {
  std::array<GaussianSum, 3> E0, E1;
  GaussianSum n0, n1;
};

struct DkgClosedFormData {
  std::array<GaussianSum, 8> psi0;  // (re, im) per spinor component
  GaussianSum v0, v1;
};

struct ConditionVerdict {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - measured; pass iff >= 0
  bool pass = false;
};

struct HypothesisReport {
  std::vector<ConditionVerdict> conditions;
  double K0 = 0.0, epsilon = 0.0, C_KS = 1.0;
  int N = 0;
  double eq16_bound = 0.0;  // 1 / (71^2 * 174 * C_KS^3 * K0^2)

  bool all_pass() const {
    for (const auto& c : conditions)
      if (!c.pass) return false;
    return true;
  }
  const ConditionVerdict* find(const std::string& name) const {
    for (const auto& c : conditions)
      if (c.name == name) return &c;
    return nullptr;
  }
};

double eq16_bound_value(double C_KS, double K0);

/// Weighted-Sobolev data conditions of the two global-existence theorems,
/// evaluated by grid quadrature on closed-form data. The theorem floors
/// (N >= 10 for KGZ, N >= 13 for DKG) are enforced.
HypothesisReport hypothesis_check_kgz(const KgzClosedFormData& d, const GridSpec& grid, double K0,
                                      double epsilon, int N, double C_KS);
HypothesisReport hypothesis_check_dkg(const DkgClosedFormData& d, const GridSpec& grid, double K0,
                                      double epsilon, int N, double C_KS);

}  // namespace wkg
