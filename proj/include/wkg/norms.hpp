#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "wkg/field.hpp"
#include "wkg/weights.hpp"

namespace wkg {

/// Pairwise (tree) summation: deterministic for a fixed element order and
/// with error growing like log(n) instead of n.
inline double pairwise_sum(const double* v, std::int64_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::int64_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), static_cast<std::int64_t>(v.size()));
}

/// Weighted L2 norm  || w f || = sqrt( sum_j w(t, r_j)^2 |f_j|^2 dV_j ).
/// The profile enters linearly (as the paper writes ||<t-r> u||); pass
/// nullopt for the plain L2 norm.
template <class T>
double l2_norm(const Field<T>& f, std::optional<WeightProfile> weight = std::nullopt,
               std::optional<double> t_override = std::nullopt) {
  const double t = t_override.value_or(f.time());
  std::vector<double> terms(static_cast<std::size_t>(f.size()));
  for (std::int64_t i = 0; i < f.size(); ++i) {
    double w = 1.0;
    if (weight) {
      const double p = weight->value(t, f.grid().radius_of(i));
      w = p * p;
    }
    terms[static_cast<std::size_t>(i)] = w * detail::abs2(f[i]) * f.grid().cell_measure(i);
  }
  return std::sqrt(pairwise_sum(terms));
}

template <class T>
double sup_norm(const Field<T>& f) {
  double m = 0.0;
  for (std::int64_t i = 0; i < f.size(); ++i) m = std::fmax(m, std::sqrt(detail::abs2(f[i])));
  return m;
}

/// sup over nodes of |f| * w(t, r), the weighted-sup decay statistic.
template <class T>
double weighted_sup(const Field<T>& f, double t,
                    const std::function<double(double, double)>& w) {
  double m = 0.0;
  for (std::int64_t i = 0; i < f.size(); ++i) {
    const double r = f.grid().radius_of(i);
    m = std::fmax(m, std::sqrt(detail::abs2(f[i])) * w(t, r));
  }
  return m;
}

struct ShellSup {
  std::vector<double> radius;  // shell centers, width = grid spacing
  std::vector<double> sup;     // sup of |f| over nodes with |x| in the shell
  double global_sup = 0.0;
};

/// Shell suprema of |f|: shell k collects nodes with r in [k h, (k+1) h).
template <class T>
ShellSup sup_shell(const Field<T>& f) {
  const double h = f.grid().spacing();
  const double rmax = (f.grid().kind() == GridKind::PeriodicBox3d)
                          ? std::sqrt(3.0) * f.grid().extent()
                          : f.grid().extent();
  const std::size_t nshell = static_cast<std::size_t>(std::ceil(rmax / h)) + 1;
  ShellSup out;
  out.radius.resize(nshell);
  out.sup.assign(nshell, 0.0);
  for (std::size_t k = 0; k < nshell; ++k) out.radius[k] = (static_cast<double>(k) + 0.5) * h;
  for (std::int64_t i = 0; i < f.size(); ++i) {
    const double r = f.grid().radius_of(i);
    std::size_t k = static_cast<std::size_t>(r / h);
    if (k >= nshell) k = nshell - 1;
    const double a = std::sqrt(detail::abs2(f[i]));
    out.sup[k] = std::fmax(out.sup[k], a);
    out.global_sup = std::fmax(out.global_sup, a);
  }
  return out;
}

/// Integral of a node-wise density against the grid measure.
inline double integrate(const GridSpec& g, const std::vector<double>& density) {
  std::vector<double> terms(density.size());
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(density.size()); ++i)
    terms[static_cast<std::size_t>(i)] = density[static_cast<std::size_t>(i)] * g.cell_measure(i);
  return pairwise_sum(terms);
}

}  // namespace wkg
