#pragma once

// Vacuum stress tensor of a massless scalar field from second derivatives of
// the cylinder kernel at a point split in Euclidean time.
//
// With d_ab denoting second partials of T-bar at the split point,
//
//   T00   = -1/2 d_tt + beta [d_rr' + d_rr + d_r / r] + beta A
//   T_rr  = -1/4 [d_rr' - d_rr] - (beta / r) d_r - beta A
//   T_pp  = d_r / (4 r) + (d_thth - d_ththp) / (4 r^2) - beta [d_rr' + d_rr]
//   T_zz  = -1/4 [d_zz' - d_zz] - beta [d_rr' + d_rr + d_r / r] - beta A
//
// where A = (d_ththp + d_thth) / r^2 is the angular part of the Laplacian of
// <phi^2>.  A vanishes when the kernel depends on theta - theta' only, and the
// tangential pressure then reduces to d_r / (4 r) + d_thth / (2 r^2) - beta [...].

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "vacstress/errors.hpp"
#include "vacstress/geometry.hpp"
#include "vacstress/jet.hpp"
#include "vacstress/kernels.hpp"

namespace vacstress {

enum class RenormMode {
  /// Flat kernel subtracted before differentiation.
  kernel_subtraction,
  /// Raw components minus the flat zero-point stress.
  component_subtraction,
  raw
};

constexpr std::string_view to_string(RenormMode m) noexcept {
  switch (m) {
    case RenormMode::kernel_subtraction: return "kernel-subtraction";
    case RenormMode::component_subtraction: return "component-subtraction";
    case RenormMode::raw: return "raw";
  }
  return "?";
}

/// Diagonal orthonormal components <T_00>, <T_rr>, <T_perp perp>, <T_zz>.
struct StressTensor {
  double t00 = 0;
  double t_rr = 0;
  double t_perp = 0;
  double t_zz = 0;
  RenormMode renorm = RenormMode::raw;
  /// Euclidean time separation; 0 for an extrapolated t -> 0 value.
  double cutoff_t = 0;

  std::array<double, 4> components() const noexcept { return {t00, t_rr, t_perp, t_zz}; }
  double max_abs() const noexcept {
    return std::max({std::abs(t00), std::abs(t_rr), std::abs(t_perp), std::abs(t_zz)});
  }
};

inline constexpr std::array<std::string_view, 4> component_names{"T00", "Trr", "Tperp", "Tzz"};

/// Componentwise a - b, keeping the metadata of a.
inline StressTensor difference(const StressTensor& a, const StressTensor& b) {
  StressTensor out = a;
  out.t00 -= b.t00;
  out.t_rr -= b.t_rr;
  out.t_perp -= b.t_perp;
  out.t_zz -= b.t_zz;
  return out;
}

/// -T00 + T_rr + T_perp + T_zz.
inline double trace(const StressTensor& s) noexcept { return -s.t00 + s.t_rr + s.t_perp + s.t_zz; }

/// Flat-space stress of the time-split field: T00 = 3 / (2 pi^2 t^4), pressures 1 / (2 pi^2 t^4).
inline StressTensor zero_point_stress(double t) {
  if (!(t > 0)) throw DomainError("zero-point stress: t must be positive");
  const double p = 1 / (2 * std::numbers::pi * std::numbers::pi * t * t * t * t);
  return {3 * p, p, p, p, RenormMode::raw, t};
}

// --- assembly ------------------------------------------------------------

/// Second partials of a kernel at the split point (and the radial gradient).
template <class R = double>
struct KernelDerivatives {
  R d_r{};
  R d_tt{};
  R d_rr{}, d_rrp{}, d_rprp{};
  R d_thth{}, d_ththp{}, d_thpthp{};
  R d_zz{}, d_zzp{}, d_zpzp{};
};

enum class TangentialForm {
  /// Kernels depending on theta - theta' only (cones, Dowker, flat space).
  symmetric,
  /// Kernels with separate theta and theta' dependence (wedges).
  general
};

/// Components {T00, T_rr, T_perp, T_zz}.  With `symmetrized`, the unprimed
/// second derivatives d_aa are replaced by (d_aa + d_a'a') / 2.
template <class R>
std::array<R, 4> assemble(const KernelDerivatives<R>& d, R r, R beta, TangentialForm form,
                          bool symmetrized = false) {
  const R rr = symmetrized ? (d.d_rr + d.d_rprp) / 2 : d.d_rr;
  const R thth = symmetrized ? (d.d_thth + d.d_thpthp) / 2 : d.d_thth;
  const R zz = symmetrized ? (d.d_zz + d.d_zpzp) / 2 : d.d_zz;

  const R radial = d.d_rrp + rr + d.d_r / r;
  const R angular = form == TangentialForm::general ? (d.d_ththp + thth) / (r * r) : R{0};
  const R tperp = form == TangentialForm::general
                      ? d.d_r / (4 * r) + (thth - d.d_ththp) / (4 * r * r) - beta * (d.d_rrp + rr)
                      : d.d_r / (4 * r) + thth / (2 * r * r) - beta * (d.d_rrp + rr);
  return {-d.d_tt / 2 + beta * (radial + angular),
          -(d.d_rrp - rr) / 4 - beta * d.d_r / r - beta * angular,
          tperp,
          -(d.d_zzp - zz) / 4 - beta * (radial + angular)};
}

namespace detail {

inline std::string point_context(const PointPair& p) {
  return " at (t = " + std::to_string(p.t) + ", r = " + std::to_string(p.r) +
         ", theta = " + std::to_string(p.theta) + ", z = " + std::to_string(p.z) + ")";
}

}  // namespace detail

/// Differentiates `kernel` (callable on BasicPointPair<Jet2<R>>) at `pair`
/// with all seven coordinates active.
template <class R = double, class Kernel>
KernelDerivatives<R> kernel_derivatives(const PointPair& pair, Kernel&& kernel) {
  const ActiveSet active = ActiveSet::all();
  const auto jets = lift<R>(pair, active);
  Jet2<R> k;
  try {
    k = kernel(jets);
  } catch (const SingularityError& e) {
    throw SingularityError(e.what() + detail::point_context(pair));
  } catch (const DomainError& e) {
    throw DomainError(e.what() + detail::point_context(pair));
  }
  const auto d2 = [&](Coord a, Coord b) { return partial2(k, active, a, b); };
  KernelDerivatives<R> d;
  d.d_r = partial(k, active, Coord::r);
  d.d_tt = d2(Coord::t, Coord::t);
  d.d_rr = d2(Coord::r, Coord::r);
  d.d_rrp = d2(Coord::r, Coord::r_prime);
  d.d_rprp = d2(Coord::r_prime, Coord::r_prime);
  d.d_thth = d2(Coord::theta, Coord::theta);
  d.d_ththp = d2(Coord::theta, Coord::theta_prime);
  d.d_thpthp = d2(Coord::theta_prime, Coord::theta_prime);
  d.d_zz = d2(Coord::z, Coord::z);
  d.d_zzp = d2(Coord::z, Coord::z_prime);
  d.d_zpzp = d2(Coord::z_prime, Coord::z_prime);
  return d;
}

/// Where the stress is evaluated.
struct EvaluationPoint {
  double r = 1;
  double theta = 0;
  double z = 0;
};

struct StressOptions {
  /// Additional axial splitting z - z' (experimental; the time split may then be 0).
  double axial_split = 0;
  /// Average primed and unprimed second derivatives (see assemble).
  bool symmetrized = false;
};

/// Stress of an arbitrary kernel through the same pipeline as stress_at.
template <class R = double, class Kernel>
StressTensor stress_from_kernel(Kernel&& kernel, const EvaluationPoint& x, Coupling c, double t,
                                TangentialForm form, RenormMode label, const StressOptions& opt = {}) {
  const PointPair pair{t, x.r, x.r, x.theta, x.theta, x.z, x.z - opt.axial_split};
  const auto d = kernel_derivatives<R>(pair, kernel);
  const auto comp = assemble<R>(d, R(x.r), R(c.beta), form, opt.symmetrized);
  return {double(comp[0]), double(comp[1]), double(comp[2]), double(comp[3]), label, t};
}

/// Renormalized (or raw) stress at a point, split by Euclidean time t.
inline StressTensor stress_at(const Geometry& g, const EvaluationPoint& x, Coupling c, double t,
                              RenormMode mode, const StressOptions& opt = {}) {
  require_valid(g);
  if (!(x.r > 0)) throw DomainError("stress: r must be positive");
  if (!(t >= 0) || (t == 0 && opt.axial_split == 0))
    throw DomainError("stress: the cutoff t must be positive");
  if (mode == RenormMode::component_subtraction && opt.axial_split != 0)
    throw DomainError("stress: component subtraction is defined for a pure time split");
  if (std::holds_alternative<PeriodicLine>(g))
    throw DomainError("stress: not available for the periodic line");

  const bool flat = std::holds_alternative<Minkowski>(g) ||
                    (std::holds_alternative<Cone>(g) && is_flat_period(std::get<Cone>(g).period));
  const auto* wedge = std::get_if<Wedge>(&g);

  if (mode == RenormMode::kernel_subtraction) {
    if (flat) return {0, 0, 0, 0, mode, t};
    if (wedge) {
      const Wedge w = *wedge;
      return stress_from_kernel<double>(
          [w](const auto& p) { return tbar_wedge_renormalized(p, w.opening, w.bc); }, x, c, t,
          TangentialForm::general, mode, opt);
    }
    if (const auto* cone = std::get_if<Cone>(&g)) {
      const double period = cone->period;
      return stress_from_kernel<double>([period](const auto& p) { return tbar_cone_subtracted(p, period); },
                                        x, c, t, TangentialForm::symmetric, mode, opt);
    }
    return stress_from_kernel<double>([](const auto& p) { return tbar_dowker_subtracted(p); }, x, c, t,
                                      TangentialForm::symmetric, mode, opt);
  }

  if (wedge && mode == RenormMode::component_subtraction)
    throw DomainError("stress: the wedge kernel is already vacuum-subtracted; use kernel subtraction");

  // Raw components grow like t^-4 and are then differenced against the
  // zero-point stress, so this path runs in extended precision.
  using LD = long double;
  const PointPair pair{t, x.r, x.r, x.theta, x.theta, x.z, x.z - opt.axial_split};
  KernelDerivatives<LD> d;
  TangentialForm form = TangentialForm::symmetric;
  if (flat) {
    d = kernel_derivatives<LD>(pair, [](const auto& p) { return tbar_minkowski(p); });
  } else if (wedge) {
    const Wedge w = *wedge;
    d = kernel_derivatives<LD>(pair, [w](const auto& p) {
      return tbar_wedge_renormalized(p, w.opening, w.bc) + tbar_minkowski(p);
    });
    form = TangentialForm::general;
  } else if (const auto* cone = std::get_if<Cone>(&g)) {
    const double period = cone->period;
    d = kernel_derivatives<LD>(pair, [period](const auto& p) { return tbar_cone(p, period); });
  } else {
    d = kernel_derivatives<LD>(pair, [](const auto& p) { return tbar_dowker(p); });
  }
  auto comp = assemble<LD>(d, LD(x.r), LD(c.beta), form, opt.symmetrized);
  if (mode == RenormMode::component_subtraction) {
    const LD pi = std::numbers::pi_v<LD>;
    const LD p = 1 / (2 * pi * pi * LD(t) * LD(t) * LD(t) * LD(t));
    comp[0] -= 3 * p;
    comp[1] -= p;
    comp[2] -= p;
    comp[3] -= p;
  }
  return {double(comp[0]), double(comp[1]), double(comp[2]), double(comp[3]), mode, t};
}

// --- t -> 0 ----------------------------------------------------------------

struct Extrapolation {
  /// Largest cutoff of the ladder; 0 selects r/8 (and at most a quarter of
  /// the distance to the nearest wedge plate).
  double t0 = 0;
  int rungs = 6;
};

struct ExtrapolatedStress {
  StressTensor value;
  /// Componentwise |R[n][n] - R[n-1][n-1]| of the Richardson tableau.
  StressTensor error;
  std::vector<double> ladder;
};

namespace detail {

inline double distance_to_plate(const Wedge& w, const EvaluationPoint& x) {
  const double a = std::min(x.theta, w.opening - x.theta);
  return a < std::numbers::pi / 2 ? x.r * std::sin(a) : x.r;
}

}  // namespace detail

/// Renormalized stress at t -> 0 by Richardson extrapolation in t^2 over the
/// ladder t_k = t0 2^-k.
inline ExtrapolatedStress stress_t0(const Geometry& g, const EvaluationPoint& x, Coupling c,
                                    const Extrapolation& e = {}) {
  require_valid(g);
  if (!(x.r > 0)) throw DomainError("stress: r must be positive");
  if (e.rungs < 2) throw DomainError("extrapolation: at least two rungs are needed");
  double t0 = e.t0 > 0 ? e.t0 : x.r / 8;
  if (const auto* w = std::get_if<Wedge>(&g)) {
    if (!(x.theta > 0 && x.theta < w->opening))
      throw DomainError("stress: theta must lie strictly inside the wedge");
    const double d = detail::distance_to_plate(*w, x);
    if (!c.is_conformal() && d < 1e-3 * x.r)
      throw DomainError("stress: t -> 0 limit diverges at the wedge plates for non-conformal coupling; "
                        "point is within 1e-3 r of a plate");
    if (e.t0 <= 0) t0 = std::min(t0, d / 4);
  }

  const int n = e.rungs;
  ExtrapolatedStress out;
  if (n > 16) throw DomainError("extrapolation: at most 16 rungs");
  std::vector<std::array<std::array<double, 16>, 4>> tableau(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = t0 * std::ldexp(1.0, -k);
    out.ladder.push_back(t);
    const auto s = stress_at(g, x, c, t, RenormMode::kernel_subtraction).components();
    for (int i = 0; i < 4; ++i) tableau[k][i][0] = s[i];
    double factor = 1;
    for (int j = 1; j <= k; ++j) {
      factor *= 4;
      for (int i = 0; i < 4; ++i)
        tableau[k][i][j] = (factor * tableau[k][i][j - 1] - tableau[k - 1][i][j - 1]) / (factor - 1);
    }
  }

  std::array<double, 4> value{}, err{};
  // Rounding in the subtracted kernel is relative to the natural size of a
  // renormalized stress, 1 / (1440 pi^2 r^4), not to the (possibly vanishing)
  // components themselves.
  double scale = 1 / (1440 * std::numbers::pi * std::numbers::pi * std::pow(x.r, 4));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(tableau[k][i][0]));
  for (int i = 0; i < 4; ++i) {
    value[i] = tableau[n - 1][i][n - 1];
    err[i] = std::abs(tableau[n - 1][i][n - 1] - tableau[n - 2][i][n - 2]);
    if (n >= 3) {
      const double previous = std::abs(tableau[n - 2][i][n - 2] - tableau[n - 3][i][n - 3]);
      const double floor = 1e-8 * scale;
      if (err[i] > previous && err[i] > floor) {
        throw ConvergenceError("t -> 0 extrapolation of " + std::string(component_names[i]) +
                                   " does not contract" + detail::point_context({0, x.r, x.r, x.theta, x.theta, x.z, x.z}),
                               err[i], previous);
      }
    }
  }
  out.value = {value[0], value[1], value[2], value[3], RenormMode::kernel_subtraction, 0.0};
  out.error = {err[0], err[1], err[2], err[3], RenormMode::kernel_subtraction, 0.0};
  return out;
}

/// |dT_rr/dr + (T_rr - T_perp) / r| at t -> 0, relative to max|T| / r.
/// Returns 0 when the tensor vanishes identically (flat space).
inline double conservation_residual(const Geometry& g, double r, Coupling c) {
  if (!(r > 0)) throw DomainError("conservation residual: r must be positive");
  if (std::holds_alternative<Wedge>(g) || std::holds_alternative<PeriodicLine>(g))
    throw DomainError("conservation residual: defined for cones and Dowker space");
  if (std::holds_alternative<Minkowski>(g) ||
      (std::holds_alternative<Cone>(g) && is_flat_period(std::get<Cone>(g).period)))
    return 0.0;
  const auto trr = [&](double rr) { return stress_t0(g, {rr, 0, 0}, c).value.t_rr; };
  const double h = 1e-2 * r;
  const double coarse = (trr(r + h) - trr(r - h)) / (2 * h);
  const double fine = (trr(r + h / 2) - trr(r - h / 2)) / h;
  const double slope = (4 * fine - coarse) / 3;
  const StressTensor s = stress_t0(g, {r, 0, 0}, c).value;
  const double scale = s.max_abs() / r;
  if (scale == 0) return 0.0;
  return std::abs(slope + (s.t_rr - s.t_perp) / r) / scale;
}

}  // namespace vacstress
