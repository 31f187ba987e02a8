#pragma once

// Coordinates, backgrounds and the hyperbolic separation variable u.
//
// All kernels are written in terms of u, defined for a pair of points in
// cylindrical coordinates (plus a Euclidean time separation t) by
//
//   4 r r' sinh^2(u/2) = (r - r')^2 + (z - z')^2 + t^2.
//
// The half-angle form is the canonical evaluation: it is exact at coincidence
// and has no cancellation for nearby points.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>

#include "vacstress/errors.hpp"

namespace vacstress {

template <class R>
class Jet2;

template <class S>
struct scalar_traits {
  using real = S;
};

template <class R>
struct scalar_traits<Jet2<R>> {
  using real = R;
};

/// Underlying floating-point type of a plain or jet scalar.
template <class S>
using real_of = typename scalar_traits<S>::real;

template <class S>
  requires std::is_floating_point_v<S>
constexpr S value_of(S x) noexcept {
  return x;
}

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// A pair of points (r, theta, z), (r', theta', z') and the Euclidean time
/// separation t = -i (x^0 - x^0').  Angles are stored unreduced.
template <class S = double>
struct BasicPointPair {
  S t{};
  S r{};
  S r_prime{};
  S theta{};
  S theta_prime{};
  S z{};
  S z_prime{};
};

using PointPair = BasicPointPair<double>;

/// Coincident spatial points separated only in Euclidean time.
inline PointPair split_in_time(double t, double r, double theta = 0.0, double z = 0.0) {
  return PointPair{.t = t, .r = r, .r_prime = r, .theta = theta, .theta_prime = theta,
                   .z = z, .z_prime = z};
}

template <class S>
void require_valid(const BasicPointPair<S>& p) {
  if (!(value_of(p.r) > 0) || !(value_of(p.r_prime) > 0)) {
    throw DomainError("point pair: radii must be positive (r = " +
                      std::to_string(double(value_of(p.r))) +
                      ", r' = " + std::to_string(double(value_of(p.r_prime))) + ")");
  }
}

// --- backgrounds -------------------------------------------------------------

enum class BoundaryCondition { dirichlet, neumann };

struct Minkowski {};

/// Locally flat cone with angular period `period` (2 pi is flat space).
struct Cone {
  double period = two_pi;
};

/// Infinite-sheeted covering of the punctured plane.
struct Dowker {};

/// Region 0 < theta < opening between two reflecting half-planes.
struct Wedge {
  double opening = std::numbers::pi / 2;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
};

/// Flat space periodic with period `period` along one Cartesian axis.
struct PeriodicLine {
  double period = 1.0;
};

using Geometry = std::variant<Minkowski, Cone, Dowker, Wedge, PeriodicLine>;

/// True when a cone period is 2 pi to within a few ulps; such cones are flat space.
inline bool is_flat_period(double period) noexcept {
  return std::abs(period / two_pi - 1.0) <= 1e-13;
}

inline void require_valid(const Geometry& g) {
  std::visit(
      [](const auto& geo) {
        using G = std::decay_t<decltype(geo)>;
        if constexpr (std::is_same_v<G, Cone>) {
          if (!(geo.period > 0) || !std::isfinite(geo.period))
            throw DomainError("cone: period must be positive and finite");
        } else if constexpr (std::is_same_v<G, Wedge>) {
          if (!(geo.opening > 0) || !std::isfinite(geo.opening))
            throw DomainError("wedge: opening angle must be positive and finite");
        } else if constexpr (std::is_same_v<G, PeriodicLine>) {
          if (!(geo.period > 0) || !std::isfinite(geo.period))
            throw DomainError("periodic line: period must be positive and finite");
        }
      },
      g);
}

inline std::string geometry_name(const Geometry& g) {
  struct Namer {
    std::string operator()(const Minkowski&) const { return "minkowski"; }
    std::string operator()(const Cone&) const { return "cone"; }
    std::string operator()(const Dowker&) const { return "dowker"; }
    std::string operator()(const Wedge&) const { return "wedge"; }
    std::string operator()(const PeriodicLine&) const { return "periodic-line"; }
  };
  return std::visit(Namer{}, g);
}

inline std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

// --- curvature coupling ------------------------------------------------------

/// beta = xi - 1/4.  beta = 0 is the algebraically simplest case.
struct Coupling {
  double beta = 0.0;

  static constexpr Coupling minimal() noexcept { return {-0.25}; }
  static constexpr Coupling conformal() noexcept { return {-1.0 / 12.0}; }
  /// xi = 1/4, i.e. beta = 0.
  static constexpr Coupling quarter() noexcept { return {0.0}; }
  static constexpr Coupling from_xi(double xi) noexcept { return {xi - 0.25}; }

  constexpr double xi() const noexcept { return beta + 0.25; }
  bool is_conformal() const noexcept { return std::abs(beta + 1.0 / 12.0) <= 1e-12; }
};

// --- the u variable ----------------------------------------------------------

template <class S = double>
struct BasicUVariable {
  S u{};
  S cosh_u{};
  S sinh_u{};
};

using UVariable = BasicUVariable<double>;

/// u from the half-angle form; cosh u = 1 + 2 s^2 and sinh u = 2 s sqrt(1 + s^2)
/// with s = sinh(u/2), so neither needs a subtraction.
template <class S>
BasicUVariable<S> u_of_pair(const BasicPointPair<S>& p) {
  using std::asinh;
  using std::sqrt;
  require_valid(p);
  const S dr = p.r - p.r_prime;
  const S dz = p.z - p.z_prime;
  const S s2 = (dr * dr + dz * dz + p.t * p.t) / (4 * p.r * p.r_prime);
  if (value_of(s2) == 0) {
    // Exact coincidence in (t, r, z): u = 0 with no usable derivative.
    return {S{0}, S{1}, S{0}};
  }
  const S s = sqrt(s2);
  return {2 * asinh(s), 1 + 2 * s2, 2 * s * sqrt(1 + s2)};
}

/// u recovered from each of the four equivalent closed forms.
struct UConsistency {
  enum Form { log_form = 0, cosh_form = 1, sinh_form = 2, half_angle_form = 3 };
  std::array<double, 4> u{};
  /// Estimated relative rounding error of each form exceeds 1e-12.
  std::array<bool, 4> ill_conditioned{};
  /// Largest pairwise relative difference over all four forms.
  double max_discrepancy = 0;
  /// Same, restricted to the forms that are not flagged.
  double max_discrepancy_well_conditioned = 0;
};

inline UConsistency u_consistency(const PointPair& p) {
  require_valid(p);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double dz = p.z - p.z_prime;
  const double rho2 = dz * dz + p.t * p.t;
  const double r1 = std::sqrt((p.r - p.r_prime) * (p.r - p.r_prime) + rho2);
  const double r2 = std::sqrt((p.r + p.r_prime) * (p.r + p.r_prime) + rho2);
  const double two_rr = 2 * p.r * p.r_prime;

  UConsistency out;
  out.u[UConsistency::log_form] = -std::log((r2 - r1) / (r2 + r1));
  out.u[UConsistency::cosh_form] =
      std::acosh((p.r * p.r + p.r_prime * p.r_prime + rho2) / two_rr);
  // [r^2 + r'^2 + rho^2]^2 - 4 r^2 r'^2 factors exactly as r1^2 r2^2.
  out.u[UConsistency::sinh_form] = std::asinh(r1 * r2 / two_rr);
  out.u[UConsistency::half_angle_form] = 2 * std::asinh(r1 / std::sqrt(2 * two_rr));

  const double u = out.u[UConsistency::half_angle_form];
  out.ill_conditioned[UConsistency::log_form] = eps / u > 1e-12;
  out.ill_conditioned[UConsistency::cosh_form] = eps / (u * u) > 1e-12;

  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double scale = std::max(std::abs(out.u[i]), std::abs(out.u[j]));
      const double d = scale > 0 ? std::abs(out.u[i] - out.u[j]) / scale : 0.0;
      out.max_discrepancy = std::max(out.max_discrepancy, d);
      if (!out.ill_conditioned[i] && !out.ill_conditioned[j])
        out.max_discrepancy_well_conditioned = std::max(out.max_discrepancy_well_conditioned, d);
    }
  }
  return out;
}

}  // namespace vacstress
