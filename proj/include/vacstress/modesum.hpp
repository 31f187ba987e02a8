#pragma once

// Kernels defined by integrals: the Fourier-Bessel mode sum of the cone
// kernel and the three-dimensional cone kernel.  Both are oracles for the
// closed forms in kernels.hpp; they are slow and evaluate plain doubles only.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vacstress/errors.hpp"
#include "vacstress/geometry.hpp"
#include "vacstress/kernels.hpp"
#include "vacstress/quadrature.hpp"
#include "vacstress/special.hpp"

namespace vacstress {

struct ModeSumControls {
  int n_max = 40;
  /// Target relative accuracy of each radial integral.
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
};

struct ModeSumResult {
  double value = 0;
  int terms = 0;
  /// Magnitude of the last angular term kept.
  double last_term = 0;
  double quadrature_error = 0;
  long evaluations = 0;
};

/// int_0^inf w J_nu(w r) J_nu(w r') K_0(w zeta) dw on dyadic panels, stopped
/// once the bound W K_1(W zeta) / zeta on the remaining tail drops below abs_tol.
inline quad::Result mode_radial_integral(double nu, double r, double rp, double zeta,
                                         double abs_tol, int max_subdivisions = 2000) {
  if (!(zeta > 0)) throw DomainError("mode integral: needs t^2 + (z - z')^2 > 0");
  const auto f = [&](double w) {
    if (w == 0) return 0.0;
    return w * special::bessel_j(nu, w * r) * special::bessel_j(nu, w * rp) *
           special::bessel_k0(w * zeta);
  };
  const double scale = std::max({r, rp, zeta});
  double a = 0;
  double b = 0.5 / scale;
  quad::Result total;
  for (int panel = 0; panel < 200; ++panel) {
    const quad::Result piece =
        quad::integrate(f, a, b, {0.05 * abs_tol, 1e-13, max_subdivisions});
    total.value += piece.value;
    total.error += piece.error;
    total.evaluations += piece.evaluations;
    const double tail_bound = b * special::bessel_k1(b * zeta) / zeta;
    if (tail_bound < 0.5 * abs_tol) {
      total.error += tail_bound;
      return total;
    }
    a = b;
    // Oscillations of J J have period ~ 2 pi / (r + r'); keep panels a few periods wide.
    b = std::min(2 * b, b + 16.0 / (r + rp));
  }
  throw ConvergenceError("mode integral: tail not damped after 200 panels", total.error, abs_tol);
}

/// Cone kernel as the angular mode sum
/// -(1/(pi theta1)) sum_n cos(lambda_n dtheta) int w J J K_0 dw,  lambda_n = 2 pi |n| / theta1.
inline ModeSumResult tbar_modesum_4d(const PointPair& p, double period, const ModeSumControls& c = {}) {
  require_valid(p);
  if (!(period > 0)) throw DomainError("mode sum: period must be positive");
  if (c.n_max < 1) throw DomainError("mode sum: n_max must be at least 1");
  constexpr double pi = std::numbers::pi;
  const double dz = p.z - p.z_prime;
  const double zeta = std::hypot(p.t, dz);
  const double phi = p.theta - p.theta_prime;

  // The n = 0 integral is 1 / (2 r r' sinh u); use it to set the absolute target.
  const auto uv = u_of_pair(p);
  const double scale = 1 / (2 * p.r * p.r_prime * uv.sinh_u);
  const double abs_tol = c.rel_tol * scale;

  ModeSumResult out;
  double sum = 0;
  int small_in_a_row = 0;
  for (int n = 0; n <= c.n_max; ++n) {
    const double nu = two_pi * n / period;
    const quad::Result term = mode_radial_integral(nu, p.r, p.r_prime, zeta, abs_tol, c.max_subdivisions);
    const double weight = n == 0 ? 1.0 : 2 * std::cos(nu * phi);
    sum += weight * term.value;
    out.quadrature_error += std::abs(weight) * term.error;
    out.evaluations += term.evaluations;
    out.terms = n + 1;
    out.last_term = std::abs(weight * term.value);
    if (n > 0 && std::abs(term.value) < 1e-3 * abs_tol) {
      if (++small_in_a_row >= 2) break;
    } else {
      small_in_a_row = 0;
    }
  }
  out.value = -sum / (pi * period);
  out.quadrature_error /= pi * period;
  out.last_term /= pi * period;
  return out;
}

struct Kernel3dControls {
  double rel_tol = 1e-12;
  int max_subdivisions = 4000;
};

/// Three-dimensional cone kernel
/// -(1/(pi theta1 sqrt(2 r r'))) int_{u0}^inf (cosh u - cosh u0)^(-1/2)
///     sinh(k u) / (cosh(k u) - cos(k dtheta)) du,   cosh u0 = (r^2 + r'^2 + t^2) / (2 r r').
/// At theta1 = 2 pi this is -1 / (2 pi |x - x'|).  The pair must have z = z'.
inline quad::Result tbar_3d(const PointPair& p, double period, const Kernel3dControls& c = {}) {
  require_valid(p);
  if (!(period > 0)) throw DomainError("3-d kernel: period must be positive");
  if (p.z != p.z_prime) throw DomainError("3-d kernel: the point pair must have z = z'");
  constexpr double pi = std::numbers::pi;
  const double u0 = u_of_pair(p).u;
  if (!(u0 > 0)) throw SingularityError("3-d kernel: u0 = 0");
  const double k = two_pi / period;
  const double phi = p.theta - p.theta_prime;
  const auto f = [&](double v) {
    const double u = u0 + v * v;
    return special::sqrt_endpoint_weight(u0, v) * detail::re_coth(k * u / 2, k * phi / 2);
  };
  // Beyond v^2 = 100 the integrand is below e^-50 of its peak.
  quad::Result res = quad::integrate(f, 0.0, 10.0, {0, c.rel_tol, c.max_subdivisions});
  const double pre = -1 / (pi * period * std::sqrt(2 * p.r * p.r_prime));
  res.value *= pre;
  res.error *= std::abs(pre);
  return res;
}

}  // namespace vacstress
