#pragma once

// Special functions for the quadrature-based kernels.  Bessel functions come
// from Boost.Math; the Legendre function Q_{-1/2} is evaluated two ways.

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "vacstress/errors.hpp"
#include "vacstress/quadrature.hpp"

namespace vacstress::special {

/// J_nu(x) for real order nu >= 0 and x >= 0.
inline double bessel_j(double nu, double x) {
  if (x == 0) return nu == 0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(nu, x);
}

inline double bessel_k0(double x) {
  if (!(x > 0)) throw DomainError("K0: argument must be positive");
  if (x > 700) return 0.0;
  return boost::math::cyl_bessel_k(0, x);
}

inline double bessel_k1(double x) {
  if (!(x > 0)) throw DomainError("K1: argument must be positive");
  if (x > 700) return 0.0;
  return boost::math::cyl_bessel_k(1, x);
}

/// Jacobian of u = u0 + v^2 times (cosh u - cosh u0)^(-1/2):
/// 2 v / sqrt(2 sinh(u0 + v^2/2) sinh(v^2/2)), finite at v = 0.
inline double sqrt_endpoint_weight(double u0, double v) {
  if (v == 0) return 2 / std::sqrt(std::sinh(u0));
  const double h = 0.5 * v * v;
  return 2 * v / std::sqrt(2 * std::sinh(u0 + h) * std::sinh(h));
}

/// Q_{-1/2}(cosh eta) = int_eta^inf du / sqrt(2 (cosh u - cosh eta)).
inline double legendre_q_minus_half(double eta, const quad::Tolerance& tol = {0, 1e-13, 4000}) {
  if (!(eta > 0)) throw DomainError("Q_{-1/2}(cosh eta): eta must be positive");
  const auto f = [eta](double v) { return sqrt_endpoint_weight(eta, v) / std::sqrt(2.0); };
  return quad::integrate(f, 0.0, 10.0, tol).value;
}

/// Q_{-1/2}(cosh eta) = 2 exp(-eta/2) K(exp(-eta)), K the complete elliptic
/// integral of the first kind with modulus k.
inline double legendre_q_minus_half_elliptic(double eta) {
  if (!(eta > 0)) throw DomainError("Q_{-1/2}(cosh eta): eta must be positive");
  return 2 * std::exp(-eta / 2) * std::comp_ellint_1(std::exp(-eta));
}

}  // namespace vacstress::special
