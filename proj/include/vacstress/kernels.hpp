#pragma once

// Closed-form cylinder kernels T-bar for flat space, cones, the Dowker
// covering space, wedges and a space periodic along one axis.
//
// Every kernel is a template over the scalar type, so the same code evaluates
// plain values (double, long double) and second-order jets.
//
// Writing w = u + i(theta - theta') and k = 2 pi / period, the cone kernel is
//
//   T-bar = -1/(2 pi r r' sinh u) * (k / 2 pi) Re coth(k w / 2),
//
// and the Dowker kernel is the k -> 0 limit, (1/pi) Re(1/w).  Every member of
// the family shares the pole 1/(pi w) at coincidence, so differences between
// them are evaluated from coth z - 1/z, which is regular at z = 0.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vacstress/errors.hpp"
#include "vacstress/geometry.hpp"

namespace vacstress {

namespace detail {

// Taylor coefficients of coth z - 1/z = sum_n c_n z^(2n-1), c_n = 4^n B_2n / (2n)!.
inline constexpr std::array<long double, 15> coth_series{
    0.33333333333333333333333L,     -0.022222222222222222222222L,
    0.0021164021164021164021164L,   -0.00021164021164021164021164L,
    2.1377799155576933354711e-05L,  -2.1644042808063972023994e-06L,
    2.1925947851873777190328e-07L,  -2.2214608789979678271657e-08L,
    2.2507846516808994711306e-09L,  -2.2805151204592183105074e-10L,
    2.3106432599002623923081e-11L,  -2.3411706819824880823022e-12L,
    2.3721017400233653109052e-13L,  -2.4034415333307705116262e-14L,
    2.4351954029183367413434e-15L};

template <class S>
S square(const S& x) {
  return x * x;
}

/// Re coth(x + i y) = sinh 2x / (cosh 2x - cos 2y) for x >= 0, written without
/// the cosh - cos cancellation and in exponential form once cosh would overflow.
template <class S>
S re_coth(const S& x, const S& y) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sinh;
  using R = real_of<S>;
  if (value_of(x) > R{15}) {
    const S e2 = exp(-2 * x);
    const S e4 = e2 * e2;
    return (1 - e4) / (1 - 2 * e2 * cos(2 * y) + e4);
  }
  const S denom = 2 * square(sinh(x)) + 2 * square(sin(y));
  if (value_of(denom) == R{0}) throw SingularityError("kernel evaluated at an image coincidence");
  return sinh(2 * x) / denom;
}

/// Re[coth(x + i y) - 1/(x + i y)], analytic in a disc of radius pi about 0.
template <class S>
S re_coth_regular(const S& x, const S& y) {
  using R = real_of<S>;
  const R modulus2 = value_of(x) * value_of(x) + value_of(y) * value_of(y);
  if (modulus2 < R{0.25}) {
    // Horner in z^2 on real and imaginary parts, then multiply by z.
    const S zz_re = x * x - y * y;
    const S zz_im = 2 * x * y;
    S p_re = S(static_cast<R>(coth_series.back()));
    S p_im = S(R{0});
    for (std::size_t n = coth_series.size() - 1; n-- > 0;) {
      const S re = p_re * zz_re - p_im * zz_im + static_cast<R>(coth_series[n]);
      const S im = p_re * zz_im + p_im * zz_re;
      p_re = re;
      p_im = im;
    }
    return x * p_re - y * p_im;
  }
  return re_coth(x, y) - x / (x * x + y * y);
}

/// sinh(k u) / sinh(u), with a Taylor series through u^4 for tiny u.
template <class S>
S sinh_ratio(real_of<S> k, const S& u) {
  using std::sinh;
  using R = real_of<S>;
  if (value_of(u) < R{1e-4} && k * value_of(u) < R{1e-2}) {
    const R k2m1 = k * k - 1;
    const S u2 = u * u;
    return k * (1 + u2 * (k2m1 / 6 + u2 * (k2m1 * (3 * k * k - 7) / 360)));
  }
  return sinh(k * u) / sinh(u);
}

template <class S>
void require_separated(const BasicUVariable<S>& uv, const char* kernel) {
  if (value_of(uv.u) == 0)
    throw SingularityError(std::string(kernel) + ": u = 0 (coincident in t, r and z)");
}

}  // namespace detail

/// Flat-space kernel -1 / (2 pi^2 |x - x'|^2) with the four-dimensional
/// Euclidean distance written in cylindrical coordinates.
template <class S>
S tbar_minkowski(const BasicPointPair<S>& p) {
  using std::sin;
  using R = real_of<S>;
  require_valid(p);
  constexpr R pi = std::numbers::pi_v<R>;
  const S dr = p.r - p.r_prime;
  const S dz = p.z - p.z_prime;
  const S half = sin((p.theta - p.theta_prime) / 2);
  const S dist2 = dr * dr + 4 * p.r * p.r_prime * half * half + p.t * p.t + dz * dz;
  if (!(value_of(dist2) > 0)) throw SingularityError("minkowski kernel: coincident points");
  return -1 / (2 * pi * pi * dist2);
}

/// The same flat kernel in its hyperbolic form -1 / (4 pi^2 r r' (cosh u - cos dtheta)).
template <class S>
S tbar_minkowski_hyperbolic(const BasicPointPair<S>& p) {
  using std::cos;
  using R = real_of<S>;
  constexpr R pi = std::numbers::pi_v<R>;
  const auto uv = u_of_pair(p);
  const S denom = uv.cosh_u - cos(p.theta - p.theta_prime);
  if (!(value_of(denom) > 0)) throw SingularityError("minkowski kernel: coincident points");
  return -1 / (4 * pi * pi * p.r * p.r_prime * denom);
}

/// Cone with angular period `period`; period 2 pi is flat space exactly.
template <class S>
S tbar_cone(const BasicPointPair<S>& p, double period) {
  using std::sin;
  using std::sinh;
  using R = real_of<S>;
  if (!(period > 0)) throw DomainError("cone kernel: period must be positive");
  if (is_flat_period(period)) return tbar_minkowski(p);
  constexpr R pi = std::numbers::pi_v<R>;
  const R theta1 = static_cast<R>(period);
  const R k = 2 * pi / theta1;
  const auto uv = u_of_pair(p);
  const S phi = p.theta - p.theta_prime;

  if (value_of(uv.u) < R{1e-4}) {
    // cosh(ku) - cos(k phi) = 2 sinh^2(ku/2) + 2 sin^2(k phi/2)
    const S denom = 2 * detail::square(sinh(k * uv.u / 2)) + 2 * detail::square(sin(k * phi / 2));
    if (!(value_of(denom) > 0))
      throw SingularityError("cone kernel: coincident points (u = 0, dtheta = 0 mod period)");
    return -detail::sinh_ratio(k, uv.u) / (2 * pi * theta1 * p.r * p.r_prime * denom);
  }
  const S angular = detail::re_coth(k * uv.u / 2, k * phi / 2);
  return -angular / (2 * pi * theta1 * p.r * p.r_prime * uv.sinh_u);
}

/// Infinite-sheeted (Dowker) kernel -u / (2 pi^2 r r' sinh u (u^2 + dtheta^2)).
template <class S>
S tbar_dowker(const BasicPointPair<S>& p) {
  using std::sinh;
  using R = real_of<S>;
  constexpr R pi = std::numbers::pi_v<R>;
  const auto uv = u_of_pair(p);
  const S phi = p.theta - p.theta_prime;
  const S denom = uv.u * uv.u + phi * phi;
  if (!(value_of(denom) > 0)) throw SingularityError("dowker kernel: coincident points");
  const S pre = -1 / (2 * pi * pi * p.r * p.r_prime * denom);
  if (value_of(uv.u) < R{1e-4}) {
    const S u2 = uv.u * uv.u;
    return pre * (1 - u2 / 6 + 7 * u2 * u2 / 360);  // u / sinh u
  }
  return pre * uv.u / uv.sinh_u;
}

/// Cone kernel minus the flat kernel, evaluated without cancellation.
/// Requires u > 0 (a Euclidean-time or axial separation, or r != r').
template <class S>
S tbar_cone_subtracted(const BasicPointPair<S>& p, double period) {
  using R = real_of<S>;
  if (!(period > 0)) throw DomainError("cone kernel: period must be positive");
  if (is_flat_period(period)) return S(R{0});
  constexpr R pi = std::numbers::pi_v<R>;
  const R k = 2 * pi / static_cast<R>(period);
  const auto uv = u_of_pair(p);
  detail::require_separated(uv, "subtracted cone kernel");
  const S phi = p.theta - p.theta_prime;
  const S h = (k * detail::re_coth_regular(k * uv.u / 2, k * phi / 2) -
               detail::re_coth_regular(uv.u / 2, phi / 2)) /
              (2 * pi);
  return -h / (2 * pi * p.r * p.r_prime * uv.sinh_u);
}

/// Dowker kernel minus the flat kernel, evaluated without cancellation.
template <class S>
S tbar_dowker_subtracted(const BasicPointPair<S>& p) {
  using R = real_of<S>;
  constexpr R pi = std::numbers::pi_v<R>;
  const auto uv = u_of_pair(p);
  detail::require_separated(uv, "subtracted dowker kernel");
  const S phi = p.theta - p.theta_prime;
  const S h = -detail::re_coth_regular(uv.u / 2, phi / 2) / (2 * pi);
  return -h / (2 * pi * p.r * p.r_prime * uv.sinh_u);
}

/// Vacuum-subtracted wedge kernel for 0 < theta, theta' < opening:
/// cone(dtheta; 2 opening) - flat(dtheta) + s cone(theta + theta'; 2 opening),
/// s = -1 (Dirichlet) or +1 (Neumann).  Add tbar_minkowski for the full kernel.
template <class S>
S tbar_wedge_renormalized(const BasicPointPair<S>& p, double opening, BoundaryCondition bc) {
  if (!(opening > 0)) throw DomainError("wedge kernel: opening angle must be positive");
  const double th = double(value_of(p.theta));
  const double thp = double(value_of(p.theta_prime));
  if (!(th > 0 && th < opening) || !(thp > 0 && thp < opening)) {
    throw DomainError("wedge kernel: angles must lie strictly inside (0, " +
                      std::to_string(opening) + "), got theta = " + std::to_string(th) +
                      ", theta' = " + std::to_string(thp));
  }
  const double period = 2 * opening;
  BasicPointPair<S> image = p;
  image.theta_prime = -p.theta_prime;
  const S reflected = tbar_cone(image, period);
  const S direct = tbar_cone_subtracted(p, period);
  return bc == BoundaryCondition::dirichlet ? direct - reflected : direct + reflected;
}

// --- image sums ------------------------------------------------------------

template <class S>
struct ImageSum {
  S value{};
  /// Size of the Euler-Maclaurin tail correction included in `value`.
  double tail = 0;
};

namespace detail {

/// Euler-Maclaurin estimate of sum_{m >= 1} g(alpha + m step) for the
/// Lorentzian g(s) = -K / (a^2 + s^2), alpha > 0.
template <class S>
S lorentzian_tail(const S& K, const S& a, const S& alpha, real_of<S> step) {
  using std::atan;
  const S h = 1 / (a * a + alpha * alpha);
  const S integral = -K / (step * a) * atan(a / alpha);
  const S f0 = -K * h;
  const S f1 = step * 2 * K * alpha * h * h;
  const S f3 = -K * step * step * step * (24 * alpha * h * h * h - 48 * alpha * alpha * alpha * h * h * h * h);
  return integral - f0 / 2 - f1 / 12 + f3 / 720;
}

}  // namespace detail

/// Cone kernel as a periodic image sum of Dowker kernels over |n| <= images,
/// plus an Euler-Maclaurin tail for |n| > images.
template <class S>
ImageSum<S> tbar_cone_via_images(const BasicPointPair<S>& p, double period, long images,
                                 bool tail_correction = true) {
  using R = real_of<S>;
  if (!(period > 0)) throw DomainError("image sum: period must be positive");
  if (images < 0) throw DomainError("image sum: image count must be non-negative");
  const R theta1 = static_cast<R>(period);
  BasicPointPair<S> shifted = p;
  S sum = S(R{0});
  for (long n = images; n >= 1; --n) {
    shifted.theta = p.theta + R(n) * theta1;
    sum += tbar_dowker(shifted);
    shifted.theta = p.theta - R(n) * theta1;
    sum += tbar_dowker(shifted);
  }
  sum += tbar_dowker(p);
  if (!tail_correction) return {sum, 0.0};

  constexpr R pi = std::numbers::pi_v<R>;
  const auto uv = u_of_pair(p);
  detail::require_separated(uv, "image sum tail");
  const S phi = p.theta - p.theta_prime;
  const S alpha_up = phi + R(images) * theta1;
  const S alpha_down = R(images) * theta1 - phi;
  if (!(value_of(alpha_up) > 0) || !(value_of(alpha_down) > 0))
    throw DomainError("image sum: too few images for the tail correction");
  const S K = uv.u / (2 * pi * pi * p.r * p.r_prime * uv.sinh_u);
  const S tail = detail::lorentzian_tail(K, uv.u, alpha_up, theta1) +
                 detail::lorentzian_tail(K, uv.u, alpha_down, theta1);
  return {sum + tail, double(value_of(tail))};
}

// --- space periodic along one axis ------------------------------------------

/// Separation of two points of flat space in Cartesian coordinates; the
/// periodic direction is `along`.
template <class S = double>
struct BasicCartesianSeparation {
  S t{};
  S along{};
  S across_y{};
  S across_z{};
};

using CartesianSeparation = BasicCartesianSeparation<double>;

template <class S>
S tbar_flat_cartesian(const BasicCartesianSeparation<S>& d) {
  using R = real_of<S>;
  constexpr R pi = std::numbers::pi_v<R>;
  const S dist2 = d.t * d.t + d.along * d.along + d.across_y * d.across_y + d.across_z * d.across_z;
  if (!(value_of(dist2) > 0)) throw SingularityError("flat kernel: coincident points");
  return -1 / (2 * pi * pi * dist2);
}

/// Closed form of the periodic image sum,
/// -(1/(2 pi a L)) sinh(2 pi a/L) / (cosh(2 pi a/L) - cos(2 pi x/L)),
/// a^2 = t^2 + (transverse separation)^2.
template <class S>
S tbar_periodic_line(const BasicCartesianSeparation<S>& d, double period) {
  using std::sin;
  using std::sqrt;
  using R = real_of<S>;
  if (!(period > 0)) throw DomainError("periodic line: period must be positive");
  constexpr R pi = std::numbers::pi_v<R>;
  const R L = static_cast<R>(period);
  const S a2 = d.t * d.t + d.across_y * d.across_y + d.across_z * d.across_z;
  // Nearest-image axial offset, so that coincidence with an image is exact.
  const S x = d.along - std::round(value_of(d.along) / L) * L;
  if (value_of(a2) == R{0}) {
    if (value_of(x) == R{0}) throw SingularityError("periodic line: image coincidence");
    const S s = sin(pi * x / L);
    return -1 / (2 * L * L * s * s);
  }
  const S a = sqrt(a2);
  return -detail::re_coth(pi * a / L, pi * x / L) / (2 * pi * a * L);
}

/// Direct image sum over |n| <= images with an Euler-Maclaurin tail.
template <class S>
ImageSum<S> tbar_periodic_line_images(const BasicCartesianSeparation<S>& d, double period,
                                      long images, bool tail_correction = true) {
  using std::sqrt;
  using R = real_of<S>;
  if (!(period > 0)) throw DomainError("periodic line: period must be positive");
  if (images < 0) throw DomainError("image sum: image count must be non-negative");
  const R L = static_cast<R>(period);
  BasicCartesianSeparation<S> shifted = d;
  S sum = S(R{0});
  for (long n = images; n >= 1; --n) {
    shifted.along = d.along + R(n) * L;
    sum += tbar_flat_cartesian(shifted);
    shifted.along = d.along - R(n) * L;
    sum += tbar_flat_cartesian(shifted);
  }
  sum += tbar_flat_cartesian(d);
  if (!tail_correction) return {sum, 0.0};

  constexpr R pi = std::numbers::pi_v<R>;
  const S a2 = d.t * d.t + d.across_y * d.across_y + d.across_z * d.across_z;
  if (!(value_of(a2) > 0)) throw DomainError("periodic line: tail needs a transverse separation");
  const S a = sqrt(a2);
  const S alpha_up = d.along + R(images) * L;
  const S alpha_down = R(images) * L - d.along;
  if (!(value_of(alpha_up) > 0) || !(value_of(alpha_down) > 0))
    throw DomainError("image sum: too few images for the tail correction");
  const S K = S(1 / (2 * pi * pi));
  const S tail = detail::lorentzian_tail(K, a, alpha_up, L) + detail::lorentzian_tail(K, a, alpha_down, L);
  return {sum + tail, double(value_of(tail))};
}

}  // namespace vacstress
