#pragma once

// Second-order forward-mode differentiation over at most seven variables.
//
// A Jet2 carries a value, its gradient and its (symmetric, packed upper
// triangle) Hessian with respect to the coordinates of an ActiveSet.  Every
// elementary function is applied through the second-order chain rule
//
//   f(a).grad = f'(a) a.grad
//   f(a).hess = f'(a) a.hess + f''(a) a.grad a.grad^T
//
// so derivatives are exact up to rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "vacstress/errors.hpp"
#include "vacstress/geometry.hpp"

namespace vacstress {

enum class Coord : std::uint8_t { t, r, r_prime, theta, theta_prime, z, z_prime };

inline constexpr std::array<Coord, 7> all_coords{Coord::t,           Coord::r,  Coord::r_prime,
                                                 Coord::theta,       Coord::theta_prime,
                                                 Coord::z,           Coord::z_prime};

constexpr std::string_view to_string(Coord c) noexcept {
  switch (c) {
    case Coord::t: return "t";
    case Coord::r: return "r";
    case Coord::r_prime: return "r'";
    case Coord::theta: return "theta";
    case Coord::theta_prime: return "theta'";
    case Coord::z: return "z";
    case Coord::z_prime: return "z'";
  }
  return "?";
}

template <class S>
constexpr S& coordinate(BasicPointPair<S>& p, Coord c) noexcept {
  switch (c) {
    case Coord::t: return p.t;
    case Coord::r: return p.r;
    case Coord::r_prime: return p.r_prime;
    case Coord::theta: return p.theta;
    case Coord::theta_prime: return p.theta_prime;
    case Coord::z: return p.z;
    case Coord::z_prime: return p.z_prime;
  }
  return p.t;
}

template <class S>
constexpr const S& coordinate(const BasicPointPair<S>& p, Coord c) noexcept {
  return coordinate(const_cast<BasicPointPair<S>&>(p), c);
}

/// Ordered, duplicate-free list of the coordinates that carry derivatives.
class ActiveSet {
 public:
  ActiveSet() = default;

  ActiveSet(std::initializer_list<Coord> coords) {
    for (Coord c : coords) add(c);
  }

  static ActiveSet all() {
    ActiveSet s;
    for (Coord c : all_coords) s.add(c);
    return s;
  }

  void add(Coord c) {
    if (contains(c)) throw DomainError("active set: duplicate coordinate " + std::string(to_string(c)));
    labels_[size_++] = c;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  Coord operator[](std::size_t i) const noexcept { return labels_[i]; }
  bool contains(Coord c) const noexcept { return index_of(c).has_value(); }

  std::optional<std::size_t> index_of(Coord c) const noexcept {
    for (std::size_t i = 0; i < size_; ++i)
      if (labels_[i] == c) return i;
    return std::nullopt;
  }

  const Coord* begin() const noexcept { return labels_.data(); }
  const Coord* end() const noexcept { return labels_.data() + size_; }

 private:
  std::array<Coord, 7> labels_{};
  std::size_t size_ = 0;
};

template <class R = double>
class Jet2 {
 public:
  using real_type = R;
  static constexpr std::size_t max_vars = 7;
  static constexpr std::size_t max_hess = max_vars * (max_vars + 1) / 2;

  constexpr Jet2() = default;
  constexpr Jet2(R value) : value_(value) {}  // NOLINT: constants mix freely with jets

  /// Independent variable occupying `slot` of an `nvars`-dimensional jet.
  static constexpr Jet2 variable(R value, std::size_t slot, std::size_t nvars) {
    Jet2 j(value);
    j.n_ = nvars;
    j.grad_[slot] = R{1};
    return j;
  }

  constexpr R value() const noexcept { return value_; }
  constexpr std::size_t size() const noexcept { return n_; }
  constexpr R d(std::size_t i) const noexcept { return grad_[i]; }
  constexpr R d2(std::size_t i, std::size_t j) const noexcept { return hess_[packed(i, j)]; }
  std::span<const R> gradient() const noexcept { return {grad_.data(), n_}; }

  // -- arithmetic ------------------------------------------------------------

  friend constexpr Jet2 operator-(const Jet2& a) {
    Jet2 out;
    out.value_ = -a.value_;
    out.n_ = a.n_;
    for (std::size_t i = 0; i < a.n_; ++i) out.grad_[i] = -a.grad_[i];
    for (std::size_t k = 0; k < hess_size(a.n_); ++k) out.hess_[k] = -a.hess_[k];
    return out;
  }

  friend constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 out;
    out.value_ = a.value_ + b.value_;
    out.n_ = std::max(a.n_, b.n_);
    for (std::size_t i = 0; i < out.n_; ++i) out.grad_[i] = a.grad_[i] + b.grad_[i];
    for (std::size_t k = 0; k < hess_size(out.n_); ++k) out.hess_[k] = a.hess_[k] + b.hess_[k];
    return out;
  }

  friend constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2 out;
    out.value_ = a.value_ - b.value_;
    out.n_ = std::max(a.n_, b.n_);
    for (std::size_t i = 0; i < out.n_; ++i) out.grad_[i] = a.grad_[i] - b.grad_[i];
    for (std::size_t k = 0; k < hess_size(out.n_); ++k) out.hess_[k] = a.hess_[k] - b.hess_[k];
    return out;
  }

  friend constexpr Jet2 operator+(const Jet2& a, R b) {
    Jet2 out = a;
    out.value_ += b;
    return out;
  }
  friend constexpr Jet2 operator+(R a, const Jet2& b) { return b + a; }
  friend constexpr Jet2 operator-(const Jet2& a, R b) { return a + (-b); }
  friend constexpr Jet2 operator-(R a, const Jet2& b) { return (-b) + a; }

  friend constexpr Jet2 operator*(const Jet2& a, R b) {
    Jet2 out;
    out.value_ = a.value_ * b;
    out.n_ = a.n_;
    for (std::size_t i = 0; i < a.n_; ++i) out.grad_[i] = a.grad_[i] * b;
    for (std::size_t k = 0; k < hess_size(a.n_); ++k) out.hess_[k] = a.hess_[k] * b;
    return out;
  }
  friend constexpr Jet2 operator*(R a, const Jet2& b) { return b * a; }

  friend constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 out;
    out.value_ = a.value_ * b.value_;
    out.n_ = std::max(a.n_, b.n_);
    for (std::size_t i = 0; i < out.n_; ++i)
      out.grad_[i] = a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    for (std::size_t j = 0; j < out.n_; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        const std::size_t k = packed(i, j);
        out.hess_[k] = a.value_ * b.hess_[k] + b.value_ * a.hess_[k] +
                       a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
      }
    }
    return out;
  }

  friend constexpr Jet2 operator/(const Jet2& a, R b) {
    if (b == R{0}) throw DomainError("jet division by zero");
    return a * (R{1} / b);
  }
  friend Jet2 operator/(R a, const Jet2& b) { return a * reciprocal(b); }
  friend Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

  Jet2& operator+=(const Jet2& b) { return *this = *this + b; }
  Jet2& operator-=(const Jet2& b) { return *this = *this - b; }
  Jet2& operator*=(const Jet2& b) { return *this = *this * b; }
  Jet2& operator/=(const Jet2& b) { return *this = *this / b; }

  // -- elementary functions ---------------------------------------------------

  friend Jet2 reciprocal(const Jet2& a) {
    if (a.value_ == R{0}) throw DomainError("jet division by zero");
    const R inv = R{1} / a.value_;
    return chain(a, inv, -inv * inv, 2 * inv * inv * inv);
  }

  friend Jet2 exp(const Jet2& a) {
    const R e = std::exp(a.value_);
    return chain(a, e, e, e);
  }

  friend Jet2 log(const Jet2& a) {
    if (!(a.value_ > 0))
      throw DomainError("jet log: argument must be positive (value " +
                        std::to_string(double(a.value_)) + ")");
    const R inv = R{1} / a.value_;
    return chain(a, std::log(a.value_), inv, -inv * inv);
  }

  friend Jet2 sqrt(const Jet2& a) {
    if (a.value_ < 0 || (a.value_ == 0 && a.n_ > 0))
      throw DomainError("jet sqrt: argument must be positive (value " +
                        std::to_string(double(a.value_)) + ")");
    const R s = std::sqrt(a.value_);
    if (a.n_ == 0) return Jet2(s);
    const R d1 = R{0.5} / s;
    return chain(a, s, d1, -d1 / (2 * a.value_));
  }

  friend Jet2 sinh(const Jet2& a) {
    const R s = std::sinh(a.value_);
    return chain(a, s, std::cosh(a.value_), s);
  }

  friend Jet2 cosh(const Jet2& a) {
    const R c = std::cosh(a.value_);
    return chain(a, c, std::sinh(a.value_), c);
  }

  friend Jet2 asinh(const Jet2& a) {
    const R q = R{1} + a.value_ * a.value_;
    const R d1 = R{1} / std::sqrt(q);
    return chain(a, std::asinh(a.value_), d1, -a.value_ * d1 / q);
  }

  friend Jet2 sin(const Jet2& a) {
    const R s = std::sin(a.value_);
    return chain(a, s, std::cos(a.value_), -s);
  }

  friend Jet2 cos(const Jet2& a) {
    const R c = std::cos(a.value_);
    return chain(a, c, -std::sin(a.value_), -c);
  }

  friend Jet2 atan(const Jet2& a) {
    const R q = R{1} / (R{1} + a.value_ * a.value_);
    return chain(a, std::atan(a.value_), q, -2 * a.value_ * q * q);
  }

  friend Jet2 pow(const Jet2& a, R p) {
    if (p == R{0}) return Jet2(R{1});
    if (p == R{1}) return a;
    if (p == R{2}) return a * a;
    if (!(a.value_ > 0) && p != std::floor(p))
      throw DomainError("jet pow: non-integer power of a non-positive value");
    const R f = std::pow(a.value_, p);
    const R d1 = p * std::pow(a.value_, p - 1);
    const R d2 = p * (p - 1) * std::pow(a.value_, p - 2);
    return chain(a, f, d1, d2);
  }

  /// Applies a scalar function given its value and first two derivatives at a.value().
  friend constexpr Jet2 chain(const Jet2& a, R f, R df, R d2f) {
    Jet2 out;
    out.value_ = f;
    out.n_ = a.n_;
    for (std::size_t i = 0; i < a.n_; ++i) out.grad_[i] = df * a.grad_[i];
    for (std::size_t j = 0; j < a.n_; ++j)
      for (std::size_t i = 0; i <= j; ++i) {
        const std::size_t k = packed(i, j);
        out.hess_[k] = df * a.hess_[k] + d2f * a.grad_[i] * a.grad_[j];
      }
    return out;
  }

 private:
  static constexpr std::size_t packed(std::size_t i, std::size_t j) noexcept {
    return i <= j ? j * (j + 1) / 2 + i : i * (i + 1) / 2 + j;
  }
  static constexpr std::size_t hess_size(std::size_t n) noexcept { return n * (n + 1) / 2; }

  R value_{};
  std::size_t n_ = 0;
  std::array<R, max_vars> grad_{};
  std::array<R, max_hess> hess_{};
};

template <class R>
constexpr R value_of(const Jet2<R>& x) noexcept {
  return x.value();
}

/// Seeds every active coordinate of `p` as an independent variable; inactive
/// coordinates become constants.
template <class R = double>
BasicPointPair<Jet2<R>> lift(const PointPair& p, const ActiveSet& active) {
  if (active.empty()) throw DomainError("lift: active set is empty");
  BasicPointPair<Jet2<R>> out;
  for (Coord c : all_coords) {
    const R v = static_cast<R>(coordinate(p, c));
    const auto slot = active.index_of(c);
    coordinate(out, c) = slot ? Jet2<R>::variable(v, *slot, active.size()) : Jet2<R>(v);
  }
  return out;
}

/// Derivative lookup by coordinate label; inactive coordinates give 0.
template <class R>
R partial(const Jet2<R>& j, const ActiveSet& active, Coord a) {
  const auto i = active.index_of(a);
  return i ? j.d(*i) : R{0};
}

template <class R>
R partial2(const Jet2<R>& j, const ActiveSet& active, Coord a, Coord b) {
  const auto i = active.index_of(a);
  const auto k = active.index_of(b);
  return (i && k) ? j.d2(*i, *k) : R{0};
}

}  // namespace vacstress
