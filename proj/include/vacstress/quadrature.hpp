#pragma once

// Adaptive 7/15-point Gauss-Kronrod quadrature.

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "vacstress/errors.hpp"

namespace vacstress::quad {

struct Result {
  double value = 0;
  double error = 0;
  long evaluations = 0;
};

struct Tolerance {
  double abs = 1e-14;
  double rel = 1e-12;
  int max_subdivisions = 4000;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for kronrod_nodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> gauss_weights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

/// One 15-point Kronrod panel with the embedded 7-point Gauss error estimate.
template <class F>
Result gauss_kronrod15(F&& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double kronrod = fc * detail::kronrod_weights[7];
  double gauss = fc * detail::gauss_weights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * detail::kronrod_nodes[i];
    const double sum = f(mid - dx) + f(mid + dx);
    kronrod += detail::kronrod_weights[i] * sum;
    if (i % 2 == 1) gauss += detail::gauss_weights[i / 2] * sum;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half), 15};
}

/// Globally adaptive bisection on [a, b] until the summed error estimate is
/// below max(tol.abs, tol.rel * |value|).
template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  std::priority_queue<detail::Panel> panels;
  Result total;
  const Result first = gauss_kronrod15(f, a, b);
  panels.push({a, b, first.value, first.error});
  total = first;
  int subdivisions = 0;
  while (total.error > std::max(tol.abs, tol.rel * std::abs(total.value))) {
    if (subdivisions++ >= tol.max_subdivisions) {
      throw ConvergenceError("adaptive quadrature: subdivision limit reached", total.error,
                             std::max(tol.abs, tol.rel * std::abs(total.value)));
    }
    const detail::Panel worst = panels.top();
    panels.pop();
    const double m = 0.5 * (worst.a + worst.b);
    const Result left = gauss_kronrod15(f, worst.a, m);
    const Result right = gauss_kronrod15(f, m, worst.b);
    panels.push({worst.a, m, left.value, left.error});
    panels.push({m, worst.b, right.value, right.error});
    total.evaluations += left.evaluations + right.evaluations;
    total.value += left.value + right.value - worst.value;
    total.error += left.error + right.error - worst.error;
  }
  // Final re-sum to remove drift from the incremental updates.
  total.value = 0;
  total.error = 0;
  while (!panels.empty()) {
    total.value += panels.top().value;
    total.error += panels.top().error;
    panels.pop();
  }
  return total;
}

}  // namespace vacstress::quad
