#pragma once

// Parameter scans of the stress tensor and the table of figure datasets.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "vacstress/errors.hpp"
#include "vacstress/geometry.hpp"
#include "vacstress/stress.hpp"

namespace vacstress {

enum class SweepVariable { r, theta, theta1 };
enum class Spacing { linear, log };
enum class Component { t00, t_rr, t_perp, t_zz };

inline constexpr std::array<Component, 4> all_components{Component::t00, Component::t_rr, Component::t_perp,
                                                         Component::t_zz};

constexpr std::string_view to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::r: return "r";
    case SweepVariable::theta: return "theta";
    case SweepVariable::theta1: return "theta1";
  }
  return "?";
}

constexpr std::string_view to_string(Spacing s) noexcept { return s == Spacing::log ? "log" : "linear"; }

constexpr std::string_view to_string(Component c) noexcept { return component_names[static_cast<int>(c)]; }

inline double component_of(const StressTensor& s, Component c) noexcept {
  return s.components()[static_cast<std::size_t>(c)];
}

struct ScanSpec {
  Geometry geometry = Dowker{};
  SweepVariable sweep = SweepVariable::r;
  double from = 0.1;
  double to = 10;
  int samples = 200;
  Spacing spacing = Spacing::log;
  /// Fixed coordinates; the swept one is overwritten.
  EvaluationPoint point{1, 0, 0};
  Coupling coupling{};
  /// Emit stress(beta = 1) - stress(beta = 0) instead of stress(coupling).
  bool beta_correction = false;
  /// Cutoff values; 0 requests the t -> 0 extrapolation.
  std::vector<double> cutoffs{1.0, 0.0};
  std::vector<Component> components{all_components.begin(), all_components.end()};
  /// Renormalization used for t > 0 columns.
  RenormMode renorm = RenormMode::kernel_subtraction;
};

struct ScanResult {
  std::vector<std::string> header;
  std::vector<double> sweep_values;
  /// rows[i][j]: empty when the point could not be evaluated.
  std::vector<std::vector<std::optional<double>>> rows;
  /// One message per failed (point, cutoff), in sweep order.
  std::vector<std::string> warnings;
};

/// Shortest decimal string that reads back to the same double.
inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string column_name(Component c, double cutoff) {
  return std::string(to_string(c)) + "[t=" + format_number(cutoff) + "]";
}

inline void validate(const ScanSpec& s) {
  require_valid(s.geometry);
  if (s.samples < 2) throw DomainError("scan: at least 2 samples are required");
  if (!std::isfinite(s.from) || !std::isfinite(s.to) || !(s.from < s.to))
    throw DomainError("scan: the sweep range must satisfy from < to");
  if (s.spacing == Spacing::log && !(s.from > 0))
    throw DomainError("scan: log spacing needs a positive range");
  if (s.cutoffs.empty()) throw DomainError("scan: no cutoff requested");
  for (double t : s.cutoffs)
    if (!(t >= 0) || !std::isfinite(t)) throw DomainError("scan: cutoffs must be >= 0 (0 extrapolates)");
  if (s.components.empty()) throw DomainError("scan: no component requested");
  if (std::holds_alternative<PeriodicLine>(s.geometry))
    throw DomainError("scan: stress is not available for the periodic line");
  const auto* wedge = std::get_if<Wedge>(&s.geometry);
  if (wedge && s.renorm == RenormMode::component_subtraction)
    throw DomainError("scan: the wedge kernel is already vacuum-subtracted; use kernel subtraction");
  switch (s.sweep) {
    case SweepVariable::r:
      if (!(s.from > 0)) throw DomainError("scan: r must stay positive");
      break;
    case SweepVariable::theta:
      if (wedge && !(s.from > 0 && s.to < wedge->opening))
        throw DomainError("scan: theta must stay strictly inside the wedge (0, " +
                          format_number(wedge->opening) + ")");
      break;
    case SweepVariable::theta1:
      if (!std::holds_alternative<Cone>(s.geometry))
        throw DomainError("scan: a theta1 sweep needs the cone geometry");
      if (!(s.from > 0)) throw DomainError("scan: theta1 must stay positive");
      break;
  }
  if (s.sweep != SweepVariable::r && !(s.point.r > 0)) throw DomainError("scan: r must be positive");
  if (wedge && s.sweep != SweepVariable::theta && !(s.point.theta > 0 && s.point.theta < wedge->opening))
    throw DomainError("scan: theta must lie strictly inside the wedge");
}

inline std::vector<double> sweep_grid(const ScanSpec& s) {
  std::vector<double> out(static_cast<std::size_t>(s.samples));
  const double n = s.samples - 1;
  for (int i = 0; i < s.samples; ++i) {
    const double f = i / n;
    out[i] = s.spacing == Spacing::log ? std::exp(std::log(s.from) + f * (std::log(s.to) - std::log(s.from)))
                                       : s.from + f * (s.to - s.from);
  }
  out.front() = s.from;
  out.back() = s.to;
  return out;
}

namespace detail {

struct PointOutcome {
  std::vector<std::optional<double>> cells;
  std::vector<std::string> warnings;
};

inline StressTensor scan_stress(const Geometry& g, const EvaluationPoint& x, Coupling c, double t,
                                RenormMode mode) {
  if (t == 0) return stress_t0(g, x, c).value;
  return stress_at(g, x, c, t, mode);
}

inline PointOutcome evaluate_scan_point(const ScanSpec& s, double value) {
  Geometry g = s.geometry;
  EvaluationPoint x = s.point;
  switch (s.sweep) {
    case SweepVariable::r: x.r = value; break;
    case SweepVariable::theta: x.theta = value; break;
    case SweepVariable::theta1: g = Cone{value}; break;
  }
  PointOutcome out;
  for (double t : s.cutoffs) {
    try {
      StressTensor st;
      if (s.beta_correction) {
        st = difference(scan_stress(g, x, Coupling{1}, t, s.renorm), scan_stress(g, x, Coupling{0}, t, s.renorm));
      } else {
        st = scan_stress(g, x, s.coupling, t, s.renorm);
      }
      for (Component c : s.components) out.cells.emplace_back(component_of(st, c));
    } catch (const std::exception& e) {
      for (std::size_t i = 0; i < s.components.size(); ++i) out.cells.emplace_back(std::nullopt);
      out.warnings.push_back(std::string(to_string(s.sweep)) + " = " + format_number(value) + ", t = " +
                             format_number(t) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace detail

/// Evaluates every grid point (in parallel when workers > 1) and assembles the
/// rows in sweep order; the result does not depend on the worker count.
inline ScanResult run_scan(const ScanSpec& s, unsigned workers = 1) {
  validate(s);
  ScanResult out;
  out.header.emplace_back(to_string(s.sweep));
  for (double t : s.cutoffs)
    for (Component c : s.components) out.header.push_back(column_name(c, t));
  out.sweep_values = sweep_grid(s);

  const std::size_t n = out.sweep_values.size();
  std::vector<detail::PointOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) outcomes[i] = detail::evaluate_scan_point(s, out.sweep_values[i]);
  };
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(n));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& o : outcomes) {
    out.rows.push_back(std::move(o.cells));
    for (auto& w : o.warnings) out.warnings.push_back(std::move(w));
  }
  return out;
}

/// RFC 4180 style CSV; failed cells are empty.
inline std::string to_csv(const ScanResult& r) {
  std::string out;
  for (std::size_t j = 0; j < r.header.size(); ++j) {
    if (j) out += ',';
    out += r.header[j];
  }
  out += "\r\n";
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    out += format_number(r.sweep_values[i]);
    for (const auto& cell : r.rows[i]) {
      out += ',';
      if (cell) out += format_number(*cell);
    }
    out += "\r\n";
  }
  return out;
}

// --- figure datasets -----------------------------------------------------

struct FigureCurve {
  /// File stem, e.g. "fig2mis_theta1-0.25pi".
  std::string name;
  std::string label;
  ScanSpec spec;
};

struct Figure {
  std::string id;
  std::string description;
  std::vector<FigureCurve> curves;
};

namespace detail {

inline ScanSpec r_scan(Geometry g, Coupling c, double r_from, double r_to, int samples) {
  ScanSpec s;
  s.geometry = g;
  s.coupling = c;
  s.sweep = SweepVariable::r;
  s.spacing = Spacing::log;
  s.from = r_from;
  s.to = r_to;
  s.samples = samples;
  return s;
}

inline std::string pi_label(double multiple) {
  return format_number(multiple) + "pi";
}

inline std::string xi_label(Coupling c) {
  if (c.is_conformal()) return "xi-1_6";
  if (c.beta == 0) return "xi-1_4";
  if (c.beta == -0.25) return "xi-0";
  return "beta-" + format_number(c.beta);
}

}  // namespace detail

/// All figure datasets; `samples` sets the grid size of every curve.
inline std::vector<Figure> figures(int samples = 200) {
  using detail::pi_label;
  using detail::r_scan;
  using detail::xi_label;
  constexpr double pi = std::numbers::pi;
  const Coupling quarter = Coupling::quarter(), conformal = Coupling::conformal();
  const std::vector<Component> t00_only{Component::t00};
  std::vector<Figure> out;

  // Cones and Dowker space versus r.
  {
    Figure f{"fig1", "Dowker space, xi = 1/4: all components versus r", {}};
    f.curves.push_back({"fig1_dowker", "dowker", r_scan(Dowker{}, quarter, 0.1, 10, samples)});
    out.push_back(f);
  }
  {
    Figure f{"fig1b", "Dowker space: curvature-coupling correction stress(beta=1) - stress(beta=0) versus r", {}};
    ScanSpec s = r_scan(Dowker{}, quarter, 0.1, 10, samples);
    s.beta_correction = true;
    f.curves.push_back({"fig1b_dowker", "dowker", s});
    out.push_back(f);
  }
  const double small_cones[] = {0.25, 0.5, 1.0};
  const double large_cones[] = {2.5, 8.0, 1e4};
  {
    Figure f{"fig2mis", "cones theta1 = pi/4, pi/2, pi, xi = 1/4: all components versus r", {}};
    for (double m : small_cones)
      f.curves.push_back({"fig2mis_theta1-" + pi_label(m), "theta1 = " + pi_label(m),
                          r_scan(Cone{m * pi}, quarter, 0.1, 10, samples)});
    out.push_back(f);
  }
  {
    Figure f{"fig2ext", "cones theta1 = 2.5pi, 8pi, 10000pi, xi = 1/4: all components versus r", {}};
    for (double m : large_cones)
      f.curves.push_back({"fig2ext_theta1-" + pi_label(m), "theta1 = " + pi_label(m),
                          r_scan(Cone{m * pi}, quarter, 0.1, 10, samples)});
    out.push_back(f);
  }
  {
    Figure f{"fig2b", "all six cones, xi = 1/4: energy density near r = 0", {}};
    for (const auto* set : {small_cones, large_cones})
      for (int i = 0; i < 3; ++i) {
        ScanSpec s = r_scan(Cone{set[i] * pi}, quarter, 0.01, 1, samples);
        s.components = t00_only;
        f.curves.push_back({"fig2b_theta1-" + pi_label(set[i]), "theta1 = " + pi_label(set[i]), s});
      }
    out.push_back(f);
  }
  {
    Figure f{"fig3", "cones theta1 = pi/4, pi/2, pi: curvature-coupling corrections versus r", {}};
    for (double m : small_cones) {
      ScanSpec s = r_scan(Cone{m * pi}, quarter, 0.1, 10, samples);
      s.beta_correction = true;
      f.curves.push_back({"fig3_theta1-" + pi_label(m), "theta1 = " + pi_label(m), s});
    }
    out.push_back(f);
  }
  {
    Figure f{"fig3b", "cones theta1 = pi/4, pi/2, pi: energy-density correction near r = 0", {}};
    for (double m : small_cones) {
      ScanSpec s = r_scan(Cone{m * pi}, quarter, 0.01, 1, samples);
      s.beta_correction = true;
      s.components = t00_only;
      f.curves.push_back({"fig3b_theta1-" + pi_label(m), "theta1 = " + pi_label(m), s});
    }
    out.push_back(f);
  }
  {
    Figure f{"fig4", "cone theta1 = 0.8pi: xi = 1/6 versus xi = 1/4", {}};
    for (Coupling c : {conformal, quarter})
      f.curves.push_back({"fig4_" + xi_label(c), xi_label(c), r_scan(Cone{0.8 * pi}, c, 0.1, 10, samples)});
    out.push_back(f);
  }
  // Cones versus the cone angle at r = 1.
  for (int which = 1; which <= 2; ++which) {
    Figure f{"coneang" + std::to_string(which),
             which == 1 ? "cone components versus theta1 at r = 1, xi = 1/4"
                        : "cone curvature-coupling corrections versus theta1 at r = 1",
             {}};
    ScanSpec s;
    s.geometry = Cone{pi};
    s.coupling = quarter;
    s.sweep = SweepVariable::theta1;
    s.spacing = Spacing::log;
    s.from = pi / 8;
    s.to = 8 * pi;
    s.samples = samples;
    s.point = {1, 0, 0};
    s.beta_correction = which == 2;
    f.curves.push_back({f.id + "_r-1", "r = 1", s});
    out.push_back(f);
  }
  // Wedges.
  const auto theta_scan = [&](double opening, double r, Coupling c, double from, double to) {
    ScanSpec s;
    s.geometry = Wedge{opening, BoundaryCondition::dirichlet};
    s.coupling = c;
    s.sweep = SweepVariable::theta;
    s.spacing = Spacing::linear;
    s.from = from;
    s.to = to;
    s.samples = samples;
    s.point = {r, opening / 2, 0};
    s.components = t00_only;
    return s;
  };
  for (int near = 0; near <= 1; ++near) {
    const std::string id = near ? "fig5b" : "fig5";
    Figure f{id, near ? "wedge theta0 = pi/2: energy density near theta = 0"
                      : "wedge theta0 = pi/2: energy density versus theta",
             {}};
    const double opening = pi / 2;
    const auto add = [&](Coupling c, double r) {
      const double from = opening * (near ? 0.002 : 0.005);
      const double to = opening * (near ? 0.1 : 0.995);
      f.curves.push_back({id + "_" + xi_label(c) + "_r-" + format_number(r),
                          xi_label(c) + ", r = " + format_number(r), theta_scan(opening, r, c, from, to)});
    };
    for (double r : {2.0, 4.0, 8.0}) add(quarter, r);
    for (double r : {4.0, 8.0, 16.0}) add(conformal, r);
    out.push_back(f);
  }
  for (int near = 0; near <= 1; ++near) {
    const std::string id = near ? "fig6b" : "fig6";
    Figure f{id, near ? "wedges theta0 = pi/3, 2pi/5, 2pi/3 at r = 8: energy density near theta = 0"
                      : "wedges theta0 = pi/3, 2pi/5, 2pi/3 at r = 8: energy density versus theta",
             {}};
    for (double m : {1.0 / 3, 0.4, 2.0 / 3}) {
      const double opening = m * pi;
      for (Coupling c : {quarter, conformal}) {
        const double from = opening * (near ? 0.002 : 0.005);
        const double to = opening * (near ? 0.1 : 0.995);
        const std::string tag = m == 0.4 ? "2pi_5" : (m < 0.4 ? "pi_3" : "2pi_3");
        f.curves.push_back({id + "_theta0-" + tag + "_" + xi_label(c), "theta0 = " + tag + ", " + xi_label(c),
                            theta_scan(opening, 8, c, from, to)});
      }
    }
    out.push_back(f);
  }
  for (int near = 0; near <= 1; ++near) {
    const std::string id = near ? "fig7b" : "fig7";
    Figure f{id, near ? "wedge theta0 = pi/2: energy density near r = 0 at theta = pi/16, pi/8, pi/4"
                      : "wedge theta0 = pi/2: energy density versus r at theta = pi/16, pi/8, pi/4",
             {}};
    for (int d : {16, 8, 4}) {
      for (Coupling c : {quarter, conformal}) {
        ScanSpec s = r_scan(Wedge{pi / 2, BoundaryCondition::dirichlet}, c, near ? 0.01 : 0.1, near ? 1 : 10,
                            samples);
        s.point = {1, pi / d, 0};
        s.components = t00_only;
        f.curves.push_back({id + "_theta-pi_" + std::to_string(d) + "_" + xi_label(c),
                            "theta = pi/" + std::to_string(d) + ", " + xi_label(c), s});
      }
    }
    out.push_back(f);
  }
  return out;
}

inline std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& f : figures(2)) ids.push_back(f.id);
  return ids;
}

/// The figure with the given id; DomainError listing the valid ids otherwise.
inline Figure find_figure(std::string_view id, int samples = 200) {
  for (auto& f : figures(samples))
    if (f.id == id) return f;
  std::string valid;
  for (const auto& i : figure_ids()) valid += (valid.empty() ? "" : ", ") + i;
  throw DomainError("unknown figure id '" + std::string(id) + "'; valid ids: " + valid);
}

}  // namespace vacstress
