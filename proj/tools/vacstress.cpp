// vacstress: point evaluation, parameter scans, figure datasets and the
// verification suite.
//
// Exit status: 0 success, 1 verification or evaluation failure, 2 usage error.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vacstress/vacstress.hpp"

#ifndef VACSTRESS_GIT_DESCRIBE
#define VACSTRESS_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace vacstress;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

/// Thrown for bad flag values that CLI11 cannot catch by itself.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Angles as plain numbers or multiples of pi: "0.785", "pi/4", "0.25pi", "2pi/5".
double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  const auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw UsageError("cannot parse angle '" + text + "'");
    }
    if (used != part.size()) throw UsageError("cannot parse angle '" + text + "'");
    return v;
  };
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return number(s);
  const std::string head = s.substr(0, pos);
  std::string tail = s.substr(pos + 2);
  double factor = head.empty() ? 1.0 : (head == "-" ? -1.0 : number(head));
  if (!tail.empty()) {
    if (tail[0] != '/') throw UsageError("cannot parse angle '" + text + "'");
    factor /= number(tail.substr(1));
  }
  return factor * std::numbers::pi;
}

struct GeometryArgs {
  std::string name = "dowker";
  std::string theta1 = "pi";
  std::string theta0 = "pi/2";
  std::string bc = "dirichlet";
  double period = 1.0;

  void add(CLI::App* app) {
    app->add_option("--geometry", name, "Background geometry")
        ->check(CLI::IsMember({"minkowski", "cone", "dowker", "wedge", "periodic-line"}))
        ->capture_default_str();
    app->add_option("--theta1", theta1, "Cone angular period (number or multiple of pi, e.g. 0.8pi)")
        ->capture_default_str();
    app->add_option("--theta0", theta0, "Wedge opening angle")->capture_default_str();
    app->add_option("--bc", bc, "Wedge boundary condition")
        ->check(CLI::IsMember({"dirichlet", "neumann"}))
        ->capture_default_str();
    app->add_option("--period", period, "Period L of the periodic line")->capture_default_str();
  }

  Geometry build() const {
    Geometry g;
    if (name == "minkowski") g = Minkowski{};
    else if (name == "cone") g = Cone{parse_angle(theta1)};
    else if (name == "dowker") g = Dowker{};
    else if (name == "wedge")
      g = Wedge{parse_angle(theta0), bc == "neumann" ? BoundaryCondition::neumann : BoundaryCondition::dirichlet};
    else g = PeriodicLine{period};
    require_valid(g);
    return g;
  }
};

struct CouplingArgs {
  std::optional<double> beta;
  std::optional<double> xi;
  std::optional<std::string> named;

  void add(CLI::App* app) {
    auto* b = app->add_option("--beta", beta, "Curvature coupling beta = xi - 1/4 (default 0)");
    auto* x = app->add_option("--xi", xi, "Curvature coupling xi");
    auto* n = app->add_option("--coupling", named, "Named coupling")
                  ->check(CLI::IsMember({"minimal", "conformal", "quarter"}));
    b->excludes(x)->excludes(n);
    x->excludes(n);
  }

  Coupling build() const {
    if (beta) return Coupling{*beta};
    if (xi) return Coupling::from_xi(*xi);
    if (named) {
      if (*named == "minimal") return Coupling::minimal();
      if (*named == "conformal") return Coupling::conformal();
    }
    return Coupling::quarter();
  }
};

RenormMode parse_renorm(const std::string& s) {
  if (s == "component") return RenormMode::component_subtraction;
  if (s == "raw") return RenormMode::raw;
  return RenormMode::kernel_subtraction;
}

json geometry_json(const Geometry& g) {
  json j{{"name", geometry_name(g)}};
  if (const auto* c = std::get_if<Cone>(&g)) j["theta1"] = c->period;
  if (const auto* w = std::get_if<Wedge>(&g)) {
    j["theta0"] = w->opening;
    j["bc"] = to_string(w->bc);
  }
  if (const auto* p = std::get_if<PeriodicLine>(&g)) j["period"] = p->period;
  return j;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

json scan_metadata(const ScanSpec& s, const ScanResult& r) {
  json cutoffs = json::array();
  for (double t : s.cutoffs) cutoffs.push_back(t == 0 ? json("extrapolated to 0") : json(t));
  return {{"tool", "vacstress"},
          {"version", vacstress::version},
          {"git_describe", VACSTRESS_GIT_DESCRIBE},
          {"created_utc", utc_timestamp()},
          {"geometry", geometry_json(s.geometry)},
          {"coupling", {{"beta", s.coupling.beta}, {"xi", s.coupling.xi()}}},
          {"beta_correction", s.beta_correction},
          {"cutoffs", cutoffs},
          {"renorm", std::string(to_string(s.renorm))},
          {"sweep",
           {{"variable", std::string(to_string(s.sweep))},
            {"from", s.from},
            {"to", s.to},
            {"samples", s.samples},
            {"spacing", std::string(to_string(s.spacing))}}},
          {"fixed", {{"r", s.point.r}, {"theta", s.point.theta}, {"z", s.point.z}}},
          {"columns", r.header},
          {"warnings", r.warnings}};
}

void write_file(const fs::path& path, const std::string& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

fs::path sidecar_path(fs::path csv) { return csv.replace_extension(".json"); }

void write_scan(const ScanSpec& spec, const ScanResult& r, const fs::path& out, json extra = json::object()) {
  write_file(out, to_csv(r));
  json meta = scan_metadata(spec, r);
  meta.update(extra);
  write_file(sidecar_path(out), meta.dump(2) + "\n");
  for (const auto& w : r.warnings) std::cerr << "warning: " << out.string() << ": " << w << '\n';
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  GeometryArgs geometry;
  CouplingArgs coupling;
  double r = 1, t = 1, z = 0;
  std::string theta = "0";
  std::optional<double> r_prime, z_prime;
  std::optional<std::string> theta_prime;
  std::string renorm = "kernel";
  bool kernel_only = false;
  bool as_json = false;
};

int run_eval(const EvalArgs& a) {
  const Geometry g = a.geometry.build();
  const Coupling c = a.coupling.build();
  const double theta = parse_angle(a.theta);
  const PointPair pair{a.t,     a.r, a.r_prime.value_or(a.r), theta, a.theta_prime ? parse_angle(*a.theta_prime) : theta,
                       a.z, a.z_prime.value_or(a.z)};
  json out{{"geometry", geometry_json(g)}};
  out["point"] = {{"t", pair.t},         {"r", pair.r}, {"r_prime", pair.r_prime}, {"theta", pair.theta},
                  {"theta_prime", pair.theta_prime}, {"z", pair.z}, {"z_prime", pair.z_prime}};

  std::optional<double> tbar;
  std::string tbar_note;
  try {
    if (std::holds_alternative<Minkowski>(g)) tbar = tbar_minkowski(pair);
    else if (const auto* cone = std::get_if<Cone>(&g)) tbar = tbar_cone(pair, cone->period);
    else if (std::holds_alternative<Dowker>(g)) tbar = tbar_dowker(pair);
    else if (const auto* w = std::get_if<Wedge>(&g)) {
      tbar = tbar_wedge_renormalized(pair, w->opening, w->bc);
      tbar_note = "vacuum-subtracted";
    } else {
      const auto& line = std::get<PeriodicLine>(g);
      // The periodic direction is z.
      const CartesianSeparation d{pair.t, pair.z - pair.z_prime,
                                  pair.r * std::cos(pair.theta) - pair.r_prime * std::cos(pair.theta_prime),
                                  pair.r * std::sin(pair.theta) - pair.r_prime * std::sin(pair.theta_prime)};
      tbar = tbar_periodic_line(d, line.period);
    }
  } catch (const SingularityError& e) {
    if (a.kernel_only) throw;
    tbar_note = std::string("not evaluated: ") + e.what();
  }
  out["tbar"] = tbar ? json(*tbar) : json(nullptr);
  if (!tbar_note.empty()) out["tbar_note"] = tbar_note;

  if (!a.kernel_only) {
    const EvaluationPoint x{a.r, theta, a.z};
    StressTensor s;
    std::optional<StressTensor> err;
    if (a.t == 0) {
      const auto e = stress_t0(g, x, c);
      s = e.value;
      err = e.error;
    } else {
      s = stress_at(g, x, c, a.t, parse_renorm(a.renorm));
    }
    out["coupling"] = {{"beta", c.beta}, {"xi", c.xi()}};
    out["renorm"] = std::string(to_string(s.renorm));
    out["cutoff"] = a.t == 0 ? json("extrapolated to 0") : json(a.t);
    out["stress"] = {{"T00", s.t00}, {"Trr", s.t_rr}, {"Tperp", s.t_perp}, {"Tzz", s.t_zz}};
    if (err) out["stress_error"] = {{"T00", err->t00}, {"Trr", err->t_rr}, {"Tperp", err->t_perp}, {"Tzz", err->t_zz}};
    out["trace"] = trace(s);
  }

  if (a.as_json) {
    std::cout << out.dump(2) << '\n';
    return exit_ok;
  }
  std::cout << std::setprecision(17);
  std::cout << "geometry  " << out["geometry"].dump() << '\n';
  std::cout << "point     t=" << pair.t << " r=" << pair.r << " r'=" << pair.r_prime << " theta=" << pair.theta
            << " theta'=" << pair.theta_prime << " z=" << pair.z << " z'=" << pair.z_prime << '\n';
  std::cout << "tbar      " << (tbar ? format_number(*tbar) : std::string("n/a"))
            << (tbar_note.empty() ? "" : "  (" + tbar_note + ")") << '\n';
  if (!a.kernel_only) {
    std::cout << "coupling  beta=" << format_number(c.beta) << " xi=" << format_number(c.xi()) << '\n';
    std::cout << "cutoff    " << (a.t == 0 ? std::string("t -> 0 (extrapolated)") : "t=" + format_number(a.t)) << '\n';
    std::cout << "renorm    " << out["renorm"].get<std::string>() << '\n';
    for (const char* k : {"T00", "Trr", "Tperp", "Tzz"}) {
      std::cout << std::left << std::setw(10) << k << format_number(out["stress"][k].get<double>());
      if (out.contains("stress_error")) std::cout << "  +- " << format_number(out["stress_error"][k].get<double>());
      std::cout << '\n';
    }
    std::cout << "trace     " << format_number(out["trace"].get<double>()) << '\n';
  }
  return exit_ok;
}

// --- scan --------------------------------------------------------------------

struct ScanArgs {
  GeometryArgs geometry;
  CouplingArgs coupling;
  std::string sweep = "r";
  std::string from = "0.1", to = "10";
  int samples = 200;
  std::optional<std::string> spacing;
  double r = 1, z = 0;
  std::string theta = "0";
  std::vector<double> cutoffs{1.0, 0.0};
  std::vector<std::string> components{"T00", "Trr", "Tperp", "Tzz"};
  bool beta_correction = false;
  std::string renorm = "kernel";
  std::string out;
  unsigned workers = default_workers();
};

int run_scan_cmd(const ScanArgs& a) {
  ScanSpec s;
  s.geometry = a.geometry.build();
  s.coupling = a.coupling.build();
  s.sweep = a.sweep == "theta" ? SweepVariable::theta : a.sweep == "theta1" ? SweepVariable::theta1 : SweepVariable::r;
  s.from = parse_angle(a.from);
  s.to = parse_angle(a.to);
  s.samples = a.samples;
  s.spacing = a.spacing ? (*a.spacing == "log" ? Spacing::log : Spacing::linear)
                        : (s.sweep == SweepVariable::theta ? Spacing::linear : Spacing::log);
  s.point = {a.r, parse_angle(a.theta), a.z};
  s.cutoffs = a.cutoffs;
  s.components.clear();
  for (const auto& name : a.components) {
    for (Component c : all_components)
      if (to_string(c) == name) s.components.push_back(c);
  }
  s.beta_correction = a.beta_correction;
  s.renorm = parse_renorm(a.renorm);
  const ScanResult r = run_scan(s, a.workers);
  write_scan(s, r, a.out);
  std::cout << "wrote " << a.out << " (" << r.rows.size() << " rows, " << r.warnings.size() << " warnings)\n";
  return exit_ok;
}

// --- figure ------------------------------------------------------------------

struct FigureArgs {
  std::string id;
  std::string out_dir = ".";
  int samples = 200;
  unsigned workers = default_workers();
  bool list = false;
};

int run_figure(const FigureArgs& a) {
  if (a.list || a.id.empty()) {
    for (const auto& f : figures(2)) std::cout << std::left << std::setw(10) << f.id << f.description << '\n';
    if (a.id.empty() && !a.list) {
      std::cerr << "figure: an id is required\n";
      return exit_usage;
    }
    return exit_ok;
  }
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  const Figure f = find_figure(a.id, a.samples);
  for (const auto& curve : f.curves) {
    const ScanResult r = run_scan(curve.spec, a.workers);
    const fs::path out = fs::path(a.out_dir) / (curve.name + ".csv");
    write_scan(curve.spec, r, out, {{"figure", f.id}, {"description", f.description}, {"curve", curve.label}});
    std::cout << "wrote " << out.string() << '\n';
  }
  return exit_ok;
}

// --- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> only;
  std::uint64_t seed = 42;
  std::string json_path;
  bool list = false;
};

int run_verify(const VerifyArgs& a) {
  if (a.list) {
    for (const auto& n : oracle_names()) std::cout << n << '\n';
    return exit_ok;
  }
  const auto reports = run_oracle_suite(a.only, a.seed);
  std::cout << format_reports(reports);
  const bool ok = all_passed(reports);
  std::cout << (ok ? "all oracles passed" : "VERIFICATION FAILED") << " (seed " << a.seed << ")\n";
  if (!a.json_path.empty()) {
    json j{{"seed", a.seed}, {"passed", ok}, {"version", vacstress::version}, {"git_describe", VACSTRESS_GIT_DESCRIBE}};
    j["reports"] = json::array();
    for (const auto& r : reports) {
      j["reports"].push_back({{"name", r.name},
                              {"points_tested", r.points_tested},
                              {"max_rel_err", std::isfinite(r.max_rel_err) ? json(r.max_rel_err) : json(nullptr)},
                              {"tolerance", r.tolerance},
                              {"passed", r.passed},
                              {"detail", r.detail}});
    }
    write_file(a.json_path, j.dump(2) + "\n");
  }
  return ok ? exit_ok : exit_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cylinder kernels and renormalized vacuum stress on cones, Dowker space and wedges"};
  app.set_version_flag("--version", std::string(vacstress::version) + " (" + VACSTRESS_GIT_DESCRIBE + ")");
  app.set_config("--config", "", "Read options from a key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Kernel and stress tensor at one point");
  eval.geometry.add(eval_cmd);
  eval.coupling.add(eval_cmd);
  eval_cmd->add_option("--r", eval.r, "Radius r")->capture_default_str();
  eval_cmd->add_option("--rprime", eval.r_prime, "Radius r' for the kernel (default r)");
  eval_cmd->add_option("--theta", eval.theta, "Angle theta")->capture_default_str();
  eval_cmd->add_option("--thetaprime", eval.theta_prime, "Angle theta' for the kernel (default theta)");
  eval_cmd->add_option("--z", eval.z, "Axial coordinate z")->capture_default_str();
  eval_cmd->add_option("--zprime", eval.z_prime, "Axial coordinate z' for the kernel (default z)");
  eval_cmd->add_option("--t", eval.t, "Euclidean time separation; 0 extrapolates the stress to t -> 0")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  eval_cmd->add_option("--renorm", eval.renorm, "Renormalization for t > 0")
      ->check(CLI::IsMember({"kernel", "component", "raw"}))
      ->capture_default_str();
  eval_cmd->add_flag("--kernel-only", eval.kernel_only, "Print the kernel only");
  eval_cmd->add_flag("--json", eval.as_json, "Print JSON instead of text");

  ScanArgs scan;
  auto* scan_cmd = app.add_subcommand("scan", "Stress components along a sweep, written as CSV");
  scan.geometry.add(scan_cmd);
  scan.coupling.add(scan_cmd);
  scan_cmd->add_option("--sweep", scan.sweep, "Swept variable")
      ->check(CLI::IsMember({"r", "theta", "theta1"}))
      ->capture_default_str();
  scan_cmd->add_option("--from", scan.from, "Start of the sweep")->capture_default_str();
  scan_cmd->add_option("--to", scan.to, "End of the sweep")->capture_default_str();
  scan_cmd->add_option("--samples", scan.samples, "Number of grid points")
      ->check(CLI::Range(2, 1000000))
      ->capture_default_str();
  scan_cmd->add_option("--spacing", scan.spacing, "Grid spacing (default log for r and theta1, linear for theta)")
      ->check(CLI::IsMember({"log", "linear"}));
  scan_cmd->add_option("--r", scan.r, "Fixed radius")->capture_default_str();
  scan_cmd->add_option("--theta", scan.theta, "Fixed angle")->capture_default_str();
  scan_cmd->add_option("--z", scan.z, "Fixed axial coordinate")->capture_default_str();
  scan_cmd->add_option("--cutoffs", scan.cutoffs, "Cutoffs t; 0 extrapolates to t -> 0")
      ->delimiter(',')
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  scan_cmd->add_option("--components", scan.components, "Components to write")
      ->delimiter(',')
      ->check(CLI::IsMember({"T00", "Trr", "Tperp", "Tzz"}))
      ->capture_default_str();
  scan_cmd->add_flag("--beta-correction", scan.beta_correction, "Write stress(beta=1) - stress(beta=0)");
  scan_cmd->add_option("--renorm", scan.renorm, "Renormalization for t > 0 columns")
      ->check(CLI::IsMember({"kernel", "component", "raw"}))
      ->capture_default_str();
  scan_cmd->add_option("--out", scan.out, "Output CSV; metadata goes to the same name with .json")->required();
  scan_cmd->add_option("--workers", scan.workers, "Parallel workers")->check(CLI::PositiveNumber);

  FigureArgs figure;
  auto* figure_cmd = app.add_subcommand("figure", "Write the datasets of a figure");
  figure_cmd->add_option("id", figure.id, "Figure id (see --list)");
  figure_cmd->add_option("--out-dir", figure.out_dir, "Output directory")->capture_default_str();
  figure_cmd->add_option("--samples", figure.samples, "Grid points per curve")->capture_default_str();
  figure_cmd->add_option("--workers", figure.workers, "Parallel workers")->check(CLI::PositiveNumber);
  figure_cmd->add_flag("--list", figure.list, "List figure ids");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle suite");
  verify_cmd->add_option("--only", verify.only, "Run only these oracles (repeatable)");
  verify_cmd->add_option("--seed", verify.seed, "Corpus seed")->capture_default_str();
  verify_cmd->add_option("--json", verify.json_path, "Write a JSON report here");
  verify_cmd->add_flag("--list", verify.list, "List oracle names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*eval_cmd) return run_eval(eval);
    if (*scan_cmd) return run_scan_cmd(scan);
    if (*figure_cmd) return run_figure(figure);
    if (*verify_cmd) return run_verify(verify);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}
