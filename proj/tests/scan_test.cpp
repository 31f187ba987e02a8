#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "vacstress/scan.hpp"

using namespace vacstress;

namespace {
constexpr double pi = std::numbers::pi;

ScanSpec small_scan() {
  ScanSpec s;
  s.geometry = Cone{0.8 * pi};
  s.samples = 7;
  return s;
}
}  // namespace

TEST(Scan, LogGridEndpoints) {
  ScanSpec s = small_scan();
  const auto grid = sweep_grid(s);
  ASSERT_EQ(grid.size(), 7u);
  EXPECT_EQ(grid.front(), 0.1);
  EXPECT_EQ(grid.back(), 10);
  EXPECT_NEAR(grid[3], 1.0, 1e-15);
  for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_GT(grid[i], grid[i - 1]);
}

TEST(Scan, LinearGrid) {
  ScanSpec s = small_scan();
  s.spacing = Spacing::linear;
  s.from = 1;
  s.to = 4;
  s.samples = 4;
  const auto grid = sweep_grid(s);
  EXPECT_EQ(grid, (std::vector<double>{1, 2, 3, 4}));
}

TEST(Scan, Validation) {
  ScanSpec s = small_scan();
  s.samples = 1;
  EXPECT_THROW(validate(s), DomainError);
  s = small_scan();
  s.from = 5;
  s.to = 1;
  EXPECT_THROW(validate(s), DomainError);
  s = small_scan();
  s.geometry = Dowker{};
  s.sweep = SweepVariable::theta1;
  EXPECT_THROW(validate(s), DomainError);
  s = small_scan();
  s.geometry = Wedge{pi / 2, BoundaryCondition::dirichlet};
  s.sweep = SweepVariable::theta;
  s.spacing = Spacing::linear;
  s.from = 0;
  s.to = 1;
  EXPECT_THROW(validate(s), DomainError);
  s.geometry = PeriodicLine{1};
  EXPECT_THROW(validate(s), DomainError);
  s = small_scan();
  s.components.clear();
  EXPECT_THROW(validate(s), DomainError);
  s = small_scan();
  s.cutoffs = {-1};
  EXPECT_THROW(validate(s), DomainError);
}

TEST(Scan, HeaderAndRows) {
  ScanSpec s = small_scan();
  s.components = {Component::t00, Component::t_zz};
  s.cutoffs = {1, 0};
  const ScanResult r = run_scan(s);
  EXPECT_EQ(r.header, (std::vector<std::string>{"r", "T00[t=1]", "Tzz[t=1]", "T00[t=0]", "Tzz[t=0]"}));
  ASSERT_EQ(r.rows.size(), 7u);
  for (const auto& row : r.rows) {
    ASSERT_EQ(row.size(), 4u);
    for (const auto& cell : row) EXPECT_TRUE(cell && std::isfinite(*cell));
  }
  EXPECT_TRUE(r.warnings.empty());
  const StressTensor direct = stress_at(s.geometry, {r.sweep_values[2], 0, 0}, s.coupling, 1,
                                        RenormMode::kernel_subtraction);
  EXPECT_EQ(*r.rows[2][0], direct.t00);
}

TEST(Scan, CsvFormat) {
  ScanSpec s = small_scan();
  s.samples = 2;
  s.components = {Component::t00};
  s.cutoffs = {1};
  const std::string csv = to_csv(run_scan(s));
  EXPECT_EQ(csv.substr(0, 12), "r,T00[t=1]\r\n");
  EXPECT_EQ(csv.substr(csv.size() - 2), "\r\n");
  EXPECT_NE(csv.find("\r\n0.1,"), std::string::npos);
  EXPECT_NE(csv.find("\r\n10,"), std::string::npos);
}

TEST(Scan, NumbersRoundTrip) {
  for (double x : {0.1, 1.0 / 3, -2.5e-300, 6.02214076e23, 1e-7}) EXPECT_EQ(std::stod(format_number(x)), x);
  EXPECT_EQ(format_number(10), "10");
}

TEST(Scan, FailedPointsAreEmptyCellsWithWarnings) {
  ScanSpec s;
  s.geometry = Wedge{pi / 2, BoundaryCondition::dirichlet};
  s.sweep = SweepVariable::theta;
  s.spacing = Spacing::linear;
  s.from = 1e-5;
  s.to = pi / 4;
  s.samples = 3;
  s.cutoffs = {1, 0};
  const ScanResult r = run_scan(s);
  ASSERT_EQ(r.rows.size(), 3u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_TRUE(r.rows[0][j].has_value());
  for (std::size_t j = 4; j < 8; ++j) EXPECT_FALSE(r.rows[0][j].has_value());
  EXPECT_TRUE(r.rows[1][4].has_value());
  EXPECT_EQ(r.warnings.size(), 1u);
  const std::string csv = to_csv(r);
  EXPECT_NE(csv.find(",,,\r\n"), std::string::npos);
}

TEST(Scan, IndependentOfWorkerCount) {
  ScanSpec s;
  s.geometry = Dowker{};
  s.samples = 23;
  const std::string one = to_csv(run_scan(s, 1));
  EXPECT_EQ(one, to_csv(run_scan(s, 4)));
  EXPECT_EQ(one, to_csv(run_scan(s, 16)));
}

TEST(Scan, BetaCorrectionColumns) {
  ScanSpec s = small_scan();
  s.beta_correction = true;
  s.cutoffs = {1};
  const ScanResult r = run_scan(s);
  const EvaluationPoint x{r.sweep_values[1], 0, 0};
  const double want = stress_at(s.geometry, x, Coupling{1}, 1, RenormMode::kernel_subtraction).t_rr -
                      stress_at(s.geometry, x, Coupling{0}, 1, RenormMode::kernel_subtraction).t_rr;
  EXPECT_NEAR(*r.rows[1][1], want, 1e-15 * std::abs(want) + 1e-300);
}

TEST(Scan, ConeAngleSweep) {
  ScanSpec s;
  s.geometry = Cone{pi};
  s.sweep = SweepVariable::theta1;
  s.from = pi / 8;
  s.to = 8 * pi;
  s.samples = 5;
  const ScanResult r = run_scan(s);
  EXPECT_EQ(r.header.front(), "theta1");
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Figures, AllIdsPresent) {
  const std::vector<std::string> want{"fig1", "fig1b", "fig2mis", "fig2ext", "fig2b", "fig3", "fig3b", "fig4",
                                      "coneang1", "coneang2", "fig5", "fig5b", "fig6", "fig6b", "fig7", "fig7b"};
  EXPECT_EQ(figure_ids(), want);
  EXPECT_THROW(find_figure("fig99"), DomainError);
}

TEST(Figures, CaptionParameters) {
  const Figure ext = find_figure("fig2ext");
  ASSERT_EQ(ext.curves.size(), 3u);
  std::set<double> periods;
  for (const auto& c : ext.curves) periods.insert(std::get<Cone>(c.spec.geometry).period);
  EXPECT_EQ(periods, (std::set<double>{2.5 * pi, 8 * pi, 1e4 * pi}));

  const Figure f4 = find_figure("fig4");
  std::set<double> xis;
  for (const auto& c : f4.curves) {
    EXPECT_DOUBLE_EQ(std::get<Cone>(c.spec.geometry).period, 0.8 * pi);
    xis.insert(c.spec.coupling.xi());
  }
  EXPECT_EQ(xis.size(), 2u);
  EXPECT_TRUE(xis.count(0.25));

  const Figure f1b = find_figure("fig1b");
  for (const auto& c : f1b.curves) EXPECT_TRUE(c.spec.beta_correction);

  for (const auto& c : find_figure("coneang1").curves) {
    EXPECT_EQ(c.spec.sweep, SweepVariable::theta1);
    EXPECT_EQ(c.spec.point.r, 1);
  }
}

TEST(Figures, CurveNamesAreUnique) {
  std::set<std::string> names;
  std::size_t n = 0;
  for (const auto& f : figures()) {
    EXPECT_FALSE(f.curves.empty()) << f.id;
    for (const auto& c : f.curves) {
      names.insert(c.name);
      ++n;
      EXPECT_NO_THROW(validate(c.spec)) << c.name;
    }
  }
  EXPECT_EQ(names.size(), n);
}

TEST(Figures, FiniteAtPositiveCutoff) {
  for (const auto& f : figures(9)) {
    for (const auto& c : f.curves) {
      const ScanResult r = run_scan(c.spec, 4);
      EXPECT_TRUE(r.warnings.empty()) << c.name;
      for (std::size_t j = 0; j < r.header.size() - 1; ++j) {
        if (r.header[j + 1].find("[t=0]") != std::string::npos) continue;
        for (const auto& row : r.rows) EXPECT_TRUE(row[j] && std::isfinite(*row[j])) << c.name << " " << r.header[j + 1];
      }
    }
  }
}
