#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vacstress/jet.hpp"
#include "vacstress/kernels.hpp"
#include "vacstress/modesum.hpp"
#include "vacstress/oracles.hpp"

using namespace vacstress;
using test_support::rel_err;

namespace {

constexpr double pi = std::numbers::pi;

PointPair random_pair(std::mt19937_64& g) {
  std::uniform_real_distribution<double> pos(0.2, 3), ang(-pi, pi), t(0.05, 2);
  return {t(g), pos(g), pos(g), ang(g), ang(g), pos(g), pos(g)};
}

}  // namespace

TEST(Minkowski, TimeSplit) {
  for (double t : {0.1, 1.0, 3.0})
    EXPECT_LE(rel_err(tbar_minkowski(split_in_time(t, 2.0)), -1 / (2 * pi * pi * t * t)), 1e-15);
}

TEST(Minkowski, HyperbolicFormAgrees) {
  std::mt19937_64 g(1);
  for (int i = 0; i < 200; ++i) {
    const PointPair p = random_pair(g);
    EXPECT_LE(rel_err(tbar_minkowski_hyperbolic(p), tbar_minkowski(p)), 1e-13);
  }
}

TEST(Minkowski, CoincidentPointsAreSingular) {
  EXPECT_THROW(tbar_minkowski(split_in_time(0, 1)), SingularityError);
}

TEST(Cone, FlatPeriodIsMinkowski) {
  std::mt19937_64 g(2);
  for (int i = 0; i < 50; ++i) {
    const PointPair p = random_pair(g);
    EXPECT_LE(rel_err(tbar_cone(p, 2 * pi), tbar_minkowski(p)), 1e-14);
    EXPECT_LE(rel_err(tbar_cone(p, 2 * pi * (1 + 1e-9)), tbar_minkowski(p)), 1e-8);
    EXPECT_EQ(tbar_cone_subtracted(p, 2 * pi), 0);
  }
}

TEST(Cone, PeriodicEvenAndSymmetric) {
  std::mt19937_64 g(3);
  for (double period : {pi / 3, 0.8 * pi, 4 * pi}) {
    for (int i = 0; i < 40; ++i) {
      const PointPair p = random_pair(g);
      const double v = tbar_cone(p, period);
      PointPair q = p;
      q.theta += period;
      EXPECT_LE(rel_err(tbar_cone(q, period), v), 1e-11);
      PointPair swapped{p.t, p.r_prime, p.r, p.theta_prime, p.theta, p.z_prime, p.z};
      EXPECT_LE(rel_err(tbar_cone(swapped, period), v), 1e-13);
    }
  }
}

TEST(Cone, SubtractedMatchesDifference) {
  std::mt19937_64 g(4);
  for (double period : {pi / 4, pi, 3 * pi, 100 * pi}) {
    for (int i = 0; i < 40; ++i) {
      const PointPair p = random_pair(g);
      const double full = tbar_cone(p, period) - tbar_minkowski(p);
      EXPECT_LE(rel_err(tbar_cone_subtracted(p, period), full, 1e-6 * std::abs(tbar_minkowski(p))), 1e-9);
    }
  }
}

TEST(Cone, SubtractedIsFiniteAtCoincidence) {
  const double a = tbar_cone_subtracted(split_in_time(1e-8, 1), pi);
  const double b = tbar_cone_subtracted(split_in_time(1e-4, 1), pi);
  EXPECT_TRUE(std::isfinite(a));
  EXPECT_LE(rel_err(a, b), 1e-7);
}

TEST(Cone, SeriesBranchIsContinuous) {
  // The small-u series takes over below u = 1e-4.
  for (double period : {0.5 * pi, 4 * pi}) {
    const double below = tbar_cone(split_in_time(0.99999e-4, 1), period);
    const double above = tbar_cone(split_in_time(1.00001e-4, 1), period);
    EXPECT_LE(rel_err(below, above), 1e-4) << period;
  }
}

TEST(Cone, OverflowGuardForTinyPeriods) {
  const PointPair p = split_in_time(2.0, 1.0);
  const double v = tbar_cone(p, 1e-3);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_LE(rel_err(v, oracle::tbar_cone_fourier(p, 1e-3)), 1e-12);
}

TEST(Cone, ImageSumWithTail) {
  std::mt19937_64 g(5);
  for (double period : {pi / 4, pi, 8 * pi}) {
    for (int i = 0; i < 10; ++i) {
      const PointPair p = random_pair(g);
      const double closed = tbar_cone(p, period);
      const auto with = tbar_cone_via_images(p, period, 1000);
      const auto without = tbar_cone_via_images(p, period, 1000, false);
      EXPECT_LE(rel_err(with.value, closed), 1e-8);
      EXPECT_LE(rel_err(with.value, closed), rel_err(without.value, closed) + 1e-15);
    }
  }
}

TEST(Cone, FourierSeries) {
  std::mt19937_64 g(6);
  for (int i = 0; i < 30; ++i) {
    const PointPair p = random_pair(g);
    EXPECT_LE(rel_err(oracle::tbar_cone_fourier(p, 0.7 * pi), tbar_cone(p, 0.7 * pi)), 1e-12);
  }
}

TEST(Cone, ModeSum) {
  const PointPair p{0.7, 1.1, 0.8, 0.4, -0.2, 0.3, 0.0};
  ModeSumControls c;
  c.n_max = 200;
  const auto m = tbar_modesum_4d(p, 0.8 * pi, c);
  EXPECT_LE(rel_err(m.value, tbar_cone(p, 0.8 * pi)), 1e-8);
  EXPECT_GT(m.terms, 1);
}

TEST(Cone, ModeSumOfFlatPeriodIsMinkowski) {
  const PointPair p{1.0, 1.0, 1.3, 0.2, 0.1, 0, 0.5};
  ModeSumControls c;
  c.n_max = 200;
  EXPECT_LE(rel_err(tbar_modesum_4d(p, 2 * pi, c).value, tbar_minkowski(p)), 1e-8);
}

TEST(Dowker, KnownValue) {
  const double want = -1 / (2 * pi * pi * 2 * 0.75 * std::log(2.0));
  EXPECT_LE(rel_err(tbar_dowker(PointPair{0, 2, 1, 0, 0, 0, 0}), want), 1e-14);
  EXPECT_NEAR(want, -0.0487252, 1e-7);
}

TEST(Dowker, LargeConeLimit) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 20; ++i) {
    const PointPair p = random_pair(g);
    EXPECT_LE(rel_err(tbar_cone(p, 1e4 * pi), tbar_dowker(p)), 1e-6);
  }
}

TEST(Dowker, SubtractedMatchesDifference) {
  std::mt19937_64 g(8);
  for (int i = 0; i < 50; ++i) {
    const PointPair p = random_pair(g);
    EXPECT_LE(rel_err(tbar_dowker_subtracted(p), tbar_dowker(p) - tbar_minkowski(p),
                      1e-6 * std::abs(tbar_minkowski(p))),
              1e-9);
  }
}

TEST(Wedge, QuarterPlaneImages) {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> ang(0.01, pi / 2 - 0.01), pos(0.2, 3), t(0.05, 2);
  for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
    for (int i = 0; i < 50; ++i) {
      const PointPair p{t(g), pos(g), pos(g), ang(g), ang(g), pos(g), pos(g)};
      const double full = tbar_wedge_renormalized(p, pi / 2, bc) + tbar_minkowski(p);
      EXPECT_LE(rel_err(full, oracle::tbar_quarter_plane_images(p, bc), 1e-3 * std::abs(tbar_minkowski(p))), 1e-10);
    }
  }
}

TEST(Wedge, HalfSpaceImages) {
  std::mt19937_64 g(10);
  std::uniform_real_distribution<double> ang(0.01, pi - 0.01), pos(0.2, 3), t(0.05, 2);
  for (auto bc : {BoundaryCondition::dirichlet, BoundaryCondition::neumann}) {
    for (int i = 0; i < 50; ++i) {
      const PointPair p{t(g), pos(g), pos(g), ang(g), ang(g), pos(g), pos(g)};
      const double full = tbar_wedge_renormalized(p, pi, bc) + tbar_minkowski(p);
      EXPECT_LE(rel_err(full, oracle::tbar_half_space_images(p, bc), 1e-3 * std::abs(tbar_minkowski(p))), 1e-10);
    }
  }
}

TEST(Wedge, DirichletVanishesOnPlates) {
  for (double opening : {pi / 3, 2 * pi / 5, 2 * pi / 3, 1.5 * pi}) {
    for (double thp : {0.2, 0.5, 0.8}) {
      const PointPair interior{0.5, 1.0, 1.2, 0.5 * opening, thp * opening, 0, 0.1};
      const double scale = std::abs(tbar_wedge_renormalized(interior, opening, BoundaryCondition::dirichlet) +
                                    tbar_minkowski(interior));
      for (double th : {1e-13 * opening, (1 - 1e-13) * opening}) {
        PointPair p = interior;
        p.theta = th;
        const double full = tbar_wedge_renormalized(p, opening, BoundaryCondition::dirichlet) + tbar_minkowski(p);
        EXPECT_LE(std::abs(full), 1e-10 * scale) << opening << " " << th;
      }
    }
  }
}

TEST(Wedge, NeumannNormalDerivativeVanishesOnPlates) {
  const double opening = 2 * pi / 5;
  const ActiveSet active{Coord::theta};
  for (double th : {1e-10 * opening, (1 - 1e-10) * opening}) {
    const PointPair p{0.5, 1.0, 1.2, th, 0.3 * opening, 0, 0.1};
    const auto j = lift(p, active);
    const auto full = tbar_wedge_renormalized(j, opening, BoundaryCondition::neumann) + tbar_minkowski(j);
    EXPECT_LE(std::abs(partial(full, active, Coord::theta)), 1e-8 * std::abs(full.value()));
  }
}

TEST(Wedge, RejectsPointsOutside) {
  EXPECT_THROW(tbar_wedge_renormalized(PointPair{1, 1, 1, -0.1, 0.2, 0, 0}, pi / 2, BoundaryCondition::dirichlet),
               DomainError);
  EXPECT_THROW(tbar_wedge_renormalized(PointPair{1, 1, 1, 0.2, 2.0, 0, 0}, pi / 2, BoundaryCondition::dirichlet),
               DomainError);
}

TEST(PeriodicLine, ClosedFormMatchesImages) {
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> d(-2, 2), t(0.05, 1);
  for (int i = 0; i < 50; ++i) {
    const CartesianSeparation s{t(g), d(g), d(g), d(g)};
    const double closed = tbar_periodic_line(s, 1.3);
    EXPECT_LE(rel_err(tbar_periodic_line_images(s, 1.3, 1000).value, closed), 1e-8);
  }
}

TEST(PeriodicLine, AxialSeparationOnly) {
  const CartesianSeparation s{0, 0.3, 0, 0};
  EXPECT_LE(rel_err(tbar_periodic_line(s, 1.0), tbar_periodic_line(CartesianSeparation{1e-7, 0.3, 0, 0}, 1.0)), 1e-12);
  EXPECT_LE(rel_err(tbar_periodic_line(s, 1.0), tbar_periodic_line_images(s, 1.0, 100000, false).value), 1e-4);
  EXPECT_THROW(tbar_periodic_line(CartesianSeparation{0, 2.0, 0, 0}, 1.0), SingularityError);
}

TEST(PeriodicLine, LongPeriodIsFlat) {
  const CartesianSeparation s{0.3, 0.2, 0.1, 0.0};
  EXPECT_LE(rel_err(tbar_periodic_line(s, 1e4), tbar_flat_cartesian(s)), 1e-6);
}

TEST(Kernel3d, FlatPeriod) {
  const PointPair p{0.5, 1.0, 2.0, 0.3, 0.3, 0, 0};
  const double dist = std::sqrt(0.25 + 1.0);
  EXPECT_LE(rel_err(tbar_3d(p, 2 * pi).value, -1 / (2 * pi * dist)), 1e-11);
}

TEST(Kernel3d, ZIntegralOfFourDimensionalKernel) {
  for (double period : {pi / 2, pi, 4 * pi}) {
    const PointPair p{0.4, 1.0, 1.5, 0.2, -0.3, 0, 0};
    EXPECT_LE(rel_err(tbar_3d(p, period).value, oracle::tbar_cone_z_integrated(p, period)), 1e-9) << period;
  }
}

TEST(Kernel3d, RequiresEqualZ) {
  EXPECT_THROW(tbar_3d(PointPair{0.4, 1.0, 1.5, 0, 0, 0, 1}, pi), DomainError);
}

TEST(Kernels, JetValuesMatchDoubles) {
  std::mt19937_64 g(13);
  const ActiveSet all = ActiveSet::all();
  for (int i = 0; i < 20; ++i) {
    PointPair p = random_pair(g);
    p.theta = std::abs(p.theta) * 0.4;
    p.theta_prime = std::abs(p.theta_prime) * 0.4;
    const auto j = lift(p, all);
    EXPECT_LE(rel_err(tbar_cone(j, 0.8 * pi).value(), tbar_cone(p, 0.8 * pi)), 1e-13);
    EXPECT_LE(rel_err(tbar_dowker(j).value(), tbar_dowker(p)), 1e-13);
    EXPECT_LE(rel_err(tbar_cone_subtracted(j, 3 * pi).value(), tbar_cone_subtracted(p, 3 * pi)), 1e-13);
    EXPECT_LE(rel_err(tbar_wedge_renormalized(j, 1.3, BoundaryCondition::dirichlet).value(),
                      tbar_wedge_renormalized(p, 1.3, BoundaryCondition::dirichlet)),
              1e-13);
  }
}

TEST(Kernels, JetDerivativesMatchFiniteDifferences) {
  const PointPair p{0.6, 1.1, 0.9, 0.3, 0.1, 0.2, -0.1};
  const ActiveSet all = ActiveSet::all();
  const auto f = [](const auto& q) { return tbar_cone(q, 0.8 * pi); };
  const auto j = f(lift<long double>(p, all));
  for (Coord a : all_coords) {
    const long double fd = fd::partial<long double>(
        f, BasicPointPair<long double>{p.t, p.r, p.r_prime, p.theta, p.theta_prime, p.z, p.z_prime}, a, 1e-2L);
    EXPECT_LE(rel_err(double(partial(j, all, a)), double(fd), 1e-3 * std::abs(double(j.value()))), 1e-8)
        << to_string(a);
  }
}
