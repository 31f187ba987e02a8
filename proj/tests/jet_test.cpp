#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vacstress/jet.hpp"

using namespace vacstress;

namespace {

using J = Jet2<double>;

J var(double v, std::size_t slot, std::size_t n = 2) { return J::variable(v, slot, n); }

}  // namespace

TEST(Jet, ConstantsHaveNoDerivatives) {
  const J c(3.0);
  EXPECT_EQ(c.value(), 3.0);
  EXPECT_EQ(c.size(), 0u);
}

TEST(Jet, ProductRule) {
  const J x = var(2, 0), y = var(5, 1);
  const J f = x * x * y;
  EXPECT_DOUBLE_EQ(f.value(), 20);
  EXPECT_DOUBLE_EQ(f.d(0), 20);
  EXPECT_DOUBLE_EQ(f.d(1), 4);
  EXPECT_DOUBLE_EQ(f.d2(0, 0), 10);
  EXPECT_DOUBLE_EQ(f.d2(0, 1), 4);
  EXPECT_DOUBLE_EQ(f.d2(1, 0), 4);
  EXPECT_DOUBLE_EQ(f.d2(1, 1), 0);
}

TEST(Jet, QuotientRule) {
  const J x = var(2, 0), y = var(5, 1);
  const J f = x / y;
  EXPECT_DOUBLE_EQ(f.d(0), 1.0 / 5);
  EXPECT_DOUBLE_EQ(f.d(1), -2.0 / 25);
  EXPECT_DOUBLE_EQ(f.d2(1, 1), 2 * 2.0 / 125);
  EXPECT_DOUBLE_EQ(f.d2(0, 1), -1.0 / 25);
}

struct Unary {
  const char* name;
  J (*f)(const J&);
  double (*f0)(double);
  double (*f1)(double);
  double (*f2)(double);
  double x;
};

class JetUnary : public ::testing::TestWithParam<Unary> {};

TEST_P(JetUnary, MatchesAnalyticDerivatives) {
  const Unary u = GetParam();
  const J y = u.f(var(u.x, 0, 1));
  EXPECT_NEAR(y.value(), u.f0(u.x), 1e-15 * std::max(1.0, std::abs(u.f0(u.x))));
  EXPECT_NEAR(y.d(0), u.f1(u.x), 1e-14 * std::max(1.0, std::abs(u.f1(u.x))));
  EXPECT_NEAR(y.d2(0, 0), u.f2(u.x), 1e-14 * std::max(1.0, std::abs(u.f2(u.x))));
}

INSTANTIATE_TEST_SUITE_P(
    Elementary, JetUnary,
    ::testing::Values(
        Unary{"exp", [](const J& a) { return exp(a); }, [](double x) { return std::exp(x); },
              [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); }, 0.7},
        Unary{"log", [](const J& a) { return log(a); }, [](double x) { return std::log(x); },
              [](double x) { return 1 / x; }, [](double x) { return -1 / (x * x); }, 1.9},
        Unary{"sqrt", [](const J& a) { return sqrt(a); }, [](double x) { return std::sqrt(x); },
              [](double x) { return 0.5 / std::sqrt(x); }, [](double x) { return -0.25 / (x * std::sqrt(x)); }, 3.0},
        Unary{"sinh", [](const J& a) { return sinh(a); }, [](double x) { return std::sinh(x); },
              [](double x) { return std::cosh(x); }, [](double x) { return std::sinh(x); }, -1.3},
        Unary{"cosh", [](const J& a) { return cosh(a); }, [](double x) { return std::cosh(x); },
              [](double x) { return std::sinh(x); }, [](double x) { return std::cosh(x); }, 0.4},
        Unary{"asinh", [](const J& a) { return asinh(a); }, [](double x) { return std::asinh(x); },
              [](double x) { return 1 / std::sqrt(1 + x * x); },
              [](double x) { return -x / std::pow(1 + x * x, 1.5); }, 0.8},
        Unary{"sin", [](const J& a) { return sin(a); }, [](double x) { return std::sin(x); },
              [](double x) { return std::cos(x); }, [](double x) { return -std::sin(x); }, 2.2},
        Unary{"cos", [](const J& a) { return cos(a); }, [](double x) { return std::cos(x); },
              [](double x) { return -std::sin(x); }, [](double x) { return -std::cos(x); }, 2.2},
        Unary{"atan", [](const J& a) { return atan(a); }, [](double x) { return std::atan(x); },
              [](double x) { return 1 / (1 + x * x); },
              [](double x) { return -2 * x / ((1 + x * x) * (1 + x * x)); }, 0.6},
        Unary{"pow", [](const J& a) { return pow(a, -2.5); }, [](double x) { return std::pow(x, -2.5); },
              [](double x) { return -2.5 * std::pow(x, -3.5); }, [](double x) { return 8.75 * std::pow(x, -4.5); },
              1.7}),
    [](const auto& info) { return std::string(info.param.name); });

TEST(Jet, MixedPartialsAreSymmetric) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> d(0.2, 2);
  for (int i = 0; i < 50; ++i) {
    const J x = var(d(g), 0, 3), y = var(d(g), 1, 3), z = var(d(g), 2, 3);
    const J f = sinh(x * y) / (1.0 + z * z) + log(x + y * z) * cos(z - x);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(f.d2(a, b), f.d2(b, a));
  }
}

TEST(Jet, DivisionByZeroThrows) {
  EXPECT_THROW(var(1, 0) / J(0.0), DomainError);
  EXPECT_THROW(1.0 / var(0, 0), DomainError);
}

TEST(ActiveSet, RejectsDuplicates) {
  ActiveSet s{Coord::t, Coord::r};
  EXPECT_EQ(s.size(), 2u);
  EXPECT_THROW(s.add(Coord::t), DomainError);
  EXPECT_EQ(ActiveSet::all().size(), 7u);
}

TEST(ActiveSet, LiftSeedsOnlyActiveCoordinates) {
  const PointPair p{0.5, 1, 2, 0.1, 0.2, 3, 4};
  const ActiveSet active{Coord::r, Coord::z_prime};
  const auto jets = lift(p, active);
  const J f = jets.r * jets.z_prime + jets.t;
  EXPECT_DOUBLE_EQ(f.value(), 4.5);
  EXPECT_DOUBLE_EQ(partial(f, active, Coord::r), 4);
  EXPECT_DOUBLE_EQ(partial(f, active, Coord::z_prime), 1);
  EXPECT_EQ(partial(f, active, Coord::t), 0);
  EXPECT_DOUBLE_EQ(partial2(f, active, Coord::r, Coord::z_prime), 1);
  EXPECT_EQ(partial2(f, active, Coord::t, Coord::t), 0);
  EXPECT_THROW(lift(p, ActiveSet{}), DomainError);
}

TEST(ActiveSet, CoordinateAccess) {
  PointPair p{};
  for (std::size_t i = 0; i < all_coords.size(); ++i) coordinate(p, all_coords[i]) = double(i);
  EXPECT_EQ(p.t, 0);
  EXPECT_EQ(p.theta_prime, 4);
  EXPECT_EQ(p.z_prime, 6);
  EXPECT_EQ(to_string(Coord::r_prime), "r'");
}

TEST(Jet, LongDoubleScalar) {
  using JL = Jet2<long double>;
  const JL x = JL::variable(0.5L, 0, 1);
  const JL f = exp(x) * x;
  EXPECT_NEAR(double(f.d2(0, 0)), std::exp(0.5) * 2.5, 1e-15);
}
