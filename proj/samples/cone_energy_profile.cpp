// Energy density of a conformally coupled field around a cone, t -> 0.

#include <cstdio>
#include <numbers>

#include "vacstress/vacstress.hpp"

int main() {
  using namespace vacstress;
  constexpr double pi = std::numbers::pi;
  const Coupling conformal = Coupling::conformal();
  std::printf("%8s %16s %16s %16s\n", "r", "T00(pi)", "T00(4pi)", "T00(dowker)");
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    const EvaluationPoint x{r, 0, 0};
    const double a = stress_t0(Cone{pi}, x, conformal).value.t00;
    const double b = stress_t0(Cone{4 * pi}, x, conformal).value.t00;
    const double d = stress_t0(Dowker{}, x, conformal).value.t00;
    std::printf("%8.3f %16.8e %16.8e %16.8e\n", r, a, b, d);
  }
}
