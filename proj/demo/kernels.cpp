// Massive scalar propagator in four dimensions: direct Bessel form against its
// small- and large-distance expansions.

#include <cstdio>

#include "confamp/amplitude.hpp"

using namespace confamp;

int main() {
  const double m = 1.0;
  std::printf("%6s %22s %22s %22s\n", "r", "direct", "taylor(20)", "asymptotic(6)");
  for (double r : {0.05, 0.1, 0.5, 2.0, 10.0, 20.0}) {
    const double direct = gm_real(Kinematics::radial(4, r, m));
    std::printf("%6.2f %22.15e %22.15e %22.15e\n", r, direct, taylor_sum(HalfInt(1), m, r, 20),
                asymptotic_sum(HalfInt(1), m, r, 6));
  }
  // Quadrature route for the same kernel.
  const auto q = gm_integral(Kinematics::radial(4, 1.0, m));
  std::printf("integral at r=1: %.15e\n", q.value);
}
