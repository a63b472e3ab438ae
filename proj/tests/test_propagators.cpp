#include <cmath>

#include <gtest/gtest.h>

#include "confamp/propagators.hpp"

using namespace confamp;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Kinematics at(int D, std::vector<double> x, double m) { return Kinematics{D, std::move(x), m}; }

double scalar_at(int D, double mass, const std::vector<double> &y) { return gm_real(at(D, y, mass)); }

// Central differences of the scalar kernel, used as oracles for the derivative
// formulas in the Dirac and vector propagators.
double fd_first(int D, double mass, std::vector<double> x, int mu, double h) {
  x[mu] += h;
  const double plus = scalar_at(D, mass, x);
  x[mu] -= 2 * h;
  const double minus = scalar_at(D, mass, x);
  return (plus - minus) / (2 * h);
}

double fd_second(int D, double mass, std::vector<double> x, int mu, int nu, double h) {
  if (mu == nu) {
    const double c = scalar_at(D, mass, x);
    x[mu] += h;
    const double plus = scalar_at(D, mass, x);
    x[mu] -= 2 * h;
    const double minus = scalar_at(D, mass, x);
    return (plus - 2 * c + minus) / (h * h);
  }
  auto shifted = [&](double a, double b) {
    std::vector<double> y = x;
    y[mu] += a;
    y[nu] += b;
    return scalar_at(D, mass, y);
  };
  return (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
}

} // namespace

TEST(G0Real, Examples) {
  EXPECT_DOUBLE_EQ(g0_real(Kinematics::radial(4, 1)), 1.0);
  EXPECT_DOUBLE_EQ(g0_real(Kinematics::radial(4, 2)), 0.25);
  EXPECT_DOUBLE_EQ(g0_real(Kinematics::radial(6, 2)), 1.0 / 16);
  EXPECT_THROW(g0_real(Kinematics::radial(4, 0)), diagonal_singularity);
  EXPECT_THROW(g0_real(Kinematics::radial(2, 1)), validation_error);
}

TEST(GmReal, ThreeDimensionalClosedForm) {
  for (double m : {0.5, 1.0, 2.0}) {
    for (double r = 0.05; r < 30; r *= 1.3) {
      const double closed = std::exp(-m * r) / (4 * std::numbers::pi * r);
      EXPECT_LT(rel(gm_real(Kinematics::radial(3, r, m)), closed), 1e-12) << m << " " << r;
    }
  }
}

TEST(GmReal, DiagonalAndMassErrors) {
  EXPECT_THROW(gm_real(Kinematics::radial(3, 0, 1)), diagonal_singularity);
  EXPECT_THROW(gm_real(Kinematics::radial(4, 0, 1)), diagonal_singularity);
  EXPECT_THROW(gm_real(Kinematics::radial(4, 1, 0)), validation_error);
}

TEST(GmReal, ScalingLaw) {
  for (int D : {3, 4, 6}) {
    for (double m : {0.5, 1.0, 2.0}) {
      for (double r : {0.25, 1.0, 4.0}) {
        const double lhs = gm_real(Kinematics::radial(D, r, m));
        const double rhs = std::pow(m, D - 2) * gm_real(Kinematics::radial(D, m * r, 1.0));
        EXPECT_LT(rel(lhs, rhs), 1e-12) << D << " " << m << " " << r;
      }
    }
  }
}

TEST(GmIntegral, MatchesBesselForm) {
  const double closed = std::exp(-1.0) / (4 * std::numbers::pi);
  EXPECT_LT(rel(gm_integral(Kinematics::radial(3, 1, 1)).value, closed), 1e-12);
  EXPECT_LT(rel(gm_real(Kinematics::radial(4, 1, 1)), gm_integral(Kinematics::radial(4, 1, 1)).value), 1e-8);
  for (int D : {3, 4, 6}) {
    for (double m : {0.5, 1.0, 2.0}) {
      for (double r : {0.25, 1.0, 4.0}) {
        const auto k = Kinematics::radial(D, r, m);
        EXPECT_LT(rel(gm_real(k), gm_integral(k).value), 1e-8) << D << " " << m << " " << r;
      }
    }
  }
}

TEST(GmIntegral, DecaysMonotonicallyAndRespectsBound) {
  for (int D : {3, 4, 5}) {
    double previous = INFINITY;
    for (double r = 0.2; r < 15; r += 0.4) {
      const auto k = Kinematics::radial(D, r, 0.8);
      const double v = gm_integral(k).value;
      EXPECT_LT(v, previous);
      EXPECT_LE(v * v, gm_square_bound(k));
      previous = v;
    }
  }
}

TEST(GmIntegral, ReportsNonConvergence) {
  HalfLineQuadrature q;
  q.max_halvings = 0;
  EXPECT_THROW(gm_integral(Kinematics::radial(4, 1, 1), q), non_convergence);
}

TEST(GmReal, SmallMassLimit) {
  for (int lambda = 1; lambda <= 3; ++lambda) {
    const int D = 2 * lambda + 2;
    const double r = 1.3;
    const double normalized = std::pow(2 * std::numbers::pi, lambda + 1) * gm_real(Kinematics::radial(D, r, 1e-4)) *
                              std::pow(r, 2 * lambda);
    const double leading = std::pow(2.0, lambda - 1) * std::tgamma(lambda);
    EXPECT_NEAR(normalized, leading, 1e-6 * leading) << lambda;
  }
}

TEST(GmReal, StrictlyDecreasingOnRays) {
  for (int D : {3, 4, 6, 7}) {
    double previous = INFINITY;
    for (double r = 0.01; r < 40; r *= 1.15) {
      const double v = gm_real(at(D, [&] {
        std::vector<double> x(D, r / std::sqrt(static_cast<double>(D)));
        return x;
      }(), 1.5));
      EXPECT_LT(v, previous);
      previous = v;
    }
  }
}

TEST(DiagContinuation, OddDimensionsOnly) {
  // D = 3: (4 pi)^{-3/2} m Gamma(-1/2) = -m / (4 pi)
  EXPECT_LT(rel(diag_continuation(3, 2.0), -2.0 / (4 * std::numbers::pi)), 1e-14);
  EXPECT_THROW(diag_continuation(4, 1.0), validation_error);
  // The continuation equals the finite part of the kernel as |x| -> 0 in D = 3:
  // e^{-mr}/(4 pi r) = 1/(4 pi r) - m/(4 pi) + O(r).
  const double r = 1e-7;
  const double finite_part = gm_real(Kinematics::radial(3, r, 2.0)) - 1 / (4 * std::numbers::pi * r);
  EXPECT_NEAR(finite_part, diag_continuation(3, 2.0), 1e-6);
}

TEST(Complex, MasslessPhaseAndMagnitude) {
  const PhasedValue v3 = g0_complex(Kinematics::radial(3, 2));
  EXPECT_EQ(v3.sign, -1);
  EXPECT_EQ(v3.i_power, 1); // i^{-3} = i
  EXPECT_LT(rel(v3.magnitude, 1.0 / (std::pow(2 * std::numbers::pi, 3) * std::pow(2.0, 4))), 1e-15);
  EXPECT_DOUBLE_EQ(v3.real_part(), 0.0);
  const PhasedValue v4 = g0_complex(Kinematics::radial(4, 1));
  EXPECT_EQ(v4.i_power, 0);
  EXPECT_LT(rel(v4.real_part(), -2.0 / std::pow(2 * std::numbers::pi, 4)), 1e-15);
  EXPECT_THROW(g0_complex(Kinematics::radial(3, 0)), diagonal_singularity);
}

TEST(Complex, MassiveMatchesRealKernelInTwiceTheDimension) {
  for (int D : {2, 3, 4}) {
    for (double r : {0.3, 1.0, 5.0}) {
      const double c = gm_complex(Kinematics::radial(D, r, 1.2));
      const double real_2d = gm_real(Kinematics::radial(2 * D, r, 1.2));
      EXPECT_LT(rel(c, real_2d), 1e-13) << D << " " << r;
    }
  }
  const double m = 0.7;
  const double r = 1.9;
  const double direct = std::pow(2 * std::numbers::pi, -2) * m / r * bessel_k(1, m * r);
  EXPECT_LT(rel(gm_complex(Kinematics::radial(2, r, m)), direct), 1e-15);
}

TEST(Helmholtz, ResidualSmallAndSecondOrder) {
  const auto k = Kinematics::radial(3, 1, 1);
  const double g = gm_real(k);
  EXPECT_LT(std::abs(helmholtz_residual(k, 1e-3)), 1e-5 * g);
  // The stencil error is about c_D (h/|x|)^2 |G| with c_D growing with the
  // dimension (c_3 ~ 9, c_6 ~ 120 at |x| = 1), hence the looser envelope here.
  for (int D : {3, 4, 6}) {
    const auto kd = at(D, std::vector<double>(D, 1 / std::sqrt(static_cast<double>(D))), 1.0);
    const double gd = gm_real(kd);
    const double coarse = helmholtz_residual(kd, 2e-2);
    const double fine = helmholtz_residual(kd, 1e-2);
    EXPECT_LT(std::abs(helmholtz_residual(kd, 1e-3)), 2e-4 * gd) << D;
    EXPECT_NEAR(coarse / fine, 4.0, 0.2) << D;
  }
  EXPECT_THROW(helmholtz_residual(k, 0.5), validation_error);
}

TEST(Helmholtz, MasslessKernelIsHarmonic) {
  const auto k3 = Kinematics::radial(3, 1);
  EXPECT_LT(std::abs(harmonic_residual(k3, 1e-3)), 1e-5 * g0_real(k3));
  for (int D : {3, 4, 5}) {
    const auto k = at(D, std::vector<double>(D, 0.6), 0);
    const double g = g0_real(k);
    EXPECT_LT(std::abs(harmonic_residual(k, 1e-3)), 2e-4 * g) << D;
    EXPECT_NEAR(harmonic_residual(k, 2e-2) / harmonic_residual(k, 1e-2), 4.0, 0.2) << D;
  }
}

TEST(Dirac, ScalarPartIsMassTimesKernel) {
  for (int D : {4, 6}) {
    for (double m : {0.5, 2.0}) {
      const auto k = at(D, std::vector<double>(D, 0.4), m);
      const DiracCoeffs s = dirac_propagator(k);
      EXPECT_LT(rel(s.b, m * gm_real(at(D, k.x, std::sqrt(m)))), 1e-13);
    }
  }
}

TEST(Dirac, VectorPartMatchesFiniteDifference) {
  const double h = 1e-3;
  for (int D : {4, 6}) {
    std::vector<double> x(D);
    for (int i = 0; i < D; ++i) {
      x[i] = 0.3 + 0.17 * i - (i % 2 ? 0.5 : 0.0);
    }
    const double m = 1.7;
    const DiracCoeffs s = dirac_propagator(at(D, x, m));
    for (int mu = 0; mu < D; ++mu) {
      // -i dslash G contributes i gamma^mu (-d_mu G), i.e. a x_mu = -d_mu G.
      const double oracle = -fd_first(D, std::sqrt(m), x, mu, h);
      EXPECT_LT(std::abs(s.a * x[mu] - oracle), 1e-5 * std::abs(s.a) * std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)))
          << D << " " << mu;
    }
  }
}

TEST(Dirac, DecaysAtInfinityAndRejectsDiagonal) {
  const DiracCoeffs far = dirac_propagator(Kinematics::radial(4, 200, 1));
  EXPECT_LT(std::abs(far.a), 1e-60);
  EXPECT_LT(std::abs(far.b), 1e-60);
  EXPECT_THROW(dirac_propagator(Kinematics::radial(4, 0, 1)), diagonal_singularity);
  EXPECT_THROW(dirac_propagator(Kinematics::radial(5, 1, 1)), validation_error);
}

TEST(Boson, FeynmanGaugeReducesToScalar) {
  const auto k = at(4, {0.3, -0.2, 0.7, 0.1}, 1.4);
  const double g = gm_real(at(4, k.x, std::sqrt(1.4)));
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      EXPECT_NEAR(boson_propagator(k, 1.0, mu, nu), mu == nu ? g : 0.0, 1e-15);
    }
  }
}

TEST(Boson, OffDiagonalVanishesOnCoordinatePlane) {
  const auto k = at(4, {0.0, 0.8, 0.3, 0.2}, 1.0);
  EXPECT_NEAR(boson_propagator(k, 2.0, 0, 1), 0.0, 1e-16);
  EXPECT_NEAR(boson_propagator(k, 2.0, 0, 3), 0.0, 1e-16);
}

TEST(Boson, MatchesFiniteDifferenceOracle) {
  const double h = 1e-3;
  struct Case {
    std::vector<double> x;
    double m;
    double alpha;
  };
  const std::vector<Case> cases = {{{1, 0, 0, 0}, 1.0, 2.0}, {{0.4, -0.3, 0.8, 0.2}, 1.5, 0.5}, {{0.9, 0.6, 0.1, -0.4}, 0.7, 3.0}};
  for (const auto &c : cases) {
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        const double value = boson_propagator(at(4, c.x, c.m), c.alpha, mu, nu);
        const double scalar = mu == nu ? scalar_at(4, std::sqrt(c.m), c.x) : 0.0;
        const double oracle =
            scalar + (fd_second(4, std::sqrt(c.m / c.alpha), c.x, mu, nu, h) - fd_second(4, std::sqrt(c.m), c.x, mu, nu, h)) / (c.m * c.m);
        const double scale = std::max(std::abs(oracle), scalar_at(4, std::sqrt(c.m), c.x));
        EXPECT_LT(std::abs(value - oracle), 1e-5 * scale) << mu << nu;
      }
    }
  }
  EXPECT_THROW(boson_propagator(Kinematics::radial(4, 1, 1), 0.0, 0, 0), validation_error);
  EXPECT_THROW(boson_propagator(Kinematics::radial(4, 0, 1), 1.0, 0, 0), diagonal_singularity);
}
