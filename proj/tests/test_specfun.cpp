#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <gtest/gtest.h>

#include "confamp/specfun.hpp"

using namespace confamp;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const double kSqrtPi = std::sqrt(std::numbers::pi);

} // namespace

TEST(GammaExact, Examples) {
  EXPECT_EQ(gamma_exact(4), ExactScalar(6));
  EXPECT_EQ(gamma_exact(HalfInt::from_twice(1)), ExactScalar::pi_power(HalfInt::from_twice(1)));
  EXPECT_EQ(gamma_exact(HalfInt::from_twice(5)), ExactScalar::monomial(Rational(3, 4), HalfInt::from_twice(1)));
}

TEST(GammaExact, RejectsNonPositive) {
  EXPECT_THROW(gamma_exact(0), validation_error);
  EXPECT_THROW(gamma_exact(HalfInt::from_twice(-1)), validation_error);
}

TEST(GammaExact, FunctionalEquationAndNumericValue) {
  for (int twice = 1; twice <= 40; ++twice) {
    const HalfInt z = HalfInt::from_twice(twice);
    EXPECT_EQ(gamma_exact(z + 1), gamma_exact(z).scaled(z.to_rational())) << z;
    EXPECT_LT(rel(gamma_exact(z).to_double(), std::tgamma(z.to_double())), 1e-14) << z;
  }
}

TEST(GammaExact, ExtendedAndReciprocal) {
  // Gamma(-1/2) = -2 sqrt(pi)
  EXPECT_EQ(gamma_exact_extended(HalfInt::from_twice(-1)), ExactScalar::monomial(-2, HalfInt::from_twice(1)));
  EXPECT_TRUE(reciprocal_gamma_exact(0).is_zero());
  EXPECT_TRUE(reciprocal_gamma_exact(-3).is_zero());
  EXPECT_LT(rel(reciprocal_gamma_exact(HalfInt::from_twice(-5)).to_double(), 1 / std::tgamma(-2.5)), 1e-14);
}

TEST(DigammaExact, Examples) {
  EXPECT_EQ(digamma_exact(1), -SymbolicCoeff::euler_gamma());
  EXPECT_EQ(digamma_exact(3), SymbolicCoeff(Rational(3, 2)) - SymbolicCoeff::euler_gamma());
  EXPECT_EQ(digamma_exact(HalfInt::from_twice(1)),
            -SymbolicCoeff::euler_gamma() - SymbolicCoeff::log2().scaled(ExactScalar(2)));
}

TEST(DigammaExact, RecurrenceAndNumericValue) {
  for (int twice = 1; twice <= 40; ++twice) {
    const HalfInt z = HalfInt::from_twice(twice);
    EXPECT_EQ(digamma_exact(z + 1), digamma_exact(z) + SymbolicCoeff(Rational(1) / z.to_rational())) << z;
    const double numeric = digamma_exact(z).evaluate({});
    EXPECT_NEAR(numeric, boost::math::digamma(z.to_double()), 1e-13) << z;
  }
}

TEST(AsymCoeff, Examples) {
  EXPECT_EQ(asym_coeff(1, 0), Rational(1));
  EXPECT_EQ(asym_coeff(HalfInt::from_twice(7), 0), Rational(1));
  EXPECT_EQ(asym_coeff(1, 1), Rational(3, 4));
  EXPECT_EQ(asym_coeff(HalfInt::from_twice(1), 1), Rational(0));
}

TEST(AsymCoeff, MatchesGammaRatio) {
  // Gamma(nu+l+1/2) / (l! Gamma(nu-l+1/2)) evaluated with exact Gamma values
  // wherever the denominator has no pole.
  for (int twice_nu = 0; twice_nu <= 8; ++twice_nu) {
    const HalfInt nu = HalfInt::from_twice(twice_nu);
    for (int ell = 0; ell <= 6; ++ell) {
      const HalfInt top = nu + ell + HalfInt::from_twice(1);
      const HalfInt bottom = nu - ell + HalfInt::from_twice(1);
      const ExactScalar ratio = gamma_exact_extended(top) * reciprocal_gamma_exact(bottom);
      EXPECT_EQ(ExactScalar(asym_coeff(nu, ell)), ratio.scaled(Rational(1) / Rational(factorial(ell))))
          << "nu=" << nu << " l=" << ell;
    }
  }
}

TEST(BesselK, HalfOrderClosedForm) {
  EXPECT_LT(rel(bessel_k(0.5, 1.0), std::sqrt(std::numbers::pi / 2) * std::exp(-1.0)), 1e-15);
  for (double z = 0.1; z <= 20.0; z += 0.37) {
    const double closed = std::sqrt(std::numbers::pi / (2 * z)) * std::exp(-z);
    EXPECT_LT(rel(bessel_k(0.5, z), closed), 1e-12) << z;
    EXPECT_LT(rel(bessel_k_series(0.5, z), closed), 1e-12) << z;
  }
}

TEST(BesselK, RejectsNonPositiveArgument) {
  EXPECT_THROW(bessel_k(1, 0.0), validation_error);
  EXPECT_THROW(bessel_k(1, -2.0), validation_error);
}

TEST(BesselK, QuadratureOracle) {
  const auto oracle = bessel_k_integral(1, 2);
  EXPECT_LT(rel(bessel_k(1, 2), oracle.value), 1e-10);
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 2.3}) {
    for (double z : {0.05, 0.7, 3.0, 9.0, 25.0}) {
      EXPECT_LT(rel(bessel_k(nu, z), bessel_k_integral(nu, z).value), 1e-10) << nu << " " << z;
    }
  }
}

TEST(BesselK, AgreesWithReferenceLibrary) {
  for (double nu : {0.0, 1.0, 2.0, 3.0, 4.0, 0.25, 1.75}) {
    for (double z = 0.01; z < 60; z *= 1.4) {
      const double reference = boost::math::cyl_bessel_k(nu, z);
      if (z <= 20) {
        EXPECT_LT(rel(bessel_k_series(nu, z), reference), 1e-12) << nu << " " << z;
      }
      // Just past the crossover the asymptotic branch is limited by its
      // smallest term, about e^{-2z}.
      EXPECT_LT(rel(bessel_k(nu, z), reference), 1e-10) << nu << " " << z;
    }
  }
}

TEST(BesselK, BranchesAgreeAtCrossover) {
  const BesselEvalConfig cfg;
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    const double z = cfg.crossover_for(nu);
    const double series = bessel_k_series(nu, z, cfg);
    const double asym = bessel_k_asymptotic(nu, z, cfg);
    EXPECT_LT(rel(asym, series), 1e-8) << nu;
  }
}

TEST(BesselK, AsymptoticBranchIsTruncatedSum) {
  // Large z: the configured branch is exactly the partial sum of the expansion.
  const double nu = 2.0;
  const double z = 40.0;
  long double sum = 0;
  long double c = 1;
  for (int ell = 0; ell < 12; ++ell) {
    sum += c / std::pow(2.0L * z, ell);
    c *= (4 * nu * nu - (2 * ell + 1.0L) * (2 * ell + 1.0L)) / (4.0L * (ell + 1));
  }
  const double partial = static_cast<double>(std::sqrt(std::numbers::pi / (2 * z)) * std::exp(-z) * sum);
  EXPECT_LT(rel(bessel_k(nu, z), partial), 1e-14);
}
