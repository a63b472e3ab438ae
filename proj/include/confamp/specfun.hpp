#pragma once

// Special functions: exact Gamma/digamma at (half-)integers, the asymptotic
// Bessel coefficients (nu, l), and numeric modified Bessel functions K_nu.

#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "confamp/errors.hpp"
#include "confamp/exact.hpp"
#include "confamp/quadrature.hpp"

namespace confamp {

// Gamma(z) for z a positive integer or half-integer.
inline ExactScalar gamma_exact(HalfInt z) {
  if (z.twice() <= 0) {
    throw validation_error("gamma_exact needs a positive (half-)integer, got " + z.str());
  }
  if (z.is_integer()) {
    return ExactScalar(Rational(factorial(z.as_int() - 1)));
  }
  // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
  const int n = (z.twice() - 1) / 2;
  const Rational q(factorial(2 * n), Integer(factorial(n)) * boost::multiprecision::pow(Integer(4), n));
  return ExactScalar::monomial(q, HalfInt::from_twice(1));
}

// Gamma at any (half-)integer that is not a pole, via Gamma(z) = Gamma(z+1)/z.
inline ExactScalar gamma_exact_extended(HalfInt z) {
  if (z.is_integer() && z.as_int() <= 0) {
    throw validation_error("Gamma has a pole at " + z.str());
  }
  Rational divisor = 1;
  while (z.twice() <= 0) {
    divisor *= z.to_rational();
    z = z + 1;
  }
  return gamma_exact(z).scaled(Rational(1) / divisor);
}

// 1/Gamma(z), zero at the poles.
inline ExactScalar reciprocal_gamma_exact(HalfInt z) {
  if (z.is_integer() && z.as_int() <= 0) {
    return {};
  }
  return gamma_exact_extended(z).inverse();
}

// psi(z) as a polynomial in gamma and log 2 over Q.
inline SymbolicCoeff digamma_exact(HalfInt z) {
  if (z.twice() <= 0) {
    throw validation_error("digamma_exact needs a positive (half-)integer, got " + z.str());
  }
  Rational harmonic = 0;
  if (z.is_integer()) {
    for (int k = 1; k < z.as_int(); ++k) {
      harmonic += Rational(1, k);
    }
    return SymbolicCoeff(harmonic) - SymbolicCoeff::euler_gamma();
  }
  const int n = (z.twice() - 1) / 2;
  for (int k = 1; k <= n; ++k) {
    harmonic += Rational(2, 2 * k - 1);
  }
  return SymbolicCoeff(harmonic) - SymbolicCoeff::euler_gamma() - SymbolicCoeff::log2().scaled(ExactScalar(2));
}

// (nu, l) = Gamma(nu + l + 1/2) / (l! Gamma(nu - l + 1/2)), written as the
// finite product of the 2l consecutive factors nu - l + 1/2, ..., nu + l - 1/2.
// A Gamma pole in the denominator shows up as a zero factor.
inline Rational asym_coeff(HalfInt nu, int ell) {
  if (ell < 0) {
    throw validation_error("asym_coeff needs l >= 0");
  }
  Rational num = 1;
  const Rational start = nu.to_rational() - ell + Rational(1, 2);
  for (int j = 0; j < 2 * ell; ++j) {
    num *= start + j;
  }
  return num / Rational(factorial(ell));
}

// ---------------------------------------------------------------------------
// Numeric K_nu.

struct BesselEvalConfig {
  int series_terms = 400;   // cap on convergent-series terms
  int asymptotic_terms = 60; // cap on asymptotic terms (optimal truncation stops earlier)
  double crossover_z = 0;   // 0 selects max(10, 2 nu^2)
  HalfLineQuadrature quadrature{};

  void validate() const {
    if (series_terms < 1 || asymptotic_terms < 1) {
      throw validation_error("Bessel configuration needs positive term counts");
    }
    if (crossover_z < 0) {
      throw validation_error("Bessel crossover must be positive");
    }
  }

  double crossover_for(double nu) const { return crossover_z > 0 ? crossover_z : std::max(10.0, 2 * nu * nu); }
};

namespace detail {

using quad = boost::multiprecision::cpp_bin_float_quad;

inline void check_bessel_args(double nu, double z) {
  if (!(z > 0) || !std::isfinite(z)) {
    throw validation_error("K_nu needs z > 0");
  }
  if (!std::isfinite(nu)) {
    throw validation_error("K_nu needs a finite order");
  }
}

// I_nu(z) by its power series, for non-integer nu.
inline quad bessel_i_series(const quad &nu, const quad &z, int max_terms) {
  const quad q = z * z / 4;
  quad term = boost::multiprecision::pow(z / 2, nu) / boost::math::tgamma(nu + 1);
  quad sum = 0;
  for (int k = 0; k < max_terms; ++k) {
    sum += term;
    if (boost::multiprecision::abs(term) < boost::multiprecision::abs(sum) * quad(1e-40)) {
      return sum;
    }
    term *= q / ((k + 1) * (nu + k + 1));
  }
  throw non_convergence("Bessel I series", std::abs(static_cast<double>(term / sum)));
}

} // namespace detail

// K_nu(z) from the convergent expansion: the Watson finite-sum-plus-logarithm
// form for integer nu, (pi/2)(I_{-nu} - I_nu)/sin(nu pi) otherwise. Evaluated in
// 113-bit floating point so the cancellation for large z stays harmless.
inline double bessel_k_series(double nu, double z, const BesselEvalConfig &cfg = {}) {
  using detail::quad;
  detail::check_bessel_args(nu, z);
  cfg.validate();
  nu = std::abs(nu);
  const quad zq = z;
  const quad half = zq / 2;
  const double rounded = std::round(nu);
  if (rounded == nu) {
    const int n = static_cast<int>(rounded);
    quad finite = 0;
    if (n > 0) {
      // (1/2) sum_{k<n} (-1)^k (n-k-1)!/k! (z/2)^{2k-n}
      quad fact_ratio = boost::math::factorial<quad>(n - 1); // (n-1)!/0!
      quad power = boost::multiprecision::pow(half, -n);
      const quad q = half * half;
      for (int k = 0; k < n; ++k) {
        finite += (k % 2 == 0 ? 1 : -1) * fact_ratio * power;
        if (k + 1 < n) {
          fact_ratio /= (n - k - 1);
          fact_ratio /= (k + 1);
          power *= q;
        }
      }
      finite /= 2;
    }
    // (-1)^(n+1) sum_k (z/2)^{n+2k}/(k!(n+k)!) [log(z/2) - (psi(k+1)+psi(n+k+1))/2]
    const quad egamma = boost::math::constants::euler<quad>();
    quad psi_a = -egamma; // psi(k+1)
    quad psi_b = -egamma; // psi(n+k+1)
    for (int j = 1; j <= n; ++j) {
      psi_b += quad(1) / j;
    }
    const quad log_half = boost::multiprecision::log(half);
    quad term = boost::multiprecision::pow(half, n) / boost::math::factorial<quad>(n);
    const quad q = half * half;
    quad sum = 0;
    bool done = false;
    for (int k = 0; k < cfg.series_terms; ++k) {
      const quad contrib = term * (log_half - (psi_a + psi_b) / 2);
      sum += contrib;
      if (k > 2 && boost::multiprecision::abs(contrib) < quad(1e-40) * (boost::multiprecision::abs(sum) + boost::multiprecision::abs(finite))) {
        done = true;
        break;
      }
      term *= q / ((k + 1) * quad(n + k + 1));
      psi_a += quad(1) / (k + 1);
      psi_b += quad(1) / (n + k + 1);
    }
    if (!done) {
      throw non_convergence("Bessel K series", std::abs(static_cast<double>(term / sum)));
    }
    const quad value = finite + (n % 2 == 0 ? -1 : 1) * sum;
    return static_cast<double>(value);
  }
  const quad nq = nu;
  const quad pi = boost::math::constants::pi<quad>();
  const quad diff = detail::bessel_i_series(-nq, zq, cfg.series_terms) - detail::bessel_i_series(nq, zq, cfg.series_terms);
  return static_cast<double>(pi / 2 * diff / boost::multiprecision::sin(nq * pi));
}

// Asymptotic expansion sqrt(pi/2z) e^{-z} sum_l (nu,l)/(2z)^l, truncated at the
// smallest term (or exactly, when the series terminates for half-integer nu).
inline double bessel_k_asymptotic(double nu, double z, const BesselEvalConfig &cfg = {}) {
  detail::check_bessel_args(nu, z);
  cfg.validate();
  const long double four_nu2 = 4.0L * nu * nu;
  long double coeff = 1; // (nu, l)
  long double term = 1;
  long double sum = 0;
  long double previous = std::numeric_limits<long double>::infinity();
  for (int ell = 0; ell < cfg.asymptotic_terms; ++ell) {
    if (std::abs(term) > std::abs(previous)) {
      break;
    }
    sum += term;
    if (term == 0) {
      break;
    }
    previous = term;
    const long double odd = 2.0L * ell + 1;
    coeff *= (four_nu2 - odd * odd) / (4.0L * (ell + 1));
    term = coeff / std::pow(2.0L * z, ell + 1);
  }
  const long double pre = std::sqrt(std::numbers::pi_v<long double> / (2.0L * z)) * std::exp(-static_cast<long double>(z));
  return static_cast<double>(pre * sum);
}

// K_{n+1/2}(z) = sqrt(pi/2z) e^{-z} sum_{k<=n} (n+k)!/(k!(n-k)!(2z)^k).
inline double bessel_k_half_integer(HalfInt nu, double z) {
  detail::check_bessel_args(nu.to_double(), z);
  if (nu.is_integer()) {
    throw validation_error("bessel_k_half_integer needs a half-integer order");
  }
  const int n = (std::abs(nu.twice()) - 1) / 2;
  long double sum = 0;
  long double c = 1; // (n+k)!/(k!(n-k)!)
  for (int k = 0; k <= n; ++k) {
    sum += c / std::pow(2.0L * z, k);
    c *= static_cast<long double>(n + k + 1) * (n - k) / (k + 1);
  }
  return static_cast<double>(std::sqrt(std::numbers::pi_v<long double> / (2.0L * z)) *
                             std::exp(-static_cast<long double>(z)) * sum);
}

inline double bessel_k(double nu, double z, const BesselEvalConfig &cfg = {}) {
  detail::check_bessel_args(nu, z);
  nu = std::abs(nu);
  const double twice = 2 * nu;
  if (twice == std::round(twice) && static_cast<long>(twice) % 2 == 1 && nu < 1e4) {
    return bessel_k_half_integer(HalfInt::from_twice(static_cast<int>(twice)), z);
  }
  if (z >= cfg.crossover_for(nu)) {
    return bessel_k_asymptotic(nu, z, cfg);
  }
  return bessel_k_series(nu, z, cfg);
}

// Independent oracle: K_nu(z) = (1/2)(z/2)^nu int_0^inf t^{-nu-1} exp(-t - z^2/(4t)) dt.
inline QuadratureResult bessel_k_integral(double nu, double z, const HalfLineQuadrature &q = {}) {
  detail::check_bessel_args(nu, z);
  const long double z2 = static_cast<long double>(z) * z / 4;
  auto integrand = [&](long double t) { return std::pow(t, -nu - 1) * std::exp(-t - z2 / t); };
  QuadratureResult r = integrate_half_line(integrand, q);
  const double pre = 0.5 * std::pow(z / 2, nu);
  return {r.value * pre, r.error_estimate * pre};
}

} // namespace confamp
