#pragma once

// Euclidean propagators: massless and massive scalar kernels (real and complex
// case), their integral representation, finite-difference PDE residuals, and the
// Dirac and massive vector propagators built from the scalar kernel.
//
// Mass conventions follow the sources of each formula. The scalar kernels use
// the momentum denominator |k|^2 + m^2. The Dirac and vector propagators use
// |k|^2 + m, so they are built from the scalar kernel at mass sqrt(m).

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "confamp/errors.hpp"
#include "confamp/quadrature.hpp"
#include "confamp/specfun.hpp"

namespace confamp {

struct Kinematics {
  int D = 4;
  std::vector<double> x; // separation vector x_s - x_t, length D
  double m = 0;

  static Kinematics radial(int D, double r, double m = 0) {
    Kinematics k{D, std::vector<double>(D, 0.0), m};
    k.x[0] = r;
    return k;
  }

  double lambda() const { return (D - 2) / 2.0; }
  double norm() const { return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)); }

  void validate(int min_dim = 3) const {
    if (D < min_dim) {
      throw validation_error("dimension must be >= " + std::to_string(min_dim) + ", got " + std::to_string(D));
    }
    if (static_cast<int>(x.size()) != D) {
      throw validation_error("separation vector has " + std::to_string(x.size()) + " components, expected " +
                             std::to_string(D));
    }
    if (!(m >= 0) || !std::isfinite(m)) {
      throw validation_error("mass must be finite and non-negative");
    }
    for (double c : x) {
      if (!std::isfinite(c)) {
        throw validation_error("separation vector must be finite");
      }
    }
  }
};

namespace detail {

inline double checked_norm(const Kinematics &k, int min_dim = 3) {
  k.validate(min_dim);
  const double r = k.norm();
  if (r == 0) {
    throw diagonal_singularity();
  }
  return r;
}

inline void require_mass(const Kinematics &k) {
  if (!(k.m > 0)) {
    throw validation_error("massive propagator needs m > 0");
  }
}

// (2 pi)^{-(lambda+1)} mu^{2 lambda} z^{-lambda} K_lambda(z), z = mu r: the real
// massive scalar kernel as a function of r for scalar mass mu.
inline double scalar_kernel(int D, double mu, double r, const BesselEvalConfig &cfg) {
  const double lambda = (D - 2) / 2.0;
  const double z = mu * r;
  return std::pow(2 * std::numbers::pi, -(lambda + 1)) * std::pow(mu, 2 * lambda) * std::pow(z, -lambda) *
         bessel_k(lambda, z, cfg);
}

// First and second radial derivatives of scalar_kernel, from
// d/dz (z^{-nu} K_nu) = -z^{-nu} K_{nu+1}.
inline std::pair<double, double> scalar_kernel_derivatives(int D, double mu, double r, const BesselEvalConfig &cfg) {
  const double lambda = (D - 2) / 2.0;
  const double z = mu * r;
  const double c = std::pow(2 * std::numbers::pi, -(lambda + 1));
  const double k1 = bessel_k(lambda + 1, z, cfg);
  const double k2 = bessel_k(lambda + 2, z, cfg);
  const double zl = std::pow(z, -lambda);
  const double first = -c * std::pow(mu, 2 * lambda + 1) * zl * k1;
  const double second = c * std::pow(mu, 2 * lambda + 2) * zl * (k2 - k1 / z);
  return {first, second};
}

// Hessian entry d_mu d_nu f(|x|) for a radial function with derivatives f', f''.
inline double radial_hessian(const std::vector<double> &x, double r, double f1, double f2, int mu, int nu) {
  const double xx = x[mu] * x[nu] / (r * r);
  return f2 * xx + f1 * ((mu == nu ? 1.0 : 0.0) / r - xx / r);
}

} // namespace detail

// |x|^{2-D}
inline double g0_real(const Kinematics &k) {
  const double r = detail::checked_norm(k);
  return std::pow(r, 2 - k.D);
}

// (2 pi)^{-D/2} m^{D-2} (m|x|)^{-(D-2)/2} K_{(D-2)/2}(m|x|)
inline double gm_real(const Kinematics &k, const BesselEvalConfig &cfg = {}) {
  const double r = detail::checked_norm(k);
  detail::require_mass(k);
  return detail::scalar_kernel(k.D, k.m, r, cfg);
}

// (4 pi)^{-D/2} int_0^inf t^{-D/2} exp(-t m^2 - |x|^2/(4t)) dt
inline QuadratureResult gm_integral(const Kinematics &k, const HalfLineQuadrature &q = {}) {
  const double r = detail::checked_norm(k);
  detail::require_mass(k);
  const long double m2 = static_cast<long double>(k.m) * k.m;
  const long double r2 = static_cast<long double>(r) * r / 4;
  const double half_d = k.D / 2.0;
  auto integrand = [&](long double t) { return std::pow(t, -half_d) * std::exp(-t * m2 - r2 / t); };
  const QuadratureResult raw = integrate_half_line(integrand, q);
  const double pre = std::pow(4 * std::numbers::pi, -half_d);
  return {raw.value * pre, raw.error_estimate * pre};
}

// Cauchy-Schwarz bound on the square of the massive kernel:
// (2^{D-1} / (4 pi)^D) ((D-2)! / (2 m^2)) |x|^{-2D+2}.
inline double gm_square_bound(const Kinematics &k) {
  const double r = detail::checked_norm(k);
  detail::require_mass(k);
  return std::pow(2.0, k.D - 1) / std::pow(4 * std::numbers::pi, k.D) * std::tgamma(k.D - 1.0) / (2 * k.m * k.m) *
         std::pow(r, -2.0 * k.D + 2);
}

// Analytic continuation of the kernel to x = 0 for odd D:
// (4 pi)^{-D/2} m^{D-2} Gamma(1 - D/2). Even D has a genuine divergence.
inline double diag_continuation(int D, double m) {
  if (D < 3 || D % 2 == 0) {
    throw validation_error("diagonal value exists only as a continuation for odd D >= 3");
  }
  if (!(m > 0)) {
    throw validation_error("diagonal continuation needs m > 0");
  }
  return std::pow(4 * std::numbers::pi, -D / 2.0) * std::pow(m, D - 2) * std::tgamma(1 - D / 2.0);
}

// Complex-case massless kernel -(D-2)! / (2 pi i)^D |x|^{-(2D-2)}: the real
// magnitude with the phase kept exact as sign * i^i_power.
struct PhasedValue {
  double magnitude = 0;
  int sign = 1;
  int i_power = 0; // 0..3

  double real_part() const {
    switch (i_power) {
    case 0: return sign * magnitude;
    case 2: return -sign * magnitude;
    default: return 0;
    }
  }
  double imag_part() const {
    switch (i_power) {
    case 1: return sign * magnitude;
    case 3: return -sign * magnitude;
    default: return 0;
    }
  }
};

inline PhasedValue g0_complex(const Kinematics &k) {
  const double r = detail::checked_norm(k, 2);
  PhasedValue v;
  v.magnitude = std::tgamma(k.D - 1.0) / std::pow(2 * std::numbers::pi, k.D) * std::pow(r, -(2.0 * k.D - 2));
  v.sign = -1;
  v.i_power = ((-k.D) % 4 + 4) % 4;
  return v;
}

// (2 pi)^{-D} m^{D-1} |x|^{-(D-1)} K_{D-1}(m|x|)
inline double gm_complex(const Kinematics &k, const BesselEvalConfig &cfg = {}) {
  const double r = detail::checked_norm(k, 2);
  detail::require_mass(k);
  return std::pow(2 * std::numbers::pi, -k.D) * std::pow(k.m, k.D - 1) * std::pow(r, -(k.D - 1.0)) *
         bessel_k(k.D - 1.0, k.m * r, cfg);
}

namespace detail {

template <class F> double fd_laplacian(F &&f, const std::vector<double> &x, double h) {
  const double centre = f(x);
  long double acc = 0;
  std::vector<double> y = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + h;
    const double plus = f(y);
    y[i] = x[i] - h;
    const double minus = f(y);
    y[i] = x[i];
    acc += (plus - 2 * centre + minus);
  }
  return static_cast<double>(acc / (static_cast<long double>(h) * h));
}

inline void check_step(double h, double r) {
  if (!(h > 0)) {
    throw validation_error("finite-difference step must be positive");
  }
  if (h > 0.1 * r) {
    throw validation_error("finite-difference step too large relative to |x|");
  }
}

} // namespace detail

// Finite-difference value of Delta G - m^2 G at x, where Delta is the sum of
// second partials. Away from the origin the massive kernel solves Delta G = m^2 G
// (its Fourier symbol is 1/(m^2 + |k|^2)), so the result measures discretisation
// error only.
inline double helmholtz_residual(const Kinematics &k, double h, const BesselEvalConfig &cfg = {}) {
  const double r = detail::checked_norm(k);
  detail::require_mass(k);
  detail::check_step(h, r);
  auto g = [&](const std::vector<double> &y) {
    const double ry = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
    return detail::scalar_kernel(k.D, k.m, ry, cfg);
  };
  return detail::fd_laplacian(g, k.x, h) - k.m * k.m * g(k.x);
}

// Finite-difference Laplacian of |x|^{2-D}, which is harmonic away from 0.
inline double harmonic_residual(const Kinematics &k, double h) {
  const double r = detail::checked_norm(k);
  detail::check_step(h, r);
  auto g = [&](const std::vector<double> &y) {
    return std::pow(std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0)), 2 - k.D);
  };
  return detail::fd_laplacian(g, k.x, h);
}

// S = a (i gamma^mu x_mu) + b, the propagator of -i dslash + m built from the
// scalar kernel at mass sqrt(m):
//   a = (2pi)^{-(l+1)} m^{l/2} |x|^{-(l+1)} [ (l/|x|) K_l + (sqrt m / 2)(K_{l-1} + K_{l+1}) ]
//   b = (2pi)^{-(l+1)} m^{(l+2)/2} |x|^{-l} K_l,   arguments sqrt(m)|x|.
struct DiracCoeffs {
  double a = 0;
  double b = 0;
};

inline DiracCoeffs dirac_propagator(const Kinematics &k, const BesselEvalConfig &cfg = {}) {
  const double r = detail::checked_norm(k);
  detail::require_mass(k);
  if (k.D % 2 != 0) {
    throw validation_error("Dirac propagator needs D = 2 lambda + 2 with integer lambda");
  }
  const int lambda = (k.D - 2) / 2;
  const double root_m = std::sqrt(k.m);
  const double z = root_m * r;
  const double c = std::pow(2 * std::numbers::pi, -(lambda + 1.0));
  const double kl = bessel_k(lambda, z, cfg);
  const double bracket = lambda / r * kl + root_m / 2 * (bessel_k(lambda - 1.0, z, cfg) + bessel_k(lambda + 1.0, z, cfg));
  DiracCoeffs out;
  out.a = c * std::pow(k.m, lambda / 2.0) * std::pow(r, -(lambda + 1.0)) * bracket;
  out.b = c * std::pow(k.m, (lambda + 2) / 2.0) * std::pow(r, -static_cast<double>(lambda)) * kl;
  return out;
}

// Massive vector propagator in the Stueckelberg gauge with parameter alpha:
//   g_{mu nu} G_{sqrt m} + m^{-2} (d_mu d_nu G_{sqrt(m/alpha)} - d_mu d_nu G_{sqrt m}),
// Euclidean metric, indices 0-based.
inline double boson_propagator(const Kinematics &k, double alpha, int mu, int nu, const BesselEvalConfig &cfg = {}) {
  const double r = detail::checked_norm(k);
  detail::require_mass(k);
  if (!(alpha > 0)) {
    throw validation_error("gauge parameter alpha must be positive");
  }
  if (mu < 0 || nu < 0 || mu >= k.D || nu >= k.D) {
    throw validation_error("vector index out of range");
  }
  const double mass_a = std::sqrt(k.m);
  const double mass_b = std::sqrt(k.m / alpha);
  double value = mu == nu ? detail::scalar_kernel(k.D, mass_a, r, cfg) : 0.0;
  const auto [fa1, fa2] = detail::scalar_kernel_derivatives(k.D, mass_a, r, cfg);
  const auto [fb1, fb2] = detail::scalar_kernel_derivatives(k.D, mass_b, r, cfg);
  const double ha = detail::radial_hessian(k.x, r, fa1, fa2, mu, nu);
  const double hb = detail::radial_hessian(k.x, r, fb1, fb2, mu, nu);
  return value + (hb - ha) / (k.m * k.m);
}

} // namespace confamp
