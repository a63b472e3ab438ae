#pragma once

// Numerical integration used by the oracles: Gauss-Legendre rules on finite
// intervals and an exp-substituted trapezoid rule on (0, inf).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "confamp/errors.hpp"

namespace confamp {

struct GaussRule {
  std::vector<long double> nodes;
  std::vector<long double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1]; roots by Newton iteration on the
// three-term recurrence, started from the Tricomi approximation.
inline GaussRule gauss_legendre(int n) {
  if (n < 1) {
    throw validation_error("Gauss-Legendre rule needs at least one node");
  }
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const long double pi = std::numbers::pi_v<long double>;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1;
      long double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p0 = 1;
        p1 = x;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) {
        break;
      }
    }
    // Recompute the derivative at the converged root.
    long double p0 = 1;
    long double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1);
    const long double w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = 0;
  }
  return rule;
}

template <class F> long double integrate_gauss(F &&f, long double a, long double b, const GaussRule &rule) {
  const long double half = (b - a) / 2;
  const long double mid = (a + b) / 2;
  long double acc = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return acc * half;
}

struct HalfLineQuadrature {
  double tolerance = 1e-13; // relative target between successive halvings
  double truncation = 80.0; // |u| bound for the substituted variable u = log t
  double initial_step = 0.5;
  int max_halvings = 10;
};

struct QuadratureResult {
  double value = 0;
  double error_estimate = 0;
};

// Integral of g over (0, inf) for g smooth with (at least) exponential decay in
// log t at both ends. After t = e^u the integrand g(e^u) e^u decays double
// exponentially, where the trapezoid rule converges geometrically in 1/h.
template <class G> QuadratureResult integrate_half_line(G &&g, const HalfLineQuadrature &q = {}) {
  auto h_of_u = [&](long double u) -> long double {
    const long double t = std::exp(u);
    return static_cast<long double>(g(t)) * t;
  };

  // Locate the bulk of the integrand on a coarse grid.
  long double peak = 0;
  long double peak_u = 0;
  const long double L = q.truncation;
  for (long double u = -L; u <= L; u += 0.25L) {
    const long double v = std::abs(h_of_u(u));
    if (std::isfinite(static_cast<double>(v)) && v > peak) {
      peak = v;
      peak_u = u;
    }
  }
  if (peak == 0) {
    return {0.0, 0.0};
  }
  const long double cutoff = peak * 1e-22L;

  long double step = q.initial_step;
  auto trapezoid = [&](long double h, long double offset, long double stride) {
    long double acc = 0;
    for (int dir = -1; dir <= 1; dir += 2) {
      for (long k = (dir < 0 ? 1 : 0);; ++k) {
        const long double u = peak_u + offset + dir * k * stride;
        if (u < -L || u > L) {
          break;
        }
        const long double v = h_of_u(u);
        acc += v;
        if (std::abs(u - peak_u) > 2 && std::abs(v) < cutoff) {
          break;
        }
      }
    }
    return acc * h;
  };

  long double estimate = trapezoid(step, 0, step);
  long double error = std::numeric_limits<long double>::infinity();
  for (int level = 0; level < q.max_halvings; ++level) {
    // New nodes sit at the midpoints of the previous grid.
    const long double mid_sum = trapezoid(step, step / 2, step) / step;
    step /= 2;
    const long double refined = estimate / 2 + mid_sum * step;
    error = std::abs(refined - estimate);
    estimate = refined;
    if (error <= q.tolerance * std::abs(estimate)) {
      return {static_cast<double>(estimate), static_cast<double>(error)};
    }
  }
  throw non_convergence("half-line quadrature", static_cast<double>(error / std::abs(estimate)));
}

} // namespace confamp
