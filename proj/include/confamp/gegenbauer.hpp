#pragma once

// Gegenbauer polynomials C_n^(lambda) with exact coefficients: explicit monomial
// form, conversions between monomial, Chebyshev and Gegenbauer bases, change of
// weight, product linearization, and the zonal-harmonic normalization.

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "confamp/exact.hpp"
#include "confamp/specfun.hpp"

namespace confamp {

// Polynomial in one variable, coefficient of x^k at index k. Trailing zeros are
// trimmed so equality is exact.
class ExactPoly {
public:
  ExactPoly() = default;
  explicit ExactPoly(std::vector<ExactScalar> c) : c_(std::move(c)) { trim(); }

  static ExactPoly monomial(int degree, const ExactScalar &coeff = 1) {
    std::vector<ExactScalar> c(degree + 1);
    c[degree] = coeff;
    return ExactPoly(std::move(c));
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  ExactScalar coefficient(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : ExactScalar(); }
  const std::vector<ExactScalar> &coefficients() const & { return c_; }
  std::vector<ExactScalar> coefficients() && { return std::move(c_); }

  ExactPoly &operator+=(const ExactPoly &o) {
    if (o.c_.size() > c_.size()) {
      c_.resize(o.c_.size());
    }
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
      c_[k] += o.c_[k];
    }
    trim();
    return *this;
  }
  ExactPoly &operator-=(const ExactPoly &o) { return *this += o.scaled(-1); }
  friend ExactPoly operator+(ExactPoly a, const ExactPoly &b) { return a += b; }
  friend ExactPoly operator-(ExactPoly a, const ExactPoly &b) { return a -= b; }
  friend ExactPoly operator*(const ExactPoly &a, const ExactPoly &b) {
    if (a.is_zero() || b.is_zero()) {
      return {};
    }
    std::vector<ExactScalar> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        c[i + j] += a.c_[i] * b.c_[j];
      }
    }
    return ExactPoly(std::move(c));
  }

  ExactPoly scaled(const ExactScalar &s) const {
    std::vector<ExactScalar> c = c_;
    for (auto &v : c) {
      v *= s;
    }
    return ExactPoly(std::move(c));
  }

  bool operator==(const ExactPoly &o) const { return c_ == o.c_; }

  double evaluate(double x) const {
    long double acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      acc = acc * x + it->to_double();
    }
    return static_cast<double>(acc);
  }

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) {
      c_.pop_back();
    }
  }

  std::vector<ExactScalar> c_;
};

struct PolySpec {
  HalfInt lambda{1};
  int n = 0;
  bool chebyshev = false; // the lambda -> 0 limit, T_n

  void validate() const {
    if (n < 0) {
      throw validation_error("polynomial degree must be non-negative");
    }
    if (!chebyshev && lambda.twice() < 1) {
      throw validation_error("Gegenbauer weight must be >= 1/2, got " + lambda.str());
    }
  }
};

// A finite combination sum_k a_k C_k^(lambda).
struct GegenCombo {
  HalfInt lambda{1};
  std::map<int, ExactScalar> coeffs;

  void add(int degree, const ExactScalar &c) {
    if (c.is_zero()) {
      return;
    }
    auto [it, inserted] = coeffs.try_emplace(degree, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) {
        coeffs.erase(it);
      }
    }
  }

  bool operator==(const GegenCombo &) const = default;
};

namespace detail {

inline void require_weight(HalfInt lambda) {
  if (lambda.twice() < 1) {
    throw validation_error("Gegenbauer weight must be >= 1/2, got " + lambda.str());
  }
}

inline void require_degree(int n) {
  if (n < 0) {
    throw validation_error("polynomial degree must be non-negative");
  }
}

} // namespace detail

// T_n via T_{n+1} = 2x T_n - T_{n-1}.
inline ExactPoly chebyshev_poly(int n) {
  detail::require_degree(n);
  ExactPoly prev = ExactPoly::monomial(0);
  if (n == 0) {
    return prev;
  }
  ExactPoly cur = ExactPoly::monomial(1);
  const ExactPoly two_x = ExactPoly::monomial(1, 2);
  for (int k = 1; k < n; ++k) {
    ExactPoly next = two_x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// C_n^(lambda)(x) = sum_k (-1)^k Gamma(lambda+n-k) / (k! (n-2k)! Gamma(lambda)) (2x)^(n-2k)
inline ExactPoly gegenbauer_coeffs(const PolySpec &spec) {
  spec.validate();
  if (spec.chebyshev) {
    return chebyshev_poly(spec.n);
  }
  const int n = spec.n;
  const ExactScalar inv_gamma_lambda = gamma_exact(spec.lambda).inverse();
  std::vector<ExactScalar> c(n + 1);
  for (int k = 0; 2 * k <= n; ++k) {
    const Rational sign = k % 2 == 0 ? 1 : -1;
    const Rational scale = sign * Rational(Integer(1) << (n - 2 * k)) / Rational(Integer(factorial(k)) * factorial(n - 2 * k));
    c[n - 2 * k] = (gamma_exact(spec.lambda + (n - k)) * inv_gamma_lambda).scaled(scale);
  }
  return ExactPoly(std::move(c));
}

inline ExactPoly expand(const GegenCombo &combo) {
  ExactPoly p;
  for (const auto &[deg, c] : combo.coeffs) {
    p += gegenbauer_coeffs({combo.lambda, deg}).scaled(c);
  }
  return p;
}

// Numeric C_n^(lambda)(x) by the three-term recurrence; lambda may be any real > 0.
inline double gegenbauer_value(double lambda, int n, double x) {
  detail::require_degree(n);
  long double prev = 1;
  if (n == 0) {
    return 1;
  }
  long double cur = 2 * lambda * x;
  for (int k = 2; k <= n; ++k) {
    const long double next = (2 * x * (k + lambda - 1) * cur - (k + 2 * lambda - 2) * prev) / k;
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

inline double evaluate(const GegenCombo &combo, double x) {
  long double acc = 0;
  for (const auto &[deg, c] : combo.coeffs) {
    acc += static_cast<long double>(c.to_double()) * gegenbauer_value(combo.lambda.to_double(), deg, x);
  }
  return static_cast<double>(acc);
}

// n-th Taylor coefficient in t of (1 - 2tx + t^2)^(-lambda), from the power
// recurrence for f^a with f = 1 + a1 t + a2 t^2:
//   g_k = (1/k) sum_{j=1,2} ((a+1) j - k) a_j g_{k-j}.
inline double generating_series_coeff(double lambda, int n, double x) {
  detail::require_degree(n);
  const long double a = -lambda;
  const long double a1 = -2.0L * x;
  const long double a2 = 1.0L;
  std::vector<long double> g(n + 1);
  g[0] = 1;
  for (int k = 1; k <= n; ++k) {
    long double s = ((a + 1) * 1 - k) * a1 * g[k - 1];
    if (k >= 2) {
      s += ((a + 1) * 2 - k) * a2 * g[k - 2];
    }
    g[k] = s / k;
  }
  return static_cast<double>(g[n]);
}

// x^m = 2^{-m} Gamma(lambda) m! sum_k (lambda+m-2k) / (k! Gamma(lambda+m+1-k)) C_{m-2k}^(lambda)(x)
inline GegenCombo monomial_to_gegenbauer(int m, HalfInt lambda) {
  detail::require_degree(m);
  detail::require_weight(lambda);
  GegenCombo out{lambda, {}};
  const ExactScalar gamma_lambda = gamma_exact(lambda);
  const Rational front = Rational(factorial(m)) / Rational(Integer(1) << m);
  for (int k = 0; 2 * k <= m; ++k) {
    const Rational weight = (lambda.to_rational() + m - 2 * k) / Rational(factorial(k));
    out.add(m - 2 * k, (gamma_lambda * gamma_exact(lambda + (m + 1 - k)).inverse()).scaled(front * weight));
  }
  return out;
}

// Re-express a polynomial given in the monomial basis.
inline GegenCombo poly_to_gegenbauer(const ExactPoly &p, HalfInt lambda) {
  GegenCombo out{lambda, {}};
  for (int k = 0; k <= p.degree(); ++k) {
    const ExactScalar c = p.coefficient(k);
    if (c.is_zero()) {
      continue;
    }
    for (const auto &[deg, v] : monomial_to_gegenbauer(k, lambda).coeffs) {
      out.add(deg, v * c);
    }
  }
  return out;
}

// T_n = sum_m c^lambda_{n,m} C_m^(lambda), via the Chebyshev recurrence and the
// monomial expansion.
inline GegenCombo chebyshev_to_gegenbauer(int n, HalfInt lambda) {
  detail::require_weight(lambda);
  return poly_to_gegenbauer(chebyshev_poly(n), lambda);
}

// C_n^(ell)(x) = sum_k (-1)^k Gamma(ell+n-k) Gamma(lambda) / (k! Gamma(ell))
//                 sum_j (lambda+n-2(k+j)) / (j! Gamma(lambda+n-2k+1-j)) C_{n-2(k+j)}^(lambda)(x)
inline GegenCombo reproject_gegenbauer(HalfInt ell, int n, HalfInt lambda) {
  detail::require_degree(n);
  detail::require_weight(ell);
  detail::require_weight(lambda);
  GegenCombo out{lambda, {}};
  const ExactScalar gamma_lambda = gamma_exact(lambda);
  const ExactScalar inv_gamma_ell = gamma_exact(ell).inverse();
  for (int k = 0; 2 * k <= n; ++k) {
    const ExactScalar outer = (gamma_exact(ell + (n - k)) * gamma_lambda * inv_gamma_ell)
                                  .scaled(Rational(k % 2 == 0 ? 1 : -1) / Rational(factorial(k)));
    for (int j = 0; 2 * (k + j) <= n; ++j) {
      const int deg = n - 2 * (k + j);
      const Rational weight = (lambda.to_rational() + deg) / Rational(factorial(j));
      out.add(deg, (outer * gamma_exact(lambda + (n - 2 * k + 1 - j)).inverse()).scaled(weight));
    }
  }
  return out;
}

// C_n C_m = sum_r alpha_{r,n,m} sum_k beta_{r,k,n,m} C_{n+m-2(r+k)} with
//   alpha_{r,n,m} = (-1)^r (n+m-2r)! / Gamma(lambda)
//                   sum_{j+k=r} Gamma(lambda+n-k) Gamma(lambda+m-j) / (k! j! (n-2k)! (m-2j)!)
//   beta_{r,k,n,m} = (lambda+n+m-2(r+k)) / (k! Gamma(lambda+n+m-2r+1-k))
// (the powers of two in alpha cancel).
inline GegenCombo product_linearize(int n, int m, HalfInt lambda) {
  detail::require_degree(n);
  detail::require_degree(m);
  detail::require_weight(lambda);
  GegenCombo out{lambda, {}};
  const ExactScalar inv_gamma_lambda = gamma_exact(lambda).inverse();
  for (int r = 0; 2 * r <= n + m; ++r) {
    ExactScalar inner;
    for (int k = 0; k <= r; ++k) {
      const int j = r - k;
      if (2 * k > n || 2 * j > m) {
        continue;
      }
      const Rational denom = Rational(Integer(factorial(k)) * factorial(j) * factorial(n - 2 * k) * factorial(m - 2 * j));
      inner += (gamma_exact(lambda + (n - k)) * gamma_exact(lambda + (m - j))).scaled(Rational(1) / denom);
    }
    if (inner.is_zero()) {
      continue;
    }
    const int top = n + m - 2 * r;
    const ExactScalar alpha = (inner * inv_gamma_lambda).scaled(Rational((r % 2 == 0 ? 1 : -1) * factorial(top)));
    for (int k = 0; 2 * k <= top; ++k) {
      const int deg = top - 2 * k;
      const Rational weight = (lambda.to_rational() + deg) / Rational(factorial(k));
      out.add(deg, (alpha * gamma_exact(lambda + (top + 1 - k)).inverse()).scaled(weight));
    }
  }
  return out;
}

// c_{D,n} = Vol(S^{D-1}) (D-2) / (2n+D-2), Vol(S^{D-1}) = 2 pi^{D/2} / Gamma(D/2).
inline ExactScalar zonal_coefficient(int D, int n) {
  if (D < 3) {
    throw validation_error("zonal coefficient needs D >= 3");
  }
  detail::require_degree(n);
  const ExactScalar volume = (ExactScalar::pi_power(HalfInt::from_twice(D)) * gamma_exact(HalfInt::from_twice(D)).inverse()).scaled(2);
  return volume.scaled(Rational(D - 2, 2 * n + D - 2));
}

// (T_n(x), (n/2) C_n^(eps)(x) / eps) for checking the lambda -> 0 limit.
inline std::pair<double, double> chebyshev_limit_check(int n, double x, double eps_lambda) {
  if (n < 1) {
    throw validation_error("Chebyshev limit check needs n >= 1");
  }
  if (!(eps_lambda > 0)) {
    throw validation_error("Chebyshev limit check needs eps > 0");
  }
  const double t = chebyshev_poly(n).evaluate(x);
  return {t, 0.5 * n * gegenbauer_value(eps_lambda, n, x) / eps_lambda};
}

} // namespace confamp
