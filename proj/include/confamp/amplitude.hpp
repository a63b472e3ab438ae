#pragma once

// Per-edge expansions of the massive scalar propagator and truncated amplitude
// evaluation.
//
// With lambda = (D-2)/2 the real kernel is
//   G(x) = (2 pi)^{-(lambda+1)} m^{2 lambda} (m r)^{-lambda} K_lambda(m r),  r = |x|,
// and the complex case is the same formula with lambda = D - 1. Three
// expansions are provided:
//   * small r: sum over ell of r^{2 ell} (c_ell + b_ell log r),
//   * large r: e^{-m r} sum over l of a_l r^{-(l + lambda + 1/2)},
//   * Gegenbauer: each r^{2 ell} (and r^{2 ell} log r) rewritten through
//     |x_s - x_t|^2 = rho^2 (1 - 2 t c + t^2), t = r_min / rho, c = cos angle.
// Coefficients are exact SymbolicCoeff values with m, log m, gamma and log 2
// left symbolic.

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <utility>
#include <vector>

#include "confamp/errors.hpp"
#include "confamp/exact.hpp"
#include "confamp/feyngraph.hpp"
#include "confamp/gegenbauer.hpp"
#include "confamp/propagators.hpp"
#include "confamp/specfun.hpp"

namespace confamp {

enum class TaylorBranch { power, power_log };

// One term r^{2 ell} of the small-distance expansion. Negative ell are the
// finitely many polar powers; ell >= 0 carries a log r factor for integer
// lambda (and is a plain power for half-integer lambda, where it comes from
// I_lambda).
struct TaylorTermSpec {
  HalfInt ell{};
  TaylorBranch branch = TaylorBranch::power_log;

  static TaylorTermSpec at(HalfInt ell) {
    return {ell, ell < HalfInt(0) ? TaylorBranch::power : TaylorBranch::power_log};
  }

  void validate(HalfInt lambda) const {
    if ((ell < HalfInt(0)) != (branch == TaylorBranch::power)) {
      throw validation_error("term branch does not match the sign of ell = " + ell.str());
    }
    if (ell < -lambda) {
      throw validation_error("ell = " + ell.str() + " is below -lambda = " + (-lambda).str());
    }
    if (lambda.is_integer() && !ell.is_integer()) {
      throw validation_error("integer lambda only has integer ell");
    }
    if (!lambda.is_integer() && ell.is_integer() && ell < HalfInt(0)) {
      throw validation_error("half-integer lambda has no negative integer ell");
    }
  }

  bool operator==(const TaylorTermSpec &) const = default;
};

// Coefficients of r^{2 ell} and r^{2 ell} log r.
struct TaylorCoefficient {
  SymbolicCoeff constant_part;
  SymbolicCoeff log_r_part;

  double evaluate(double m, double r, HalfInt ell, const SymbolBinding &base = {}) const {
    SymbolBinding b = base;
    b.m = m;
    const double power = std::pow(r, ell.to_double() * 2);
    return power * (constant_part.evaluate(b) + log_r_part.evaluate(b) * std::log(r));
  }
};

// lambda for the complex case in complex dimension D.
inline HalfInt complex_case_lambda(int D) {
  if (D < 2) {
    throw validation_error("complex case needs D >= 2");
  }
  return HalfInt(D - 1);
}

inline HalfInt real_case_lambda(int D) {
  if (D < 3) {
    throw validation_error("real case needs D >= 3");
  }
  return HalfInt::from_twice(D - 2);
}

namespace detail {

inline void require_order(HalfInt lambda) {
  if (lambda.twice() < 1) {
    throw validation_error("propagator order lambda must be >= 1/2, got " + lambda.str());
  }
}

inline Rational sign(int k) { return k % 2 == 0 ? 1 : -1; }

inline Rational power_of_two(int k) {
  return k >= 0 ? Rational(Integer(1) << k) : Rational(1) / Rational(Integer(1) << -k);
}

} // namespace detail

inline TaylorCoefficient taylor_term_coefficient(const TaylorTermSpec &spec, HalfInt lambda) {
  detail::require_order(lambda);
  spec.validate(lambda);
  TaylorCoefficient out;
  if (lambda.is_integer()) {
    const int L = lambda.as_int();
    const ExactScalar norm = ExactScalar::monomial(detail::power_of_two(-(L + 1)), HalfInt(-(L + 1)));
    if (spec.ell < HalfInt(0)) {
      // Finite part of K_L: (1/2) sum_{l<L} (-1)^l (L-l-1)!/l! (z/2)^{2l-L}, l = L + ell.
      const int l = L + spec.ell.as_int();
      const Rational q = detail::sign(l) * detail::power_of_two(L - 2 * l - 1) * Rational(factorial(L - l - 1)) /
                         Rational(factorial(l));
      out.constant_part = SymbolicCoeff::mass_power(HalfInt(2 * l)).scaled(norm.scaled(q));
      return out;
    }
    // (-1)^{L+1} sum_k (z/2)^{L+2k}/(k!(L+k)!) [log(z/2) - (psi(k+1) + psi(L+k+1))/2]
    const int k = spec.ell.as_int();
    const Rational q = detail::sign(L + 1) * detail::power_of_two(-L - 2 * k) /
                       Rational(Integer(factorial(k)) * factorial(L + k));
    const SymbolicCoeff B = SymbolicCoeff::mass_power(HalfInt(2 * L + 2 * k)).scaled(norm.scaled(q));
    const SymbolicCoeff psi_mean =
        (digamma_exact(HalfInt(k + 1)) + digamma_exact(HalfInt(L + k + 1))).scaled(ExactScalar(Rational(1, 2)));
    out.log_r_part = B;
    out.constant_part = B * (SymbolicCoeff::log_m() - SymbolicCoeff::log2() - psi_mean);
    return out;
  }
  // Half-integer lambda = n + 1/2: K = (pi / (2 sin(lambda pi))) (I_{-lambda} - I_lambda)
  // with sin(lambda pi) = (-1)^n.
  const int n = (lambda.twice() - 1) / 2;
  const ExactScalar pi_part = ExactScalar::pi_power(-lambda);
  if (!spec.ell.is_integer()) {
    // From I_{-lambda}: k = ell + lambda.
    const int k = (spec.ell + lambda).as_int();
    const ExactScalar c =
        (pi_part * reciprocal_gamma_exact(HalfInt(k + 1) - lambda))
            .scaled(detail::sign(n) * detail::power_of_two(-2 * k - 2) / Rational(factorial(k)));
    out.constant_part = SymbolicCoeff::mass_power(HalfInt(2 * k)).scaled(c);
    return out;
  }
  // From -I_lambda: k = ell.
  const int k = spec.ell.as_int();
  const ExactScalar c = (pi_part * gamma_exact(HalfInt(k + 1) + lambda).inverse())
                            .scaled(-detail::sign(n) * detail::power_of_two(-lambda.twice() - 2 * k - 2) /
                                    Rational(factorial(k)));
  out.constant_part = SymbolicCoeff::mass_power(lambda + lambda + HalfInt(2 * k)).scaled(c);
  return out;
}

// The first `count` terms of the small-distance expansion, in increasing ell.
inline std::vector<TaylorTermSpec> taylor_terms(HalfInt lambda, int count) {
  detail::require_order(lambda);
  if (count < 1) {
    throw validation_error("need at least one expansion term");
  }
  std::vector<TaylorTermSpec> out;
  for (HalfInt ell = -lambda; static_cast<int>(out.size()) < count; ell = ell + HalfInt::from_twice(1)) {
    if (lambda.is_integer() ? ell.is_integer() : (!ell.is_integer() || !(ell < HalfInt(0)))) {
      out.push_back(TaylorTermSpec::at(ell));
    }
  }
  return out;
}

inline double taylor_sum(HalfInt lambda, double m, double r, int count, const SymbolBinding &base = {}) {
  if (!(r > 0)) {
    throw diagonal_singularity("expansion needs r > 0");
  }
  long double acc = 0;
  for (const auto &spec : taylor_terms(lambda, count)) {
    acc += taylor_term_coefficient(spec, lambda).evaluate(m, r, spec.ell, base);
  }
  return static_cast<double>(acc);
}

// a_l e^{-m r} r^{r_exponent}, where the coefficient is sqrt2^{sqrt2_power}
// times the exact symbolic part.
struct AsymptoticTerm {
  SymbolicCoeff coeff;
  int sqrt2_power = 0; // 0 or 1
  HalfInt r_exponent{};

  double evaluate(double m, double r) const {
    const double c = coeff.evaluate(SymbolBinding::for_mass(m)) * (sqrt2_power ? std::numbers::sqrt2 : 1.0);
    return c * std::pow(r, r_exponent.to_double()) * std::exp(-m * r);
  }
};

// sqrt(pi/2) (2 pi)^{-(lambda+1)} (lambda, l) 2^{-l} m^{lambda-l-1/2} with radial
// exponent -(l + lambda + 1/2).
inline AsymptoticTerm asymptotic_term_coefficient(int ell, HalfInt lambda) {
  detail::require_order(lambda);
  if (ell < 0) {
    throw validation_error("asymptotic term index must be >= 0");
  }
  AsymptoticTerm t;
  // Power of two, doubled: -1 - 2(lambda+1) - 2l.
  const int two_twice = -1 - (lambda.twice() + 2) - 2 * ell;
  int two_int = 0;
  if (two_twice % 2 == 0) {
    two_int = two_twice / 2;
  } else {
    t.sqrt2_power = 1;
    two_int = (two_twice - 1) / 2;
  }
  const HalfInt pi_exp = HalfInt::from_twice(1) - lambda - HalfInt(1);
  const ExactScalar c = ExactScalar::monomial(asym_coeff(lambda, ell) * detail::power_of_two(two_int), pi_exp);
  t.coeff = SymbolicCoeff::mass_power(lambda - HalfInt(ell) - HalfInt::from_twice(1)).scaled(c);
  t.r_exponent = -(HalfInt(ell) + lambda + HalfInt::from_twice(1));
  return t;
}

inline double asymptotic_sum(HalfInt lambda, double m, double r, int count) {
  if (!(r > 0) || !(m > 0)) {
    throw validation_error("asymptotic expansion needs m > 0 and r > 0");
  }
  long double acc = 0;
  for (int l = 0; l < count; ++l) {
    acc += asymptotic_term_coefficient(l, lambda).evaluate(m, r);
  }
  return static_cast<double>(acc);
}

// ---------------------------------------------------------------------------
// Gegenbauer expansions.

struct EdgeGeometry {
  double rho = 0; // larger endpoint norm
  double r = 0;   // smaller endpoint norm
  double cos = 0; // cosine of the angle between the endpoints (0 if one is at the origin)

  static EdgeGeometry from_points(const std::vector<double> &a, const std::vector<double> &b) {
    if (a.size() != b.size()) {
      throw validation_error("edge endpoints have different dimensions");
    }
    const double na = std::sqrt(std::inner_product(a.begin(), a.end(), a.begin(), 0.0));
    const double nb = std::sqrt(std::inner_product(b.begin(), b.end(), b.begin(), 0.0));
    EdgeGeometry g;
    g.rho = std::max(na, nb);
    g.r = std::min(na, nb);
    if (na > 0 && nb > 0) {
      g.cos = std::clamp(std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb), -1.0, 1.0);
    }
    return g;
  }

  double ratio() const { return rho > 0 ? r / rho : 0.0; }

  // |x_s - x_t|
  double separation() const { return std::sqrt(std::max(0.0, rho * rho - 2 * rho * r * cos + r * r)); }
};

struct GegenOrders {
  int radial = 24;
  int degree = -1; // -1: same as radial

  int degree_cap() const { return degree < 0 ? radial : degree; }
  void validate() const {
    if (radial < 0 || degree < -1) {
      throw validation_error("truncation orders must be non-negative");
    }
  }
};

// rho^{2 ell} sum_{n, d} t^n C_d^(lambda)(c) [plain(n, d) + log(rho) log_rho(n, d)]
struct GegenExpansion {
  HalfInt lambda{1};
  HalfInt ell{};
  GegenOrders orders{};
  std::map<std::pair<int, int>, SymbolicCoeff> plain;
  std::map<std::pair<int, int>, SymbolicCoeff> log_rho;

  double evaluate(const EdgeGeometry &geo, const SymbolBinding &b) const {
    if (!(geo.rho > 0)) {
      throw diagonal_singularity("Gegenbauer expansion needs rho > 0");
    }
    const double t = geo.ratio();
    if (t >= 1) {
      throw validation_error("Gegenbauer expansion needs r/rho < 1");
    }
    const double lam = lambda.to_double();
    std::map<int, double> gegen;
    auto C = [&](int d) {
      auto it = gegen.find(d);
      if (it == gegen.end()) {
        it = gegen.emplace(d, gegenbauer_value(lam, d, geo.cos)).first;
      }
      return it->second;
    };
    long double plain_sum = 0;
    long double log_sum = 0;
    for (const auto &[key, c] : plain) {
      plain_sum += c.evaluate(b) * std::pow(t, key.first) * C(key.second);
    }
    for (const auto &[key, c] : log_rho) {
      log_sum += c.evaluate(b) * std::pow(t, key.first) * C(key.second);
    }
    return std::pow(geo.rho, ell.to_double() * 2) * static_cast<double>(plain_sum + std::log(geo.rho) * log_sum);
  }

  bool operator==(const GegenExpansion &) const = default;
};

namespace detail {

using ComboSeries = std::vector<GegenCombo>; // index = power of t

struct LinearizeCache {
  HalfInt lambda;
  std::map<std::pair<int, int>, GegenCombo> table;

  const GegenCombo &get(int a, int b) {
    if (a > b) {
      std::swap(a, b);
    }
    auto it = table.find({a, b});
    if (it == table.end()) {
      it = table.emplace(std::make_pair(a, b), product_linearize(a, b, lambda)).first;
    }
    return it->second;
  }
};

inline GegenCombo combo_product(const GegenCombo &x, const GegenCombo &y, LinearizeCache &cache, int degree_cap) {
  GegenCombo out{cache.lambda, {}};
  for (const auto &[dx, cx] : x.coeffs) {
    for (const auto &[dy, cy] : y.coeffs) {
      const ExactScalar w = cx * cy;
      for (const auto &[d, c] : cache.get(dx, dy).coeffs) {
        if (d <= degree_cap) {
          out.add(d, c * w);
        }
      }
    }
  }
  return out;
}

inline ComboSeries series_product(const ComboSeries &a, const ComboSeries &b, LinearizeCache &cache, int radial,
                                  int degree_cap) {
  ComboSeries out(radial + 1, GegenCombo{cache.lambda, {}});
  for (int i = 0; i <= radial && i < static_cast<int>(a.size()); ++i) {
    for (int j = 0; i + j <= radial && j < static_cast<int>(b.size()); ++j) {
      for (const auto &[d, c] : combo_product(a[i], b[j], cache, degree_cap).coeffs) {
        out[i + j].add(d, c);
      }
    }
  }
  return out;
}

inline GegenCombo truncated(const GegenCombo &c, int degree_cap) {
  GegenCombo out{c.lambda, {}};
  for (const auto &[d, v] : c.coeffs) {
    if (d <= degree_cap) {
      out.add(d, v);
    }
  }
  return out;
}

// (1 - 2 t c + t^2)^k for integer k >= 0, as monomial polynomials in c per power of t.
inline std::vector<ExactPoly> quadric_power_poly(int k, int radial) {
  std::vector<ExactPoly> s(radial + 1);
  s[0] = ExactPoly::monomial(0);
  const ExactPoly minus_two_c = ExactPoly::monomial(1, -2);
  for (int step = 0; step < k; ++step) {
    std::vector<ExactPoly> next(radial + 1);
    for (int n = 0; n <= radial; ++n) {
      if (s[n].is_zero()) {
        continue;
      }
      next[n] += s[n];
      if (n + 1 <= radial) {
        next[n + 1] += s[n] * minus_two_c;
      }
      if (n + 2 <= radial) {
        next[n + 2] += s[n];
      }
    }
    s = std::move(next);
  }
  return s;
}

} // namespace detail

// Coefficients of (1 - 2 t c + t^2)^{ell} = sum_n t^n (combination of C_d^(lambda)(c)),
// n <= radial. Negative ell is the generating function of C^(-ell) re-expanded in
// weight lambda; non-negative integer ell is a polynomial; positive half-integer
// ell splits as (..)^{ell+1/2} (..)^{-1/2}.
inline std::vector<GegenCombo> quadric_power_series(HalfInt ell, HalfInt lambda, const GegenOrders &orders) {
  detail::require_weight(lambda);
  orders.validate();
  const int N = orders.radial;
  const int cap = orders.degree_cap();
  std::vector<GegenCombo> out;
  if (ell < HalfInt(0)) {
    for (int n = 0; n <= N; ++n) {
      out.push_back(detail::truncated(reproject_gegenbauer(-ell, n, lambda), cap));
    }
    return out;
  }
  if (ell.is_integer()) {
    for (const auto &p : detail::quadric_power_poly(ell.as_int(), N)) {
      out.push_back(detail::truncated(poly_to_gegenbauer(p, lambda), cap));
    }
    return out;
  }
  detail::LinearizeCache cache{lambda, {}};
  const auto poly = quadric_power_series(ell + HalfInt::from_twice(1), lambda, orders);
  const auto root = quadric_power_series(HalfInt::from_twice(-1), lambda, orders);
  return detail::series_product(poly, root, cache, N, cap);
}

// (1/2) log(1 - 2 t c + t^2) = -sum_{n>=1} T_n(c) t^n / n, re-expanded in weight lambda.
inline std::vector<GegenCombo> half_log_quadric_series(HalfInt lambda, const GegenOrders &orders) {
  detail::require_weight(lambda);
  orders.validate();
  std::vector<GegenCombo> out(orders.radial + 1, GegenCombo{lambda, {}});
  for (int n = 1; n <= orders.radial; ++n) {
    const GegenCombo T = chebyshev_to_gegenbauer(n, lambda);
    for (const auto &[d, c] : T.coeffs) {
      if (d <= orders.degree_cap()) {
        out[n].add(d, c.scaled(Rational(-1, n)));
      }
    }
  }
  return out;
}

inline GegenExpansion edge_gegenbauer_expansion(const TaylorTermSpec &spec, HalfInt lambda, const GegenOrders &orders = {}) {
  const TaylorCoefficient coeff = taylor_term_coefficient(spec, lambda);
  GegenExpansion e;
  e.lambda = lambda;
  e.ell = spec.ell;
  e.orders = orders;
  const auto S = quadric_power_series(spec.ell, lambda, orders);
  auto accumulate = [](std::map<std::pair<int, int>, SymbolicCoeff> &into, int n, const GegenCombo &combo,
                       const SymbolicCoeff &factor) {
    if (factor.is_zero()) {
      return;
    }
    for (const auto &[d, c] : combo.coeffs) {
      SymbolicCoeff &slot = into[{n, d}];
      slot += factor.scaled(c);
      if (slot.is_zero()) {
        into.erase({n, d});
      }
    }
  };
  for (int n = 0; n <= orders.radial; ++n) {
    accumulate(e.plain, n, S[n], coeff.constant_part);
    accumulate(e.log_rho, n, S[n], coeff.log_r_part);
  }
  if (!coeff.log_r_part.is_zero()) {
    detail::LinearizeCache cache{lambda, {}};
    const auto SL = detail::series_product(S, half_log_quadric_series(lambda, orders), cache, orders.radial,
                                           orders.degree_cap());
    for (int n = 0; n <= orders.radial; ++n) {
      accumulate(e.plain, n, SL[n], coeff.log_r_part);
    }
  }
  return e;
}

// Every pi exponent in every entry is an integer.
inline bool has_integral_pi_powers(const GegenExpansion &e) {
  for (const auto *tensor : {&e.plain, &e.log_rho}) {
    for (const auto &[key, c] : *tensor) {
      for (const auto &[sym, scalar] : c.terms()) {
        for (const auto &[half_exp, q] : scalar.terms()) {
          if (half_exp % 2 != 0) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

// Gegenbauer degree never exceeds the radial power.
inline bool degrees_within_radial(const GegenExpansion &e) {
  for (const auto *tensor : {&e.plain, &e.log_rho}) {
    for (const auto &[key, c] : *tensor) {
      if (key.second > key.first) {
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Amplitudes: products of per-edge propagators over all edges of a graph.

enum class ExpansionMethod { direct, taylor, asymptotic, gegenbauer };

struct AmplitudeOrders {
  int taylor_terms = 20;
  int asymptotic_terms = 6;
  GegenOrders gegen{};
};

struct AmplitudeSetup {
  int D = 4;
  bool complex_case = false;
  std::map<int, std::vector<double>> positions; // vertex id -> point in R^D
  std::map<int, double> masses;                 // edge index -> mass
  SymbolBinding constants{};                    // values of gamma and log 2
  BesselEvalConfig bessel{};

  HalfInt lambda() const { return complex_case ? complex_case_lambda(D) : real_case_lambda(D); }
};

namespace detail {

inline double direct_edge(const AmplitudeSetup &s, double m, double r) {
  Kinematics k = Kinematics::radial(s.D, r, m);
  return s.complex_case ? gm_complex(k, s.bessel) : gm_real(k, s.bessel);
}

} // namespace detail

inline double amplitude_truncated_eval(const FeynmanGraph &graph, const AmplitudeSetup &setup, ExpansionMethod method,
                                       const AmplitudeOrders &orders = {}) {
  require_valid(graph);
  const HalfInt lambda = setup.lambda();
  std::map<TaylorTermSpec, GegenExpansion, bool (*)(const TaylorTermSpec &, const TaylorTermSpec &)> cache(
      [](const TaylorTermSpec &a, const TaylorTermSpec &b) { return a.ell < b.ell; });
  long double product = 1;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const Edge &edge = graph.edges[e];
    const auto ps = setup.positions.find(edge.src);
    const auto pt = setup.positions.find(edge.tgt);
    if (ps == setup.positions.end() || pt == setup.positions.end()) {
      throw validation_error("missing position for an endpoint of edge " + std::to_string(e));
    }
    const auto mit = setup.masses.find(static_cast<int>(e));
    if (mit == setup.masses.end()) {
      throw validation_error("missing mass for edge " + std::to_string(e));
    }
    const double m = mit->second;
    if (!(m >= 0) || !std::isfinite(m)) {
      throw validation_error("edge masses must be finite and non-negative");
    }
    if (static_cast<int>(ps->second.size()) != setup.D || static_cast<int>(pt->second.size()) != setup.D) {
      throw validation_error("vertex positions must have D components");
    }
    std::vector<double> diff(setup.D);
    for (int i = 0; i < setup.D; ++i) {
      diff[i] = ps->second[i] - pt->second[i];
    }
    const double r = std::sqrt(std::inner_product(diff.begin(), diff.end(), diff.begin(), 0.0));
    if (r == 0) {
      throw diagonal_singularity("edge " + std::to_string(e) + " joins coincident points");
    }
    double value = 0;
    switch (method) {
    case ExpansionMethod::direct:
      value = detail::direct_edge(setup, m, r);
      break;
    case ExpansionMethod::taylor:
      value = taylor_sum(lambda, m, r, orders.taylor_terms, setup.constants);
      break;
    case ExpansionMethod::asymptotic:
      value = asymptotic_sum(lambda, m, r, orders.asymptotic_terms);
      break;
    case ExpansionMethod::gegenbauer: {
      const EdgeGeometry geo = EdgeGeometry::from_points(ps->second, pt->second);
      if (geo.ratio() >= 1) {
        throw validation_error("edge " + std::to_string(e) + " has r/rho >= 1; Gegenbauer expansion diverges");
      }
      SymbolBinding b = setup.constants;
      b.m = m;
      long double acc = 0;
      for (const auto &spec : taylor_terms(lambda, orders.taylor_terms)) {
        auto it = cache.find(spec);
        if (it == cache.end()) {
          it = cache.emplace(spec, edge_gegenbauer_expansion(spec, lambda, orders.gegen)).first;
        }
        if (m == 0 && spec.ell > -lambda) {
          continue; // only the leading polar term survives at m = 0
        }
        acc += it->second.evaluate(geo, b);
      }
      value = static_cast<double>(acc);
      break;
    }
    }
    product *= value;
  }
  return static_cast<double>(product);
}

} // namespace confamp
