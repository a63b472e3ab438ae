#pragma once

// Exact coefficient arithmetic.
//
//   Rational      arbitrary-precision rational (GMP backed)
//   HalfInt       an element of (1/2)Z, stored as twice its value
//   ExactScalar   finite sum  sum_k q_k * pi^(k/2),  q_k rational
//   SymbolicCoeff polynomial in m^(1/2), log m, gamma, log 2 over ExactScalar
//
// All types are regular values; every operation returns a canonical form (no
// stored zero coefficients), so operator== is exact equality.

#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include <boost/multiprecision/gmp.hpp>

#include "confamp/errors.hpp"

namespace confamp {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

inline double to_double(const Rational &q) { return q.convert_to<double>(); }

inline std::string to_string(const Rational &q) { return q.str(); }

inline Rational parse_rational(const std::string &s) {
  try {
    return Rational(s);
  } catch (const std::exception &) {
    throw validation_error("not a rational number: '" + s + "'");
  }
}

inline Rational rational_pow(const Rational &base, int exp) {
  Rational result = 1;
  Rational b = exp >= 0 ? base : Rational(1) / base;
  for (int i = 0; i < std::abs(exp); ++i) {
    result *= b;
  }
  return result;
}

inline Integer factorial(int n) {
  if (n < 0) {
    throw validation_error("factorial of a negative integer");
  }
  Integer r = 1;
  for (int k = 2; k <= n; ++k) {
    r *= k;
  }
  return r;
}

inline Integer binomial(int n, int k) {
  if (k < 0 || k > n) {
    return 0;
  }
  Integer r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// ---------------------------------------------------------------------------

class HalfInt {
public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int value) : twice_(2 * value) {} // NOLINT: implicit from int is intended

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  // Accepts x with 2x integral (e.g. 0.5, 3, -1.5); anything else is rejected.
  static HalfInt from_double(double x) {
    const double t = 2.0 * x;
    if (!std::isfinite(t) || std::abs(t - std::round(t)) > 1e-12 || std::abs(t) > 1e8) {
      throw validation_error("not an integer or half-integer: " + std::to_string(x));
    }
    return from_twice(static_cast<int>(std::lround(t)));
  }

  static HalfInt parse(const std::string &s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      try {
        return from_double(std::stod(s));
      } catch (const std::invalid_argument &) {
        throw validation_error("not a half-integer: '" + s + "'");
      }
    }
    if (s.substr(slash + 1) != "2") {
      throw validation_error("not a half-integer: '" + s + "'");
    }
    return from_twice(std::stoi(s.substr(0, slash)));
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr int as_int() const { return twice_ / 2; }
  constexpr double to_double() const { return twice_ / 2.0; }
  Rational to_rational() const { return Rational(twice_, 2); }

  constexpr auto operator<=>(const HalfInt &) const = default;
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr HalfInt operator-() const { return from_twice(-twice_); }

  std::string str() const {
    return is_integer() ? std::to_string(as_int()) : std::to_string(twice_) + "/2";
  }

private:
  int twice_ = 0;
};

inline std::ostream &operator<<(std::ostream &os, HalfInt h) { return os << h.str(); }

// ---------------------------------------------------------------------------

class ExactScalar {
public:
  using Terms = std::map<int, Rational>; // pi half-exponent -> coefficient

  ExactScalar() = default;
  ExactScalar(const Rational &q) { add_term(0, q); } // NOLINT
  ExactScalar(long v) : ExactScalar(Rational(v)) {}  // NOLINT
  ExactScalar(int v) : ExactScalar(Rational(v)) {}   // NOLINT

  static ExactScalar monomial(const Rational &q, HalfInt pi_exponent) {
    ExactScalar s;
    s.add_term(pi_exponent.twice(), q);
    return s;
  }
  static ExactScalar pi_power(HalfInt e) { return monomial(1, e); }

  const Terms &terms() const & { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }

  Rational rational_value() const {
    if (!is_rational()) {
      throw validation_error("ExactScalar carries a power of pi: " + str());
    }
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  // Coefficient of pi^(half_exp/2).
  Rational coefficient(int half_exp) const {
    auto it = terms_.find(half_exp);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  ExactScalar &operator+=(const ExactScalar &o) {
    for (const auto &[e, q] : o.terms_) {
      add_term(e, q);
    }
    return *this;
  }
  ExactScalar &operator-=(const ExactScalar &o) {
    for (const auto &[e, q] : o.terms_) {
      add_term(e, -q);
    }
    return *this;
  }
  ExactScalar operator-() const {
    ExactScalar r = *this;
    for (auto &[e, q] : r.terms_) {
      q = -q;
    }
    return r;
  }
  friend ExactScalar operator+(ExactScalar a, const ExactScalar &b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar &b) { return a -= b; }

  friend ExactScalar operator*(const ExactScalar &a, const ExactScalar &b) {
    ExactScalar r;
    for (const auto &[ea, qa] : a.terms_) {
      for (const auto &[eb, qb] : b.terms_) {
        r.add_term(ea + eb, qa * qb);
      }
    }
    return r;
  }
  ExactScalar &operator*=(const ExactScalar &o) { return *this = *this * o; }

  ExactScalar scaled(const Rational &q) const {
    if (q == 0) {
      return {};
    }
    ExactScalar r = *this;
    for (auto &[e, c] : r.terms_) {
      c *= q;
    }
    return r;
  }

  // Only monomials q*pi^k are invertible inside this ring.
  ExactScalar inverse() const {
    if (!is_monomial()) {
      throw validation_error("ExactScalar inverse requires a single pi-power term: " + str());
    }
    const auto &[e, q] = *terms_.begin();
    return monomial(Rational(1) / q, HalfInt::from_twice(-e));
  }
  friend ExactScalar operator/(const ExactScalar &a, const ExactScalar &b) { return a * b.inverse(); }

  bool operator==(const ExactScalar &o) const { return terms_ == o.terms_; }

  double to_double() const {
    long double acc = 0;
    for (const auto &[e, q] : terms_) {
      acc += static_cast<long double>(confamp::to_double(q)) *
             std::pow(static_cast<long double>(std::numbers::pi_v<long double>), e / 2.0L);
    }
    return static_cast<double>(acc);
  }

  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, q] : terms_) {
      if (!first) {
        os << " + ";
      }
      first = false;
      os << q.str();
      if (e != 0) {
        os << "*pi^(" << HalfInt::from_twice(e).str() << ")";
      }
    }
    return os.str();
  }

private:
  void add_term(int e, const Rational &q) {
    if (q == 0) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(e, q);
    if (!inserted) {
      it->second += q;
      if (it->second == 0) {
        terms_.erase(it);
      }
    }
  }

  Terms terms_;
};

inline std::ostream &operator<<(std::ostream &os, const ExactScalar &s) { return os << s.str(); }

// ---------------------------------------------------------------------------

// Exponents of the transcendental symbols appearing in propagator expansion
// coefficients. The mass exponent is a half-integer (asymptotic terms carry
// m^(lambda - l - 1/2)); the logarithms and gamma are non-negative integers.
struct SymbolExponents {
  HalfInt m{};
  int log_m = 0;
  int euler_gamma = 0;
  int log2 = 0;

  auto operator<=>(const SymbolExponents &) const = default;

  SymbolExponents operator+(const SymbolExponents &o) const {
    return {m + o.m, log_m + o.log_m, euler_gamma + o.euler_gamma, log2 + o.log2};
  }
};

// Numeric values substituted for the symbols when evaluating.
struct SymbolBinding {
  double m = 1.0;
  double euler_gamma = std::numbers::egamma;
  double log2 = std::numbers::ln2;

  static SymbolBinding for_mass(double mass) {
    SymbolBinding b;
    b.m = mass;
    return b;
  }
};

class SymbolicCoeff {
public:
  using Terms = std::map<SymbolExponents, ExactScalar>;

  SymbolicCoeff() = default;
  SymbolicCoeff(const ExactScalar &c) { add_term({}, c); } // NOLINT
  SymbolicCoeff(const Rational &c) : SymbolicCoeff(ExactScalar(c)) {} // NOLINT
  SymbolicCoeff(int c) : SymbolicCoeff(ExactScalar(c)) {} // NOLINT

  static SymbolicCoeff term(const SymbolExponents &e, const ExactScalar &c) {
    SymbolicCoeff s;
    s.add_term(e, c);
    return s;
  }
  static SymbolicCoeff mass_power(HalfInt e) { return term({.m = e}, 1); }
  static SymbolicCoeff log_m() { return term({.log_m = 1}, 1); }
  static SymbolicCoeff euler_gamma() { return term({.euler_gamma = 1}, 1); }
  static SymbolicCoeff log2() { return term({.log2 = 1}, 1); }

  const Terms &terms() const & { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }

  SymbolicCoeff &operator+=(const SymbolicCoeff &o) {
    for (const auto &[e, c] : o.terms_) {
      add_term(e, c);
    }
    return *this;
  }
  SymbolicCoeff &operator-=(const SymbolicCoeff &o) {
    for (const auto &[e, c] : o.terms_) {
      add_term(e, -c);
    }
    return *this;
  }
  SymbolicCoeff operator-() const {
    SymbolicCoeff r;
    for (const auto &[e, c] : terms_) {
      r.add_term(e, -c);
    }
    return r;
  }
  friend SymbolicCoeff operator+(SymbolicCoeff a, const SymbolicCoeff &b) { return a += b; }
  friend SymbolicCoeff operator-(SymbolicCoeff a, const SymbolicCoeff &b) { return a -= b; }
  friend SymbolicCoeff operator*(const SymbolicCoeff &a, const SymbolicCoeff &b) {
    SymbolicCoeff r;
    for (const auto &[ea, ca] : a.terms_) {
      for (const auto &[eb, cb] : b.terms_) {
        r.add_term(ea + eb, ca * cb);
      }
    }
    return r;
  }
  SymbolicCoeff &operator*=(const SymbolicCoeff &o) { return *this = *this * o; }

  SymbolicCoeff scaled(const ExactScalar &s) const { return *this * SymbolicCoeff(s); }

  bool operator==(const SymbolicCoeff &o) const { return terms_ == o.terms_; }

  // m = 0 is allowed: any term with a positive mass power vanishes, including
  // its log m factors (m^k log^j m -> 0 for k > 0).
  double evaluate(const SymbolBinding &b) const {
    long double acc = 0;
    for (const auto &[e, c] : terms_) {
      if (b.m == 0.0 && e.m > HalfInt(0)) {
        continue;
      }
      long double t = c.to_double();
      t *= std::pow(static_cast<long double>(b.m), static_cast<long double>(e.m.to_double()));
      t *= std::pow(std::log(static_cast<long double>(b.m)), e.log_m);
      t *= std::pow(static_cast<long double>(b.euler_gamma), e.euler_gamma);
      t *= std::pow(static_cast<long double>(b.log2), e.log2);
      acc += t;
    }
    return static_cast<double>(acc);
  }

  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[e, c] : terms_) {
      if (!first) {
        os << " + ";
      }
      first = false;
      os << "(" << c.str() << ")";
      if (e.m != HalfInt(0)) {
        os << "*m^(" << e.m.str() << ")";
      }
      if (e.log_m != 0) {
        os << "*log(m)^" << e.log_m;
      }
      if (e.euler_gamma != 0) {
        os << "*gamma^" << e.euler_gamma;
      }
      if (e.log2 != 0) {
        os << "*log(2)^" << e.log2;
      }
    }
    return os.str();
  }

private:
  void add_term(const SymbolExponents &e, const ExactScalar &c) {
    if (c.is_zero()) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) {
        terms_.erase(it);
      }
    }
  }

  Terms terms_;
};

inline std::ostream &operator<<(std::ostream &os, const SymbolicCoeff &s) { return os << s.str(); }

} // namespace confamp
