#pragma once

// Laurent polynomials in z over Q with T = projection onto the polar part.

#include <cctype>
#include <map>
#include <sstream>
#include <string>

#include "confamp/errors.hpp"
#include "confamp/exact.hpp"

namespace confamp {

class LaurentSeries {
public:
  using Terms = std::map<int, Rational>;

  LaurentSeries() = default;
  LaurentSeries(const Rational &c) { add(0, c); } // NOLINT
  LaurentSeries(int c) { add(0, Rational(c)); }   // NOLINT

  static LaurentSeries monomial(int exponent, const Rational &c = 1) {
    LaurentSeries s;
    s.add(exponent, c);
    return s;
  }
  static LaurentSeries one() { return LaurentSeries(1); }

  const Terms &terms() const & { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  int min_exponent() const {
    if (terms_.empty()) {
      throw validation_error("zero series has no lowest exponent");
    }
    return terms_.begin()->first;
  }

  void add(int e, const Rational &c) {
    if (c == 0) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) {
        terms_.erase(it);
      }
    }
  }

  LaurentSeries &operator+=(const LaurentSeries &o) {
    for (const auto &[e, c] : o.terms_) {
      add(e, c);
    }
    return *this;
  }
  LaurentSeries &operator-=(const LaurentSeries &o) {
    for (const auto &[e, c] : o.terms_) {
      add(e, -c);
    }
    return *this;
  }
  friend LaurentSeries operator+(LaurentSeries a, const LaurentSeries &b) { return a += b; }
  friend LaurentSeries operator-(LaurentSeries a, const LaurentSeries &b) { return a -= b; }
  LaurentSeries operator-() const { return scaled(-1); }
  friend LaurentSeries operator*(const LaurentSeries &a, const LaurentSeries &b) {
    LaurentSeries r;
    for (const auto &[ea, ca] : a.terms_) {
      for (const auto &[eb, cb] : b.terms_) {
        r.add(ea + eb, ca * cb);
      }
    }
    return r;
  }
  LaurentSeries scaled(const Rational &q) const {
    LaurentSeries r;
    for (const auto &[e, c] : terms_) {
      r.add(e, c * q);
    }
    return r;
  }

  // Drop every term above z^max_exponent.
  LaurentSeries truncated(int max_exponent) const {
    LaurentSeries r;
    for (const auto &[e, c] : terms_) {
      if (e <= max_exponent) {
        r.add(e, c);
      }
    }
    return r;
  }

  bool operator==(const LaurentSeries &o) const { return terms_ == o.terms_; }

  // "2*z^-2+3+z", increasing exponents; "0" for zero.
  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::string out;
    for (const auto &[e, c] : terms_) {
      std::string term;
      if (e == 0) {
        term = c.str();
      } else {
        if (c == 1) {
          term = "";
        } else if (c == -1) {
          term = "-";
        } else {
          term = c.str() + "*";
        }
        term += e == 1 ? "z" : "z^" + std::to_string(e);
      }
      if (!out.empty() && term.front() != '-') {
        out += "+";
      }
      out += term;
    }
    return out;
  }

  // Inverse of str(); also accepts "2z^-2" and spaces.
  static LaurentSeries parse(const std::string &text) {
    std::string s;
    for (char ch : text) {
      if (!std::isspace(static_cast<unsigned char>(ch))) {
        s += ch;
      }
    }
    if (s.empty()) {
      throw validation_error("empty Laurent series");
    }
    LaurentSeries out;
    std::size_t i = 0;
    auto fail = [&]() { throw validation_error("cannot parse Laurent series '" + text + "'"); };
    while (i < s.size()) {
      int sign = 1;
      if (s[i] == '+' || s[i] == '-') {
        sign = s[i] == '-' ? -1 : 1;
        ++i;
      }
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) {
        ++j;
      }
      Rational c = 1;
      const bool has_number = j > i;
      if (has_number) {
        c = parse_rational(s.substr(i, j - i));
      }
      i = j;
      int e = 0;
      if (i < s.size() && s[i] == '*') {
        ++i;
        if (i >= s.size() || s[i] != 'z') {
          fail();
        }
      }
      if (i < s.size() && s[i] == 'z') {
        ++i;
        e = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          std::size_t k = i;
          if (k < s.size() && (s[k] == '-' || s[k] == '+')) {
            ++k;
          }
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
            ++k;
          }
          if (k == i) {
            fail();
          }
          e = std::stoi(s.substr(i, k - i));
          i = k;
        }
      } else if (!has_number) {
        fail();
      }
      if (i < s.size() && s[i] != '+' && s[i] != '-') {
        fail();
      }
      out.add(e, c * sign);
    }
    return out;
  }

private:
  Terms terms_;
};

inline std::ostream &operator<<(std::ostream &os, const LaurentSeries &s) { return os << s.str(); }

// Projection onto the strictly negative powers.
inline LaurentSeries laurent_T(const LaurentSeries &s) {
  LaurentSeries r;
  for (const auto &[e, c] : s.terms()) {
    if (e < 0) {
      r.add(e, c);
    }
  }
  return r;
}

inline LaurentSeries polar_subtract(const LaurentSeries &s) { return s - laurent_T(s); }

} // namespace confamp
