#pragma once

// Even log-form algebra over abstract divisor labels.
//
// A LogForm on one space is a combination of basis elements of two kinds:
//   polar    dlog_J = dlog f_{j1} ^ ... ^ dlog f_{jr}, J sorted, |J| even > 0
//   regular  monomials f_{i1} f_{i2} ... in the divisor-restriction variables
// Polar coefficients are constants. A regular factor multiplying a polar one is
// restricted to the divisor stratum, which in this model means evaluation at
// f = 0: only the constant monomial survives. Polar forms span an ideal and the
// regular polynomials a unital subalgebra, so T (projection onto the polar
// span) is Rota-Baxter of weight -1.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confamp/errors.hpp"
#include "confamp/exact.hpp"

namespace confamp {

struct LogBasis {
  bool polar = false;
  std::vector<int> indices; // sorted; distinct for polar, a multiset for regular

  static LogBasis unit() { return {}; }
  bool is_unit() const { return !polar && indices.empty(); }
  auto operator<=>(const LogBasis &) const = default;

  std::string str() const {
    if (is_unit()) {
      return "1";
    }
    std::string s = polar ? "dlog{" : "f{";
    for (std::size_t i = 0; i < indices.size(); ++i) {
      s += (i ? "," : "") + std::to_string(indices[i]);
    }
    return s + "}";
  }
};

namespace detail {

// Sign of the permutation sorting the concatenation a ++ b (both sorted, disjoint).
inline int merge_sign(const std::vector<int> &a, const std::vector<int> &b) {
  long inversions = 0;
  std::size_t j = 0;
  for (int x : a) {
    while (j < b.size() && b[j] < x) {
      ++j;
    }
    inversions += static_cast<long>(j);
  }
  return inversions % 2 ? -1 : 1;
}

// Product of two basis elements as sign * basis, or nothing when it vanishes.
inline std::optional<std::pair<int, LogBasis>> basis_product(const LogBasis &a, const LogBasis &b) {
  if (a.polar && b.polar) {
    std::vector<int> both;
    std::set_intersection(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
                          std::back_inserter(both));
    if (!both.empty()) {
      return std::nullopt;
    }
    LogBasis r{true, {}};
    std::merge(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
               std::back_inserter(r.indices));
    return std::pair{merge_sign(a.indices, b.indices), std::move(r)};
  }
  if (a.polar || b.polar) {
    const LogBasis &reg = a.polar ? b : a;
    if (!reg.indices.empty()) {
      return std::nullopt;
    }
    return std::pair{1, a.polar ? a : b};
  }
  LogBasis r{false, {}};
  std::merge(a.indices.begin(), a.indices.end(), b.indices.begin(), b.indices.end(),
             std::back_inserter(r.indices));
  return std::pair{1, std::move(r)};
}

} // namespace detail

class LogForm {
public:
  using Terms = std::map<LogBasis, ExactScalar>;

  LogForm() = default;
  LogForm(int space, int divisor_count) : space_(space), divisors_(divisor_count) {
    if (space < 0 || divisor_count < 0) {
      throw validation_error("log form needs a space label and divisor count >= 0");
    }
  }

  static LogForm constant(int space, int divisor_count, const ExactScalar &c) {
    LogForm f(space, divisor_count);
    f.add(LogBasis::unit(), c);
    return f;
  }
  static LogForm polar_monomial(int space, int divisor_count, std::vector<int> J, const ExactScalar &c) {
    LogForm f(space, divisor_count);
    f.add_polar(std::move(J), c);
    return f;
  }

  int space() const { return space_; }
  int divisor_count() const { return divisors_; }
  const Terms &terms() const & { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }

  std::map<std::vector<int>, ExactScalar> polar_part() const {
    std::map<std::vector<int>, ExactScalar> out;
    for (const auto &[b, c] : terms_) {
      if (b.polar) {
        out.emplace(b.indices, c);
      }
    }
    return out;
  }
  std::map<std::vector<int>, ExactScalar> regular_part() const {
    std::map<std::vector<int>, ExactScalar> out;
    for (const auto &[b, c] : terms_) {
      if (!b.polar) {
        out.emplace(b.indices, c);
      }
    }
    return out;
  }

  void add_polar(std::vector<int> J, const ExactScalar &c) {
    std::sort(J.begin(), J.end());
    if (J.empty() || J.size() % 2 != 0) {
      throw validation_error("polar index set must be nonempty with even size");
    }
    if (std::adjacent_find(J.begin(), J.end()) != J.end()) {
      throw validation_error("polar index set has a repeated divisor");
    }
    check_indices(J);
    add(LogBasis{true, std::move(J)}, c);
  }
  void add_regular(std::vector<int> vars, const ExactScalar &c) {
    std::sort(vars.begin(), vars.end());
    check_indices(vars);
    add(LogBasis{false, std::move(vars)}, c);
  }

  void add(const LogBasis &b, const ExactScalar &c) {
    if (c.is_zero()) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(b, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) {
        terms_.erase(it);
      }
    }
  }

  LogForm &operator+=(const LogForm &o) {
    adopt(o);
    for (const auto &[b, c] : o.terms_) {
      add(b, c);
    }
    return *this;
  }
  LogForm &operator-=(const LogForm &o) {
    adopt(o);
    for (const auto &[b, c] : o.terms_) {
      add(b, -c);
    }
    return *this;
  }
  friend LogForm operator+(LogForm a, const LogForm &b) { return a += b; }
  friend LogForm operator-(LogForm a, const LogForm &b) { return a -= b; }
  friend LogForm operator*(const LogForm &a, const LogForm &b);

  LogForm scaled(const ExactScalar &q) const {
    LogForm r = empty_like();
    for (const auto &[b, c] : terms_) {
      r.add(b, c * q);
    }
    return r;
  }
  LogForm scaled(const Rational &q) const { return scaled(ExactScalar(q)); }

  bool operator==(const LogForm &o) const {
    return terms_ == o.terms_ && (terms_.empty() || space_ == o.space_);
  }

  LogForm empty_like() const {
    LogForm r;
    r.space_ = space_;
    r.divisors_ = divisors_;
    return r;
  }

  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::string s;
    for (const auto &[b, c] : terms_) {
      s += (s.empty() ? "" : " + ") + std::string("(") + c.str() + ")" +
           (b.is_unit() ? "" : "*" + b.str());
    }
    return s;
  }

private:
  void check_indices(const std::vector<int> &idx) const {
    for (int j : idx) {
      if (j < 0 || j >= divisors_) {
        throw validation_error("divisor index " + std::to_string(j) + " outside the label set of size " +
                               std::to_string(divisors_));
      }
    }
  }
  // A default-constructed zero takes the label of whatever it meets.
  void adopt(const LogForm &o) {
    if (space_ < 0) {
      space_ = o.space_;
      divisors_ = o.divisors_;
    } else if (o.space_ >= 0 && o.space_ != space_) {
      throw validation_error("log forms live on different spaces (" + std::to_string(space_) + " vs " +
                             std::to_string(o.space_) + ")");
    } else {
      divisors_ = std::max(divisors_, o.divisors_);
    }
  }

  int space_ = -1;
  int divisors_ = 0;
  Terms terms_;
};

inline LogForm operator*(const LogForm &a, const LogForm &b) {
  LogForm r = a.empty_like();
  r.adopt(b);
  for (const auto &[ba, ca] : a.terms_) {
    for (const auto &[bb, cb] : b.terms_) {
      if (auto p = detail::basis_product(ba, bb)) {
        r.add(p->second, (ca * cb).scaled(p->first));
      }
    }
  }
  return r;
}

inline LogForm logform_wedge(const LogForm &a, const LogForm &b) { return a * b; }

inline LogForm logform_T(const LogForm &a) {
  LogForm r = a.empty_like();
  for (const auto &[b, c] : a.terms()) {
    if (b.polar) {
      r.add(b, c);
    }
  }
  return r;
}

inline LogForm polar_subtract(const LogForm &a) { return a - logform_T(a); }

// Residue combinations: remaining dlog index set (any parity) -> coefficient.
using ResidueForm = std::map<std::vector<int>, ExactScalar>;

// Res along D_j of c*dlog_J: bring dlog_j to the front, then drop it.
inline ResidueForm residue(const ResidueForm &form, int j) {
  ResidueForm out;
  for (const auto &[J, c] : form) {
    auto it = std::find(J.begin(), J.end(), j);
    if (it == J.end()) {
      continue;
    }
    const auto pos = it - J.begin();
    std::vector<int> rest(J.begin(), it);
    rest.insert(rest.end(), it + 1, J.end());
    ExactScalar v = pos % 2 ? -c : c;
    auto [slot, inserted] = out.try_emplace(rest, v);
    if (!inserted) {
      slot->second += v;
      if (slot->second.is_zero()) {
        out.erase(slot);
      }
    }
  }
  return out;
}

inline ResidueForm residue(const LogForm &eta, int j) { return residue(ResidueForm(eta.polar_part()), j); }

// Iterated residue along D_J, taken in increasing index order.
inline ResidueForm iterated_residue(const LogForm &eta, const std::vector<int> &J) {
  ResidueForm cur = eta.polar_part();
  std::vector<int> sorted = J;
  std::sort(sorted.begin(), sorted.end());
  for (int j : sorted) {
    cur = residue(cur, j);
  }
  return cur;
}

// sum_j dlog_j ^ Res_j(eta), computed literally from the residues.
inline LogForm dlog_residue_sum(const LogForm &eta) {
  LogForm out = eta.empty_like();
  for (int j = 0; j < eta.divisor_count(); ++j) {
    for (const auto &[rest, c] : residue(eta, j)) {
      std::vector<int> J = rest;
      J.insert(std::lower_bound(J.begin(), J.end(), j), j);
      const int sign = detail::merge_sign({j}, rest);
      out.add(LogBasis{true, J}, c.scaled(sign));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products over several spaces: tensor monomials with one factor per space.

class MultiLogForm {
public:
  using Basis = std::map<int, LogBasis>; // space -> non-unit factor
  using Terms = std::map<Basis, ExactScalar>;

  MultiLogForm() = default;
  explicit MultiLogForm(const LogForm &f) {
    for (const auto &[b, c] : f.terms()) {
      Basis key;
      if (!b.is_unit()) {
        key.emplace(f.space(), b);
      }
      add(key, c);
    }
  }
  MultiLogForm(const Rational &c) { add({}, ExactScalar(c)); } // NOLINT
  MultiLogForm(int c) : MultiLogForm(Rational(c)) {}           // NOLINT
  static MultiLogForm one() { return MultiLogForm(1); }

  const Terms &terms() const & { return terms_; }
  Terms terms() && { return std::move(terms_); }
  bool is_zero() const { return terms_.empty(); }

  void add(const Basis &b, const ExactScalar &c) {
    if (c.is_zero()) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(b, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) {
        terms_.erase(it);
      }
    }
  }

  MultiLogForm &operator+=(const MultiLogForm &o) {
    for (const auto &[b, c] : o.terms_) {
      add(b, c);
    }
    return *this;
  }
  MultiLogForm &operator-=(const MultiLogForm &o) {
    for (const auto &[b, c] : o.terms_) {
      add(b, -c);
    }
    return *this;
  }
  friend MultiLogForm operator+(MultiLogForm a, const MultiLogForm &b) { return a += b; }
  friend MultiLogForm operator-(MultiLogForm a, const MultiLogForm &b) { return a -= b; }
  MultiLogForm operator-() const { return scaled(Rational(-1)); }

  friend MultiLogForm operator*(const MultiLogForm &a, const MultiLogForm &b) {
    MultiLogForm r;
    for (const auto &[ba, ca] : a.terms_) {
      for (const auto &[bb, cb] : b.terms_) {
        if (auto p = basis_product(ba, bb)) {
          r.add(p->second, (ca * cb).scaled(p->first));
        }
      }
    }
    return r;
  }

  MultiLogForm scaled(const Rational &q) const {
    MultiLogForm r;
    for (const auto &[b, c] : terms_) {
      r.add(b, c.scaled(q));
    }
    return r;
  }

  bool operator==(const MultiLogForm &o) const { return terms_ == o.terms_; }

  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::string s;
    for (const auto &[b, c] : terms_) {
      s += (s.empty() ? "" : " + ") + std::string("(") + c.str() + ")";
      for (const auto &[n, f] : b) {
        s += "*" + f.str() + "@" + std::to_string(n);
      }
    }
    return s;
  }

  static std::optional<std::pair<int, Basis>> basis_product(const Basis &a, const Basis &b) {
    Basis r = a;
    int sign = 1;
    for (const auto &[n, f] : b) {
      auto it = r.find(n);
      if (it == r.end()) {
        r.emplace(n, f);
        continue;
      }
      auto p = detail::basis_product(it->second, f);
      if (!p) {
        return std::nullopt;
      }
      sign *= p->first;
      if (p->second.is_unit()) {
        r.erase(it);
      } else {
        it->second = std::move(p->second);
      }
    }
    return std::pair{sign, std::move(r)};
  }

private:
  Terms terms_;
};

inline bool has_polar_factor(const MultiLogForm::Basis &b) {
  return std::any_of(b.begin(), b.end(), [](const auto &kv) { return kv.second.polar; });
}

// id - (x)_i (id - T_i): a tensor monomial survives iff some factor is polar.
inline MultiLogForm multi_T(const MultiLogForm &a) {
  MultiLogForm r;
  for (const auto &[b, c] : a.terms()) {
    if (has_polar_factor(b)) {
      r.add(b, c);
    }
  }
  return r;
}

// Same operator built by peeling off one factor at a time:
// T(e1 ^ e2) = T1 e1 ^ e2 + e1 ^ T e2 - T1 e1 ^ T e2.
inline MultiLogForm multi_T_recursive(const MultiLogForm &a) {
  MultiLogForm r;
  for (const auto &[b, c] : a.terms()) {
    if (b.empty()) {
      continue;
    }
    auto first = b.begin();
    MultiLogForm e1;
    e1.add({{first->first, first->second}}, c);
    MultiLogForm t1;
    if (first->second.polar) {
      t1 = e1;
    }
    MultiLogForm::Basis tail(std::next(first), b.end());
    MultiLogForm e2;
    e2.add(tail, 1);
    const MultiLogForm t2 = multi_T_recursive(e2);
    r += t1 * e2 + e1 * t2 - t1 * t2;
  }
  return r;
}

inline MultiLogForm polar_subtract(const MultiLogForm &a) { return a - multi_T(a); }

// Residue along divisor j of the factor living on space n.
inline std::map<MultiLogForm::Basis, ExactScalar> residue(const MultiLogForm &a, int space, int j) {
  std::map<MultiLogForm::Basis, ExactScalar> out;
  for (const auto &[b, c] : a.terms()) {
    auto it = b.find(space);
    if (it == b.end() || !it->second.polar) {
      continue;
    }
    const auto &J = it->second.indices;
    auto pos = std::find(J.begin(), J.end(), j);
    if (pos == J.end()) {
      continue;
    }
    MultiLogForm::Basis rest = b;
    LogBasis reduced{true, {}};
    for (int x : J) {
      if (x != j) {
        reduced.indices.push_back(x);
      }
    }
    if (reduced.indices.empty()) {
      rest.erase(space);
    } else {
      rest[space] = reduced;
    }
    ExactScalar v = (pos - J.begin()) % 2 ? -c : c;
    auto [slot, inserted] = out.try_emplace(rest, v);
    if (!inserted) {
      slot->second += v;
      if (slot->second.is_zero()) {
        out.erase(slot);
      }
    }
  }
  return out;
}

// Every (space, divisor) pair with a polar factor somewhere in a.
inline std::vector<std::pair<int, int>> polar_divisors(const MultiLogForm &a) {
  std::vector<std::pair<int, int>> out;
  for (const auto &[b, c] : a.terms()) {
    for (const auto &[n, f] : b) {
      if (f.polar) {
        for (int j : f.indices) {
          out.emplace_back(n, j);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Divisor labels of the compactified configuration space with n internal and
// k external points: boundary components (c, S) for c in {1..k} or infinity,
// S a nonempty subset of {1..n}, and diagonals I with |I| > 1.

struct DivisorLabel {
  enum class Kind { boundary, diagonal };
  Kind kind = Kind::boundary;
  int point = 0; // 1..k for an external point, 0 for infinity (boundary only)
  std::vector<int> set;

  auto operator<=>(const DivisorLabel &) const = default;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < set.size(); ++i) {
      s += (i ? "," : "") + std::to_string(set[i]);
    }
    if (kind == Kind::diagonal) {
      return "I{" + s + "}";
    }
    return "(" + (point == 0 ? std::string("inf") : std::to_string(point)) + ",{" + s + "})";
  }
};

inline std::vector<DivisorLabel> divisor_labels(int n, int k) {
  if (n < 1 || k < 0) {
    throw validation_error("divisor labels need n >= 1 and k >= 0");
  }
  if (n > 20) {
    throw validation_error("too many vertices for divisor enumeration");
  }
  std::vector<std::vector<int>> subsets;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        s.push_back(i + 1);
      }
    }
    subsets.push_back(std::move(s));
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto &a, const auto &b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<DivisorLabel> out;
  for (int c = 1; c <= k; ++c) {
    for (const auto &s : subsets) {
      out.push_back({DivisorLabel::Kind::boundary, c, s});
    }
  }
  for (const auto &s : subsets) {
    out.push_back({DivisorLabel::Kind::boundary, 0, s});
  }
  for (const auto &s : subsets) {
    if (s.size() > 1) {
      out.push_back({DivisorLabel::Kind::diagonal, 0, s});
    }
  }
  return out;
}

inline std::size_t divisor_label_count(int n, int k) {
  const std::size_t p = std::size_t{1} << n;
  return static_cast<std::size_t>(k + 1) * (p - 1) + (p - static_cast<std::size_t>(n) - 1);
}

} // namespace confamp
