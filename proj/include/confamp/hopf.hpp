#pragma once

// The Connes-Kreimer Hopf algebra over Q: the free commutative algebra on
// isomorphism classes of 1PI graphs, with
//   Delta(G) = G (x) 1 + 1 (x) G + sum_gamma gamma (x) G/gamma
// over admissible subgraphs, the antipode, convolution of characters, the
// grading derivation Y and the Dynkin operator S * Y.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "confamp/errors.hpp"
#include "confamp/exact.hpp"
#include "confamp/feyngraph.hpp"

namespace confamp {

// A product of generators, kept sorted by canonical key. Empty = unit.
class Monomial {
public:
  Monomial() = default;
  explicit Monomial(GraphRef g) { factors_.push_back(std::move(g)); }
  explicit Monomial(std::vector<GraphRef> fs) : factors_(std::move(fs)) { sort(); }

  const std::vector<GraphRef> &factors() const { return factors_; }
  bool is_unit() const { return factors_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto &g : factors_) {
      d += g->degree();
    }
    return d;
  }

  friend Monomial operator*(const Monomial &a, const Monomial &b) {
    std::vector<GraphRef> fs = a.factors_;
    fs.insert(fs.end(), b.factors_.begin(), b.factors_.end());
    return Monomial(std::move(fs));
  }

  friend bool operator<(const Monomial &a, const Monomial &b) {
    return std::lexicographical_compare(a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end(),
                                        GraphRefLess{});
  }
  friend bool operator==(const Monomial &a, const Monomial &b) { return !(a < b) && !(b < a); }

  std::string str() const {
    if (factors_.empty()) {
      return "1";
    }
    std::string s;
    for (const auto &g : factors_) {
      s += "[" + g->key() + "]";
    }
    return s;
  }

private:
  void sort() { std::sort(factors_.begin(), factors_.end(), GraphRefLess{}); }

  std::vector<GraphRef> factors_;
};

namespace detail {

template <class Key> class LinearCombination {
public:
  using Terms = std::map<Key, Rational>;

  const Terms &terms() const & { return terms_; }
  Terms terms() && { return std::move(terms_); } // safe in range-for over temporaries
  bool is_zero() const { return terms_.empty(); }

  void add(const Key &k, const Rational &c) {
    if (c == 0) {
      return;
    }
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) {
        terms_.erase(it);
      }
    }
  }

  Rational coefficient(const Key &k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

protected:
  Terms terms_;
};

} // namespace detail

class HopfElement : public detail::LinearCombination<Monomial> {
public:
  HopfElement() = default;
  HopfElement(const Monomial &m, const Rational &c = 1) { add(m, c); } // NOLINT

  static HopfElement unit() { return HopfElement(Monomial()); }

  HopfElement &operator+=(const HopfElement &o) {
    for (const auto &[m, c] : o.terms_) {
      add(m, c);
    }
    return *this;
  }
  HopfElement &operator-=(const HopfElement &o) {
    for (const auto &[m, c] : o.terms_) {
      add(m, -c);
    }
    return *this;
  }
  friend HopfElement operator+(HopfElement a, const HopfElement &b) { return a += b; }
  friend HopfElement operator-(HopfElement a, const HopfElement &b) { return a -= b; }
  friend HopfElement operator*(const HopfElement &a, const HopfElement &b) {
    HopfElement r;
    for (const auto &[ma, ca] : a.terms_) {
      for (const auto &[mb, cb] : b.terms_) {
        r.add(ma * mb, ca * cb);
      }
    }
    return r;
  }
  HopfElement scaled(const Rational &q) const {
    HopfElement r;
    for (const auto &[m, c] : terms_) {
      r.add(m, c * q);
    }
    return r;
  }
  bool operator==(const HopfElement &o) const { return terms_ == o.terms_; }

  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[m, c] : terms_) {
      os << (first ? "" : " + ") << c.str() << "*" << m.str();
      first = false;
    }
    return os.str();
  }
};

using MonomialPair = std::pair<Monomial, Monomial>;

class TensorElement : public detail::LinearCombination<MonomialPair> {
public:
  TensorElement &operator+=(const TensorElement &o) {
    for (const auto &[k, c] : o.terms_) {
      add(k, c);
    }
    return *this;
  }
  friend TensorElement operator+(TensorElement a, const TensorElement &b) { return a += b; }
  friend TensorElement operator*(const TensorElement &a, const TensorElement &b) {
    TensorElement r;
    for (const auto &[ka, ca] : a.terms_) {
      for (const auto &[kb, cb] : b.terms_) {
        r.add({ka.first * kb.first, ka.second * kb.second}, ca * cb);
      }
    }
    return r;
  }
  bool operator==(const TensorElement &o) const { return terms_ == o.terms_; }

  std::string str() const {
    if (terms_.empty()) {
      return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto &[k, c] : terms_) {
      os << (first ? "" : " + ") << c.str() << "*" << k.first.str() << "(x)" << k.second.str();
      first = false;
    }
    return os.str();
  }
};

// Degree-3 tensors for coassociativity checks.
using MonomialTriple = std::tuple<Monomial, Monomial, Monomial>;

class Tensor3Element : public detail::LinearCombination<MonomialTriple> {
public:
  using detail::LinearCombination<MonomialTriple>::add;
  bool operator==(const Tensor3Element &o) const { return terms_ == o.terms_; }
};

// A generator: the isomorphism class of a 1PI graph with at least one internal edge.
inline Monomial generator(const FeynmanGraph &g) {
  const auto r = check_1pi(g);
  if (!r.value) {
    throw validation_error("Hopf generators must be 1PI: " + r.reason);
  }
  if (degree(g) < 1) {
    throw validation_error("Hopf generators need at least one internal edge");
  }
  return Monomial(canonical(g));
}

// Counit: the coefficient of the unit monomial.
inline Rational epsilon(const HopfElement &x) { return x.coefficient(Monomial()); }

// Memo tables for coproducts and antipodes of generators. Values depend only on
// the canonical key, so a context can be reused across calls; it is not
// thread-safe.
class HopfContext {
public:
  // gamma (x) G/gamma for the admissible subgraphs of a generator.
  const std::vector<MonomialPair> &reduced_terms(const GraphRef &g) {
    auto it = reduced_.find(g->key());
    if (it != reduced_.end()) {
      return it->second;
    }
    std::vector<MonomialPair> terms;
    const FeynmanGraph &graph = g->graph();
    for (const auto &sub : admissible_subgraphs(graph)) {
      std::vector<GraphRef> pieces;
      for (const auto &comp : sub.components) {
        pieces.push_back(canonical(component_graph(graph, comp)));
      }
      terms.push_back({Monomial(std::move(pieces)), Monomial(canonical(contract(graph, sub)))});
    }
    return reduced_.emplace(g->key(), std::move(terms)).first->second;
  }

  TensorElement coproduct(const GraphRef &g) {
    TensorElement t;
    t.add({Monomial(g), Monomial()}, 1);
    t.add({Monomial(), Monomial(g)}, 1);
    for (const auto &term : reduced_terms(g)) {
      t.add(term, 1);
    }
    return t;
  }

  TensorElement coproduct(const Monomial &m) {
    TensorElement t;
    t.add({Monomial(), Monomial()}, 1);
    for (const auto &g : m.factors()) {
      t = t * coproduct(g);
    }
    return t;
  }

  TensorElement coproduct(const HopfElement &x) {
    TensorElement out;
    for (const auto &[m, c] : x.terms()) {
      for (const auto &[k, v] : coproduct(m).terms()) {
        out.add(k, v * c);
      }
    }
    return out;
  }

  // S(G) = -G - sum S(gamma) G/gamma over the reduced coproduct.
  HopfElement antipode(const GraphRef &g) {
    auto it = antipode_.find(g->key());
    if (it != antipode_.end()) {
      return it->second;
    }
    HopfElement s = HopfElement(Monomial(g), -1);
    for (const auto &[sub, quotient] : reduced_terms(g)) {
      s -= antipode(sub) * HopfElement(quotient);
    }
    return antipode_.emplace(g->key(), s).first->second;
  }

  HopfElement antipode(const Monomial &m) {
    HopfElement s = HopfElement::unit();
    for (const auto &g : m.factors()) {
      s = s * antipode(g);
    }
    return s;
  }

  HopfElement antipode(const HopfElement &x) {
    HopfElement out;
    for (const auto &[m, c] : x.terms()) {
      out += antipode(m).scaled(c);
    }
    return out;
  }

  // m (f (x) g) Delta for linear maps H -> H given on monomials.
  template <class F, class G> HopfElement convolve_maps(F &&f, G &&g, const HopfElement &x) {
    HopfElement out;
    for (const auto &[k, c] : coproduct(x).terms()) {
      out += (f(k.first) * g(k.second)).scaled(c);
    }
    return out;
  }

  // Dynkin operator S * Y.
  HopfElement dynkin(const HopfElement &x);

private:
  std::map<std::string, std::vector<MonomialPair>> reduced_;
  std::map<std::string, HopfElement> antipode_;
};

// Y: multiply each monomial by its degree.
inline HopfElement grading_op(const HopfElement &x) {
  HopfElement out;
  for (const auto &[m, c] : x.terms()) {
    out.add(m, c * m.degree());
  }
  return out;
}

inline HopfElement HopfContext::dynkin(const HopfElement &x) {
  return convolve_maps([this](const Monomial &m) { return antipode(m); },
                       [](const Monomial &m) { return grading_op(HopfElement(m)); }, x);
}

inline TensorElement coproduct(const HopfElement &x) {
  HopfContext ctx;
  return ctx.coproduct(x);
}

inline HopfElement antipode(const HopfElement &x) {
  HopfContext ctx;
  return ctx.antipode(x);
}

inline HopfElement dynkin(const HopfElement &x) {
  HopfContext ctx;
  return ctx.dynkin(x);
}

// (Delta (x) id) Delta and (id (x) Delta) Delta.
inline Tensor3Element coproduct_left_then(HopfContext &ctx, const Monomial &m) {
  Tensor3Element out;
  for (const auto &[k, c] : ctx.coproduct(m).terms()) {
    for (const auto &[k2, c2] : ctx.coproduct(k.first).terms()) {
      out.add({k2.first, k2.second, k.second}, c * c2);
    }
  }
  return out;
}

inline Tensor3Element coproduct_right_then(HopfContext &ctx, const Monomial &m) {
  Tensor3Element out;
  for (const auto &[k, c] : ctx.coproduct(m).terms()) {
    for (const auto &[k2, c2] : ctx.coproduct(k.second).terms()) {
      out.add({k.first, k2.first, k2.second}, c * c2);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Characters: unital algebra maps H -> R into a commutative algebra R, given by
// their values on generators. R needs +, *, a default-constructed zero and
// scale_by(R, Rational).

inline Rational scale_by(const Rational &r, const Rational &c) { return r * c; }
template <class R> R scale_by(const R &r, const Rational &c) { return r.scaled(c); }

template <class R> class Character {
public:
  using Fn = std::function<R(const GraphRef &)>;

  Character(Fn on_generators, R unit) : fn_(std::move(on_generators)), unit_(std::move(unit)) {}

  const R &unit() const { return unit_; }
  R operator()(const GraphRef &g) const { return fn_(g); }

  R operator()(const Monomial &m) const {
    R acc = unit_;
    for (const auto &g : m.factors()) {
      acc = acc * fn_(g);
    }
    return acc;
  }

  R operator()(const HopfElement &x) const {
    R acc{};
    for (const auto &[m, c] : x.terms()) {
      acc = acc + scale_by((*this)(m), c);
    }
    return acc;
  }

private:
  Fn fn_;
  R unit_;
};

// The counit as a character: 1 on the unit, 0 on every generator.
template <class R> Character<R> counit_character(R unit) {
  return Character<R>([](const GraphRef &) { return R{}; }, std::move(unit));
}

// <phi1 (x) phi2, Delta x>
template <class R> R convolve(const Character<R> &phi1, const Character<R> &phi2, const HopfElement &x, HopfContext &ctx) {
  R acc{};
  for (const auto &[k, c] : ctx.coproduct(x).terms()) {
    acc = acc + scale_by(phi1(k.first) * phi2(k.second), c);
  }
  return acc;
}

template <class R> R convolve(const Character<R> &phi1, const Character<R> &phi2, const HopfElement &x) {
  HopfContext ctx;
  return convolve(phi1, phi2, x, ctx);
}

// phi o S, again a character.
template <class R> Character<R> compose_antipode(const Character<R> &phi, std::shared_ptr<HopfContext> ctx) {
  return Character<R>([phi, ctx](const GraphRef &g) { return phi(ctx->antipode(g)); }, phi.unit());
}

// All monomials of total degree in [1, max_degree] built from the given
// generators (with repetition), sorted.
inline std::vector<Monomial> monomials_up_to(const std::vector<GraphRef> &generators, int max_degree) {
  std::vector<Monomial> out;
  std::vector<GraphRef> gens = generators;
  std::sort(gens.begin(), gens.end(), GraphRefLess{});
  std::vector<GraphRef> current;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int degree_left) {
    if (!current.empty()) {
      out.emplace_back(current);
    }
    for (std::size_t i = start; i < gens.size(); ++i) {
      const int d = gens[i]->degree();
      if (d <= degree_left) {
        current.push_back(gens[i]);
        rec(i, degree_left - d);
        current.pop_back();
      }
    }
  };
  rec(0, max_degree);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace confamp
