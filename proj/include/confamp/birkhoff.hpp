#pragma once

// Birkhoff factorization of characters into a weight -1 Rota-Baxter algebra,
// beta functional and the universal frame that inverts it.

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>

#include "confamp/hopf.hpp"
#include "confamp/rotabaxter.hpp"

namespace confamp {

template <class R> struct RotaBaxterTarget {
  std::string name;
  std::function<R(const R &)> T;
  R unit;
};

inline RotaBaxterTarget<LaurentSeries> laurent_target() { return {"laurent", laurent_T, LaurentSeries::one()}; }

inline RotaBaxterTarget<MultiLogForm> logform_target() {
  return {"logform", [](const MultiLogForm &x) { return multi_T(x); }, MultiLogForm::one()};
}

// phi_- and phi_+ on generators, filled lazily by the Connes-Kreimer recursion
//   prepared(G) = phi(G) + sum phi_-(gamma) phi(G/gamma)
//   phi_-(G) = -T(prepared(G)),  phi_+(G) = (1 - T)(prepared(G)).
template <class R> class BirkhoffPair {
public:
  BirkhoffPair(Character<R> phi, RotaBaxterTarget<R> target, int up_to_degree,
               std::shared_ptr<HopfContext> ctx = std::make_shared<HopfContext>())
      : state_(std::make_shared<State>(State{std::move(phi), std::move(target), up_to_degree, std::move(ctx), {}})) {
    if (up_to_degree < 0) {
      throw validation_error("factorization degree must be >= 0");
    }
  }

  int max_degree() const { return state_->max_degree; }
  const Character<R> &phi() const { return state_->phi; }
  const RotaBaxterTarget<R> &target() const { return state_->target; }
  const std::shared_ptr<HopfContext> &context() const { return state_->ctx; }

  R prepared(const GraphRef &g) const { return entry(g).prepared; }
  R phi_minus(const GraphRef &g) const { return entry(g).minus; }
  R phi_plus(const GraphRef &g) const { return entry(g).plus; }

  Character<R> minus() const {
    auto s = state_;
    return Character<R>([s](const GraphRef &g) { return lookup(*s, g).minus; }, s->target.unit);
  }
  Character<R> plus() const {
    auto s = state_;
    return Character<R>([s](const GraphRef &g) { return lookup(*s, g).plus; }, s->target.unit);
  }

  // The same recursion run on a whole monomial through its own coproduct; used
  // to test multiplicativity rather than assume it.
  R phi_minus_direct(const Monomial &m) const { return direct(m).first; }
  R phi_plus_direct(const Monomial &m) const { return direct(m).second; }

private:
  struct Entry {
    R prepared;
    R minus;
    R plus;
  };
  struct State {
    Character<R> phi;
    RotaBaxterTarget<R> target;
    int max_degree;
    std::shared_ptr<HopfContext> ctx;
    std::map<std::string, Entry> memo;
  };

  const Entry &entry(const GraphRef &g) const { return lookup(*state_, g); }

  static R minus_of(State &s, const Monomial &m) {
    R acc = s.target.unit;
    for (const auto &f : m.factors()) {
      acc = acc * lookup(s, f).minus;
    }
    return acc;
  }

  static const Entry &lookup(State &s, const GraphRef &g) {
    auto it = s.memo.find(g->key());
    if (it != s.memo.end()) {
      return it->second;
    }
    if (g->degree() > s.max_degree) {
      throw validation_error("graph degree " + std::to_string(g->degree()) + " exceeds factorization degree " +
                             std::to_string(s.max_degree));
    }
    R prep = s.phi(g);
    for (const auto &[sub, quotient] : s.ctx->reduced_terms(g)) {
      prep = prep + minus_of(s, sub) * s.phi(quotient);
    }
    const R pole = s.target.T(prep);
    Entry e{prep, scale_by(pole, Rational(-1)), prep - pole};
    return s.memo.emplace(g->key(), std::move(e)).first->second;
  }

  std::pair<R, R> direct(const Monomial &m) const {
    State &s = *state_;
    if (m.is_unit()) {
      return {s.target.unit, s.target.unit};
    }
    if (m.degree() > s.max_degree) {
      throw validation_error("monomial degree exceeds factorization degree");
    }
    R prep = s.phi(m);
    for (const auto &[k, c] : s.ctx->coproduct(m).terms()) {
      if (k.first.is_unit() || k.second.is_unit()) {
        continue;
      }
      prep = prep + scale_by(phi_minus_direct(k.first) * s.phi(k.second), c);
    }
    const R pole = s.target.T(prep);
    return {scale_by(pole, Rational(-1)), prep - pole};
  }

  std::shared_ptr<State> state_;
};

template <class R>
BirkhoffPair<R> birkhoff_factorize(const Character<R> &phi, const RotaBaxterTarget<R> &target, int up_to_degree,
                                   std::shared_ptr<HopfContext> ctx = std::make_shared<HopfContext>()) {
  return BirkhoffPair<R>(phi, target, up_to_degree, std::move(ctx));
}

template <class R> R renormalized_value(const BirkhoffPair<R> &pair, const GraphRef &g) { return pair.phi_plus(g); }

// (phi_- o S) * phi_+ evaluated on a monomial; equals phi when the factorization holds.
template <class R> R recombine(const BirkhoffPair<R> &pair, const Monomial &m) {
  const auto inverse = compose_antipode(pair.minus(), pair.context());
  return convolve(inverse, pair.plus(), HopfElement(m), *pair.context());
}

// ---------------------------------------------------------------------------
// Beta functional and universal frame.

template <class R> class LinearFunctional {
public:
  using Fn = std::function<R(const Monomial &)>;
  explicit LinearFunctional(Fn fn) : fn_(std::move(fn)) {}
  R operator()(const Monomial &m) const { return fn_(m); }
  R operator()(const HopfElement &x) const {
    R acc{};
    for (const auto &[m, c] : x.terms()) {
      acc = acc + scale_by(fn_(m), c);
    }
    return acc;
  }

private:
  Fn fn_;
};

// beta(x) = phi_-(D x), D = S * Y the Dynkin operator.
template <class R> LinearFunctional<R> beta_function(const BirkhoffPair<R> &pair, int up_to_degree) {
  if (up_to_degree > pair.max_degree()) {
    throw validation_error("beta requested beyond the factorization degree");
  }
  const auto minus = pair.minus();
  const auto ctx = pair.context();
  return LinearFunctional<R>([minus, ctx, up_to_degree](const Monomial &m) {
    if (m.degree() > up_to_degree) {
      throw validation_error("beta requested beyond its degree bound");
    }
    return minus(ctx->dynkin(HopfElement(m)));
  });
}

// Values of
//   sum_{n >= 0, k_i > 0} beta_{k1} * ... * beta_{kn} / (k1 (k1 + k2) ... (k1 + ... + kn))
// on monomials, beta_k being the degree-k part of beta. Only compositions of
// deg(x) contribute, so each value is a finite sum.
template <class R> class UniversalFrame {
public:
  UniversalFrame(LinearFunctional<R> beta, R unit, int up_to_degree,
                 std::shared_ptr<HopfContext> ctx = std::make_shared<HopfContext>())
      : beta_(std::move(beta)), unit_(std::move(unit)), max_degree_(up_to_degree), ctx_(std::move(ctx)) {}

  R operator()(const Monomial &m) const {
    if (m.degree() > max_degree_) {
      throw validation_error("universal frame requested beyond its degree bound");
    }
    if (m.is_unit()) {
      return unit_;
    }
    R acc{};
    std::vector<int> parts;
    std::function<void(int)> compositions = [&](int left) {
      if (left == 0) {
        Rational weight = 1;
        int partial = 0;
        for (int k : parts) {
          partial += k;
          weight /= partial;
        }
        acc = acc + scale_by(chain(parts, parts.size(), m), weight);
        return;
      }
      for (int k = 1; k <= left; ++k) {
        parts.push_back(k);
        compositions(left - k);
        parts.pop_back();
      }
    };
    compositions(m.degree());
    return acc;
  }

  Character<R> as_character() const {
    auto self = std::make_shared<UniversalFrame<R>>(*this);
    return Character<R>([self](const GraphRef &g) { return (*self)(Monomial(g)); }, unit_);
  }

private:
  // (beta_{k1} * ... * beta_{kn})(x) with n = count, peeling off the last factor.
  R chain(const std::vector<int> &parts, std::size_t count, const Monomial &x) const {
    if (count == 0) {
      return x.is_unit() ? unit_ : R{};
    }
    const int k = parts[count - 1];
    R acc{};
    for (const auto &[t, c] : ctx_->coproduct(x).terms()) {
      if (t.second.degree() != k) {
        continue;
      }
      acc = acc + scale_by(chain(parts, count - 1, t.first) * beta_(t.second), c);
    }
    return acc;
  }

  LinearFunctional<R> beta_;
  R unit_;
  int max_degree_;
  std::shared_ptr<HopfContext> ctx_;
};

template <class R>
UniversalFrame<R> universal_frame(const LinearFunctional<R> &beta, const R &unit, int up_to_degree,
                                  std::shared_ptr<HopfContext> ctx = std::make_shared<HopfContext>()) {
  return UniversalFrame<R>(beta, unit, up_to_degree, std::move(ctx));
}

// ---------------------------------------------------------------------------
// A deterministic stand-in for the form attached to each graph. Each graph
// lives on the space labelled by its internal vertex count. Its polar part
// pairs the diagonal of its own vertex set with the diagonal of every
// admissible component and with the boundary at infinity; coefficients and a
// small regular part come from a generator seeded by the rule seed and the
// canonical key.

namespace detail {

inline std::uint64_t fnv1a(const std::string &s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace detail

class DivisorIndex {
public:
  DivisorIndex(int n_vertices, int k_external)
      : n_(n_vertices), k_(k_external), labels_(divisor_labels(n_vertices, k_external)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      index_.emplace(labels_[i], static_cast<int>(i));
    }
  }
  int vertex_bound() const { return n_; }
  int external_bound() const { return k_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<DivisorLabel> &labels() const { return labels_; }

  int diagonal(const std::vector<int> &vertices) const {
    return find({DivisorLabel::Kind::diagonal, 0, vertices});
  }
  int boundary(int point, const std::vector<int> &vertices) const {
    return find({DivisorLabel::Kind::boundary, point, vertices});
  }

private:
  int find(const DivisorLabel &l) const {
    auto it = index_.find(l);
    if (it == index_.end()) {
      throw validation_error("divisor " + l.str() + " is not in the label set");
    }
    return it->second;
  }

  int n_;
  int k_;
  std::vector<DivisorLabel> labels_;
  std::map<DivisorLabel, int> index_;
};

inline LogForm toy_graph_form(const GraphRef &g, const DivisorIndex &divisors, std::uint64_t seed) {
  const FeynmanGraph &graph = g->graph();
  std::map<int, int> position; // internal vertex id -> 1-based label
  int legs = 0;
  for (const auto &v : graph.vertices) {
    if (v.external) {
      ++legs;
    }
  }
  std::vector<int> ids;
  for (const auto &v : graph.vertices) {
    if (!v.external) {
      ids.push_back(v.id);
    }
  }
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    position[ids[i]] = static_cast<int>(i) + 1;
  }
  const int n = static_cast<int>(ids.size());
  if (n > divisors.vertex_bound() || legs > divisors.external_bound()) {
    throw validation_error("divisor set too small for graph " + g->key() + " (needs " + std::to_string(n) +
                           " vertices, " + std::to_string(legs) + " external)");
  }
  std::mt19937_64 rng(detail::fnv1a(g->key(), seed));
  auto coeff = [&rng]() {
    std::uniform_int_distribution<int> num(1, 9);
    std::uniform_int_distribution<int> den(1, 4);
    return Rational(rng() % 2 ? num(rng) : -num(rng), den(rng));
  };
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) {
    all[i] = i + 1;
  }
  const int whole = divisors.diagonal(all);
  LogForm form(n, divisors.size());
  form.add_polar({whole, divisors.boundary(0, all)}, coeff());
  std::set<std::vector<int>> seen;
  for (const auto &sub : admissible_subgraphs(graph)) {
    for (const auto &comp : sub.components) {
      std::vector<int> verts;
      for (int e : comp) {
        verts.push_back(position.at(graph.edges[e].src));
        verts.push_back(position.at(graph.edges[e].tgt));
      }
      std::sort(verts.begin(), verts.end());
      verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
      if (verts.size() < 2 || verts == all || !seen.insert(verts).second) {
        continue;
      }
      form.add_polar({divisors.diagonal(verts), whole}, coeff());
    }
  }
  form.add_regular({}, coeff());
  form.add_regular({whole}, coeff());
  return form;
}

inline Character<MultiLogForm> toy_feynman_character(int n_vertices, int k_external, std::uint64_t rule_seed) {
  auto divisors = std::make_shared<const DivisorIndex>(n_vertices, k_external);
  return Character<MultiLogForm>(
      [divisors, rule_seed](const GraphRef &g) { return MultiLogForm(toy_graph_form(g, *divisors, rule_seed)); },
      MultiLogForm::one());
}

} // namespace confamp
