#include <gtest/gtest.h>

#include <random>

#include "confamp/birkhoff.hpp"

using namespace confamp;

namespace {

FeynmanGraph doubled_triangle() {
  FeynmanGraph g = cycle(3);
  g.edges.push_back({0, 1, true});
  return g;
}

std::vector<GraphRef> family() {
  std::vector<GraphRef> out;
  for (const auto &g : generate_graph_family(4, 4, 1)) {
    out.push_back(canonical(g));
  }
  return out;
}

// Poles up to order deg(G), fixed per class.
Character<LaurentSeries> laurent_character(unsigned salt) {
  return Character<LaurentSeries>(
      [salt](const GraphRef &g) {
        std::mt19937 rng(static_cast<unsigned>(std::hash<std::string>{}(g->key())) ^ salt);
        LaurentSeries s;
        for (int e = -g->degree(); e <= 1; ++e) {
          s.add(e, Rational(static_cast<int>(rng() % 13) - 6, static_cast<int>(rng() % 3) + 1));
        }
        return s;
      },
      LaurentSeries::one());
}

Character<LaurentSeries> table_character(std::map<std::string, LaurentSeries> values) {
  return Character<LaurentSeries>([values](const GraphRef &g) { return values.at(g->key()); },
                                  LaurentSeries::one());
}

template <class R> void expect_factorization(const BirkhoffPair<R> &pair, const std::vector<Monomial> &monomials) {
  for (const auto &m : monomials) {
    ASSERT_EQ(recombine(pair, m), pair.phi()(m)) << m.str();
  }
}

template <class R> void expect_multiplicative(const BirkhoffPair<R> &pair, const std::vector<GraphRef> &gens) {
  std::mt19937 rng(99);
  std::vector<Monomial> small = monomials_up_to(gens, 2);
  const auto minus = pair.minus();
  const auto plus = pair.plus();
  int checked = 0;
  while (checked < 200) {
    const Monomial &a = small[rng() % small.size()];
    const Monomial &b = small[rng() % small.size()];
    const Monomial ab = a * b;
    ASSERT_EQ(pair.phi_minus_direct(ab), pair.phi_minus_direct(a) * pair.phi_minus_direct(b)) << ab.str();
    ASSERT_EQ(pair.phi_plus_direct(ab), pair.phi_plus_direct(a) * pair.phi_plus_direct(b)) << ab.str();
    ASSERT_EQ(pair.phi_minus_direct(ab), minus(ab));
    ASSERT_EQ(pair.phi_plus_direct(ab), plus(ab));
    ++checked;
  }
}

} // namespace

TEST(Birkhoff, PrimitiveExample) {
  const GraphRef g = canonical(banana(2));
  const auto pair = birkhoff_factorize(table_character({{g->key(), LaurentSeries::parse("z^-2+3+z")}}),
                                       laurent_target(), 2);
  EXPECT_EQ(pair.phi_minus(g), LaurentSeries::monomial(-2, -1));
  EXPECT_EQ(pair.phi_plus(g).str(), "3+z");
  EXPECT_EQ(renormalized_value(pair, g), polar_subtract(pair.phi()(g)));
}

TEST(Birkhoff, NestedExample) {
  HopfContext probe;
  const GraphRef top = canonical(doubled_triangle());
  const auto &reduced = probe.reduced_terms(top);
  ASSERT_EQ(reduced.size(), 1u);
  const GraphRef sub = reduced.front().first.factors().front();
  const GraphRef quotient = reduced.front().second.factors().front();
  std::map<std::string, LaurentSeries> values{{sub->key(), LaurentSeries::monomial(-1)},
                                              {quotient->key(), LaurentSeries::monomial(-1)},
                                              {top->key(), LaurentSeries::parse("z^-2+3+z")}};
  const auto pair = birkhoff_factorize(table_character(values), laurent_target(), 4);
  EXPECT_EQ(pair.prepared(top).str(), "3+z");
  EXPECT_TRUE(pair.phi_minus(top).is_zero());
  EXPECT_EQ(pair.phi_plus(top).str(), "3+z");
  EXPECT_THROW(birkhoff_factorize(table_character(values), laurent_target(), 2).phi_minus(top), validation_error);
}

TEST(Birkhoff, LaurentFactorizationDegreeFour) {
  const auto gens = family();
  ASSERT_GE(gens.size(), 20u);
  const auto pair = birkhoff_factorize(laurent_character(3), laurent_target(), 4);
  expect_factorization(pair, monomials_up_to(gens, 4));
  for (const auto &g : gens) {
    EXPECT_EQ(laurent_T(pair.phi_minus(g)), pair.phi_minus(g));
    EXPECT_TRUE(laurent_T(pair.phi_plus(g)).is_zero());
  }
  expect_multiplicative(pair, gens);
}

TEST(Birkhoff, LogFormFactorizationDegreeFour) {
  const auto gens = family();
  const auto pair = birkhoff_factorize(toy_feynman_character(4, 4, 17), logform_target(), 4);
  expect_factorization(pair, monomials_up_to(gens, 4));
  int nonzero_counterterms = 0;
  for (const auto &g : gens) {
    EXPECT_EQ(multi_T(pair.phi_minus(g)), pair.phi_minus(g));
    EXPECT_TRUE(multi_T(pair.phi_plus(g)).is_zero());
    nonzero_counterterms += !pair.phi_minus(g).is_zero();
  }
  EXPECT_EQ(nonzero_counterterms, static_cast<int>(gens.size()));
  expect_multiplicative(pair, gens);
}

TEST(Birkhoff, RenormalizedFormsAreResidueFree) {
  const auto gens = family();
  const DivisorIndex divisors(4, 4);
  const auto pair = birkhoff_factorize(toy_feynman_character(4, 4, 5), logform_target(), 4);
  for (const auto &g : gens) {
    const MultiLogForm plus = renormalized_value(pair, g);
    for (int space = 1; space <= 4; ++space) {
      for (int j = 0; j < divisors.size(); ++j) {
        EXPECT_TRUE(residue(plus, space, j).empty()) << g->key();
      }
    }
    // The raw form does carry residues.
    EXPECT_FALSE(polar_divisors(pair.phi()(g)).empty());
  }
}

TEST(ToyCharacter, Deterministic) {
  const auto gens = family();
  const auto a = toy_feynman_character(4, 4, 1);
  const auto b = toy_feynman_character(4, 4, 1);
  const auto c = toy_feynman_character(4, 4, 2);
  int differs = 0;
  for (const auto &g : gens) {
    EXPECT_EQ(a(g), b(g));
    differs += !(a(g) == c(g));
  }
  EXPECT_GT(differs, 0);
  const Monomial m = Monomial(gens[0]) * Monomial(gens[1]);
  EXPECT_EQ(a(m), a(gens[0]) * a(gens[1]));
  EXPECT_THROW(toy_feynman_character(2, 4, 1)(canonical(cycle(3))), validation_error);
  EXPECT_THROW(toy_feynman_character(3, 1, 1)(canonical(cycle(3))), validation_error);
}

TEST(Beta, Examples) {
  auto ctx = std::make_shared<HopfContext>();
  const auto pair = birkhoff_factorize(laurent_character(8), laurent_target(), 4, ctx);
  const auto beta = beta_function(pair, 4);
  EXPECT_TRUE(beta(Monomial()).is_zero());
  for (int k = 2; k <= 4; ++k) {
    const GraphRef g = canonical(banana(k));
    EXPECT_EQ(beta(Monomial(g)), pair.phi_minus(g).scaled(k));
  }
  const auto gens = family();
  const auto minus = pair.minus();
  const auto minus_s = compose_antipode(minus, ctx);
  const Character<LaurentSeries> minus_y(
      [minus](const GraphRef &g) { return minus(g).scaled(g->degree()); }, LaurentSeries::one());
  for (const auto &m : monomials_up_to(gens, 4)) {
    // phi_-(S * Y) written out as a convolution of phi_- o S with phi_- o Y.
    LaurentSeries direct;
    for (const auto &[k, c] : ctx->coproduct(m).terms()) {
      direct += (minus_s(k.first) * minus(k.second).scaled(k.second.degree())).scaled(c);
    }
    EXPECT_EQ(beta(m), direct) << m.str();
    if (m.factors().size() > 1) {
      EXPECT_TRUE(beta(m).is_zero()) << m.str();
    }
  }
}

TEST(UniversalFrame, RoundTripLaurent) {
  auto ctx = std::make_shared<HopfContext>();
  const auto pair = birkhoff_factorize(laurent_character(21), laurent_target(), 4, ctx);
  const auto frame = universal_frame(beta_function(pair, 3), LaurentSeries::one(), 3, ctx);
  EXPECT_EQ(frame(Monomial()), LaurentSeries::one());
  const GraphRef b2 = canonical(banana(2));
  EXPECT_EQ(frame(Monomial(b2)), pair.phi_minus(b2));
  const auto minus = pair.minus();
  for (const auto &m : monomials_up_to(family(), 3)) {
    EXPECT_EQ(frame(m), minus(m)) << m.str();
  }
  EXPECT_THROW(frame(Monomial(canonical(banana(4)))), validation_error);
}

TEST(UniversalFrame, RoundTripLogForm) {
  auto ctx = std::make_shared<HopfContext>();
  const auto pair = birkhoff_factorize(toy_feynman_character(4, 4, 3), logform_target(), 3, ctx);
  const auto frame = universal_frame(beta_function(pair, 3), MultiLogForm::one(), 3, ctx);
  const auto as_char = frame.as_character();
  const auto minus = pair.minus();
  for (const auto &m : monomials_up_to(family(), 3)) {
    EXPECT_EQ(frame(m), minus(m)) << m.str();
    EXPECT_EQ(as_char(m), minus(m));
  }
}
