// BPHZ-style renormalization of a graph with one divergent subgraph, using
// Laurent series in the regulator and minimal subtraction.

#include <iostream>

#include "confamp/birkhoff.hpp"

using namespace confamp;

int main() {
  // A triangle with one edge doubled: the doubled edge is a divergent subgraph.
  FeynmanGraph g = cycle(3);
  g.edges.push_back({0, 1, true});
  const GraphRef top = canonical(g);

  auto ctx = std::make_shared<HopfContext>();
  std::cout << "coproduct of " << top->key() << ":\n";
  for (const auto &[k, c] : ctx->coproduct(Monomial(top)).terms()) {
    std::cout << "  " << c << " * " << k.first.str() << " (x) " << k.second.str() << "\n";
  }

  std::map<std::string, LaurentSeries> values{{top->key(), LaurentSeries::parse("z^-2+3+z")}};
  for (const auto &[sub, quotient] : ctx->reduced_terms(top)) {
    for (const auto &f : sub.factors()) {
      values.emplace(f->key(), LaurentSeries::monomial(-1));
    }
    for (const auto &f : quotient.factors()) {
      values.emplace(f->key(), LaurentSeries::monomial(-1));
    }
  }
  const Character<LaurentSeries> phi([values](const GraphRef &x) { return values.at(x->key()); },
                                     LaurentSeries::one());
  const auto pair = birkhoff_factorize(phi, laurent_target(), top->degree(), ctx);
  std::cout << "phi      = " << pair.phi()(top).str() << "\n";
  std::cout << "phi_-    = " << pair.phi_minus(top).str() << "\n";
  std::cout << "phi_+    = " << pair.phi_plus(top).str() << "\n";
  std::cout << "recombined equals phi: " << std::boolalpha
            << (recombine(pair, Monomial(top)) == pair.phi()(top)) << "\n";
}
