#pragma once

// JSON encodings for the exact and algebraic types, plus a deterministic
// writer: object keys sorted, floats with 17 significant digits, rationals as
// strings and pi powers as {"pi_half_exp": k, "rational": "q"}.

#include <cmath>
#include <cstdio>
#include <string>

#include "json.hpp"

#include "confamp/amplitude.hpp"
#include "confamp/feyngraph.hpp"
#include "confamp/gegenbauer.hpp"
#include "confamp/hopf.hpp"
#include "confamp/rotabaxter.hpp"

namespace confamp {

using json = nlohmann::json;

namespace detail {

inline void dump_to(const json &j, std::string &out, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char *nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
  case json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    out += nl;
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) { // std::map order: sorted keys
      if (!first) {
        out += ",";
        out += nl;
      }
      first = false;
      out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
      dump_to(it.value(), out, indent, depth + 1);
    }
    out += nl + close_pad + "}";
    return;
  }
  case json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[";
    out += nl;
    bool first = true;
    for (const auto &v : j) {
      if (!first) {
        out += ",";
        out += nl;
      }
      first = false;
      out += pad;
      dump_to(v, out, indent, depth + 1);
    }
    out += nl + close_pad + "]";
    return;
  }
  case json::value_t::number_float: {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      out += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
    return;
  }
  default:
    out += j.dump();
  }
}

} // namespace detail

inline std::string canonical_dump(const json &j, int indent = 2) {
  std::string out;
  detail::dump_to(j, out, indent, 0);
  return out;
}

// --- exact scalars ----------------------------------------------------------

inline json to_json(const Rational &q) { return q.str(); }

inline Rational rational_from_json(const json &j) {
  if (j.is_string()) {
    return parse_rational(j.get<std::string>());
  }
  if (j.is_number_integer()) {
    return Rational(j.get<long long>());
  }
  throw validation_error("expected a rational as a string, got " + j.dump());
}

inline json to_json(const ExactScalar &s) {
  if (s.is_rational()) {
    return s.rational_value().str();
  }
  json arr = json::array();
  for (const auto &[e, q] : s.terms()) {
    arr.push_back({{"pi_half_exp", e}, {"rational", q.str()}});
  }
  return arr;
}

inline ExactScalar exact_from_json(const json &j) {
  if (j.is_string() || j.is_number_integer()) {
    return rational_from_json(j);
  }
  if (!j.is_array()) {
    throw validation_error("expected an exact scalar, got " + j.dump());
  }
  ExactScalar s;
  for (const auto &t : j) {
    if (!t.is_object() || !t.contains("pi_half_exp") || !t.contains("rational")) {
      throw validation_error("exact scalar terms need pi_half_exp and rational");
    }
    s += ExactScalar::monomial(rational_from_json(t.at("rational")),
                               HalfInt::from_twice(t.at("pi_half_exp").get<int>()));
  }
  return s;
}

inline json to_json(const SymbolicCoeff &c) {
  json arr = json::array();
  for (const auto &[e, v] : c.terms()) {
    arr.push_back({{"coeff", to_json(v)},
                   {"m", e.m.str()},
                   {"log_m", e.log_m},
                   {"euler_gamma", e.euler_gamma},
                   {"log2", e.log2}});
  }
  return arr;
}

inline SymbolicCoeff symbolic_from_json(const json &j) {
  if (!j.is_array()) {
    throw validation_error("expected a symbolic coefficient array");
  }
  SymbolicCoeff out;
  for (const auto &t : j) {
    SymbolExponents e;
    e.m = HalfInt::parse(t.value("m", std::string("0")));
    e.log_m = t.value("log_m", 0);
    e.euler_gamma = t.value("euler_gamma", 0);
    e.log2 = t.value("log2", 0);
    out += SymbolicCoeff::term(e, exact_from_json(t.at("coeff")));
  }
  return out;
}

inline json to_json(const GegenCombo &c) {
  json out = json::object();
  for (const auto &[d, v] : c.coeffs) {
    out[std::to_string(d)] = to_json(v);
  }
  return out;
}

inline json to_json(const ExactPoly &p) {
  json out = json::object();
  const auto &c = p.coefficients();
  for (std::size_t d = 0; d < c.size(); ++d) {
    if (!c[d].is_zero()) {
      out[std::to_string(d)] = to_json(c[d]);
    }
  }
  return out;
}

// --- graphs -------------------------------------------------------------------

inline json to_json(const FeynmanGraph &g) {
  json vs = json::array();
  for (const auto &v : g.vertices) {
    vs.push_back({{"id", v.id}, {"external", v.external}});
  }
  json es = json::array();
  for (const auto &e : g.edges) {
    es.push_back({{"src", e.src}, {"tgt", e.tgt}, {"internal", e.internal}});
  }
  json out{{"vertices", vs}, {"edges", es}};
  if (g.theory.max_valence) {
    out["max_valence"] = *g.theory.max_valence;
  }
  return out;
}

// A graph object or a canonical key string.
inline FeynmanGraph graph_from_json(const json &j) {
  if (j.is_string()) {
    return graph_from_key(j.get<std::string>());
  }
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
    throw validation_error("graph needs 'vertices' and 'edges'");
  }
  FeynmanGraph g;
  for (const auto &v : j.at("vertices")) {
    g.vertices.push_back({v.at("id").get<int>(), v.value("external", false)});
  }
  for (const auto &e : j.at("edges")) {
    g.edges.push_back({e.at("src").get<int>(), e.at("tgt").get<int>(), e.value("internal", true)});
  }
  if (j.contains("max_valence")) {
    g.theory.max_valence = j.at("max_valence").get<int>();
  }
  require_valid(g);
  return g;
}

inline std::vector<FeynmanGraph> graphs_from_json(const json &j) {
  std::vector<FeynmanGraph> out;
  if (j.is_array()) {
    for (const auto &g : j) {
      out.push_back(graph_from_json(g));
    }
  } else if (j.is_object() && j.contains("graphs")) {
    return graphs_from_json(j.at("graphs"));
  } else {
    out.push_back(graph_from_json(j));
  }
  return out;
}

inline json to_json(const Monomial &m) {
  json arr = json::array();
  for (const auto &g : m.factors()) {
    arr.push_back(g->key());
  }
  return arr;
}

inline json to_json(const HopfElement &x) {
  json arr = json::array();
  for (const auto &[m, c] : x.terms()) {
    arr.push_back({{"monomial", to_json(m)}, {"coeff", to_json(c)}});
  }
  return arr;
}

inline json to_json(const TensorElement &x) {
  json arr = json::array();
  for (const auto &[k, c] : x.terms()) {
    arr.push_back({{"left", to_json(k.first)}, {"right", to_json(k.second)}, {"coeff", to_json(c)}});
  }
  return arr;
}

// --- Rota-Baxter values ---------------------------------------------------------

inline json to_json(const LaurentSeries &s) { return s.str(); }

inline LaurentSeries laurent_from_json(const json &j) {
  if (j.is_string()) {
    return LaurentSeries::parse(j.get<std::string>());
  }
  if (j.is_number_integer()) {
    return LaurentSeries(Rational(j.get<long long>()));
  }
  throw validation_error("expected a Laurent series string, got " + j.dump());
}

inline json to_json(const LogForm &f) {
  json polar = json::array();
  json regular = json::array();
  for (const auto &[J, c] : f.polar_part()) {
    polar.push_back({{"J", J}, {"coeff", to_json(c)}});
  }
  for (const auto &[vars, c] : f.regular_part()) {
    regular.push_back({{"vars", vars}, {"coeff", to_json(c)}});
  }
  return {{"space", f.space()}, {"divisors", f.divisor_count()}, {"polar", polar}, {"regular", regular}};
}

inline LogForm logform_from_json(const json &j) {
  LogForm f(j.at("space").get<int>(), j.at("divisors").get<int>());
  for (const auto &t : j.value("polar", json::array())) {
    f.add_polar(t.at("J").get<std::vector<int>>(), exact_from_json(t.at("coeff")));
  }
  for (const auto &t : j.value("regular", json::array())) {
    f.add_regular(t.at("vars").get<std::vector<int>>(), exact_from_json(t.at("coeff")));
  }
  return f;
}

inline json to_json(const MultiLogForm &x) {
  json arr = json::array();
  for (const auto &[b, c] : x.terms()) {
    json factors = json::array();
    for (const auto &[n, f] : b) {
      factors.push_back({{"space", n}, {"polar", f.polar}, {"indices", f.indices}});
    }
    arr.push_back({{"coeff", to_json(c)}, {"factors", factors}});
  }
  return arr;
}

inline MultiLogForm multilogform_from_json(const json &j) {
  if (!j.is_array()) {
    throw validation_error("expected an array of tensor monomials");
  }
  MultiLogForm out;
  for (const auto &t : j) {
    MultiLogForm::Basis b;
    for (const auto &f : t.at("factors")) {
      LogBasis lb{f.at("polar").get<bool>(), f.at("indices").get<std::vector<int>>()};
      std::sort(lb.indices.begin(), lb.indices.end());
      if (lb.polar && (lb.indices.empty() || lb.indices.size() % 2 != 0)) {
        throw validation_error("polar factors need a nonempty even index set");
      }
      if (!b.emplace(f.at("space").get<int>(), lb).second) {
        throw validation_error("tensor monomial repeats a space label");
      }
      if (lb.is_unit()) {
        b.erase(f.at("space").get<int>());
      }
    }
    out.add(b, exact_from_json(t.at("coeff")));
  }
  return out;
}

inline json to_json(const DivisorLabel &l) {
  json out{{"kind", l.kind == DivisorLabel::Kind::diagonal ? "diagonal" : "boundary"}, {"set", l.set}};
  if (l.kind == DivisorLabel::Kind::boundary) {
    out["point"] = l.point == 0 ? json("inf") : json(l.point);
  }
  return out;
}

} // namespace confamp
