#pragma once

// Command-line front end. Every subcommand reads JSON or flags and writes one
// deterministic JSON document.
//
// Exit codes: 0 success, 2 invalid input, 3 numeric non-convergence, 64 usage.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "confamp/birkhoff.hpp"
#include "confamp/json_io.hpp"
#include "confamp/propagators.hpp"

namespace confamp::cli {

enum ExitCode : int { ok = 0, invalid_input = 2, not_converged = 3, usage = 64 };

inline constexpr const char *config_env_var = "CONFAMP_CONFIG";

struct Config {
  BesselEvalConfig bessel{};
  HalfLineQuadrature quadrature{};
  GegenOrders gegen{};
  int taylor_terms = 20;
  int asymptotic_terms = 6;

  // "section.key" = number, e.g. "gegen.radial=40".
  void set(const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw validation_error("config override must look like key=value: " + assignment);
    }
    const std::string key = assignment.substr(0, eq);
    double v = 0;
    try {
      std::size_t used = 0;
      v = std::stod(assignment.substr(eq + 1), &used);
      if (used != assignment.size() - eq - 1) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception &) {
      throw validation_error("config value for " + key + " is not a number");
    }
    apply(key, v);
  }

  void apply(const std::string &key, double v) {
    auto as_int = [&]() {
      if (v != std::floor(v)) {
        throw validation_error(key + " must be an integer");
      }
      return static_cast<int>(v);
    };
    if (key == "bessel.series_terms") {
      bessel.series_terms = as_int();
    } else if (key == "bessel.asymptotic_terms") {
      bessel.asymptotic_terms = as_int();
    } else if (key == "bessel.crossover_z") {
      bessel.crossover_z = v;
    } else if (key == "quadrature.tolerance") {
      quadrature.tolerance = v;
    } else if (key == "quadrature.truncation") {
      quadrature.truncation = v;
    } else if (key == "quadrature.initial_step") {
      quadrature.initial_step = v;
    } else if (key == "quadrature.max_halvings") {
      quadrature.max_halvings = as_int();
    } else if (key == "gegen.radial") {
      gegen.radial = as_int();
    } else if (key == "gegen.degree") {
      gegen.degree = as_int();
    } else if (key == "taylor_terms") {
      taylor_terms = as_int();
    } else if (key == "asymptotic_terms") {
      asymptotic_terms = as_int();
    } else {
      throw validation_error("unknown config key " + key);
    }
  }

  void merge(const json &j, const std::string &prefix = "") {
    if (!j.is_object()) {
      throw validation_error("config must be a JSON object");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object()) {
        merge(*it, key);
      } else if (it->is_number()) {
        apply(key, it->get<double>());
      } else {
        throw validation_error("config entry " + key + " must be numeric");
      }
    }
  }

  void validate() const {
    bessel.validate();
    gegen.validate();
    if (taylor_terms < 1 || asymptotic_terms < 1) {
      throw validation_error("term counts must be positive");
    }
    if (!(quadrature.tolerance > 0) || !(quadrature.truncation > 0) || !(quadrature.initial_step > 0) ||
        quadrature.max_halvings < 1) {
      throw validation_error("quadrature settings must be positive");
    }
  }
};

inline std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("cannot read " + path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
inline json load_payload(const std::string &arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  const bool inline_json = first != std::string::npos && (arg[first] == '{' || arg[first] == '[');
  const std::string text = inline_json ? arg : read_file(arg);
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw validation_error(std::string("malformed JSON: ") + e.what());
  }
}

namespace detail {

inline HalfInt parse_half(const std::string &s, const char *what) {
  try {
    return HalfInt::parse(s);
  } catch (const validation_error &) {
    throw;
  } catch (const std::exception &) {
    throw validation_error(std::string("bad ") + what + ": " + s);
  }
}

inline HalfInt expansion_lambda(int D, const std::string &kase, const std::string &lambda) {
  if (!lambda.empty()) {
    return parse_half(lambda, "lambda");
  }
  return kase == "complex" ? complex_case_lambda(D) : real_case_lambda(D);
}

// Generators behind the input graphs plus every piece reachable through
// reduced coproducts.
inline std::vector<GraphRef> closure(HopfContext &ctx, const std::vector<GraphRef> &roots) {
  std::map<std::string, GraphRef> seen;
  std::vector<GraphRef> stack = roots;
  while (!stack.empty()) {
    GraphRef g = stack.back();
    stack.pop_back();
    if (!seen.emplace(g->key(), g).second) {
      continue;
    }
    for (const auto &[sub, quotient] : ctx.reduced_terms(g)) {
      for (const auto &f : sub.factors()) {
        stack.push_back(f);
      }
      for (const auto &f : quotient.factors()) {
        stack.push_back(f);
      }
    }
  }
  std::vector<GraphRef> out;
  for (auto &[k, g] : seen) {
    out.push_back(g);
  }
  return out;
}

inline std::vector<GraphRef> input_generators(const json &payload) {
  std::vector<GraphRef> out;
  for (const auto &g : graphs_from_json(payload)) {
    out.push_back(generator(g).factors().front());
  }
  return out;
}

inline std::pair<int, int> graph_size(const GraphRef &g) {
  int internal = 0;
  int legs = 0;
  for (const auto &v : g->graph().vertices) {
    (v.external ? legs : internal) += 1;
  }
  return {internal, legs};
}

} // namespace detail

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
  CLI::App app{"Configuration-space amplitudes, Gegenbauer expansions and Hopf-algebraic renormalization."};
  app.name("confamp");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_path;
  app.add_option("--config", config_path, "JSON config file (default: $" + std::string(config_env_var) + ")");
  app.add_option("--set", overrides, "numeric override, e.g. gegen.radial=40");
  app.add_option("-o,--output", output_path, "write JSON here instead of stdout");

  Config cfg;
  std::function<json()> action;

  // prop-eval
  auto *pe = app.add_subcommand("prop-eval", "evaluate a propagator kernel");
  int pe_D = 4;
  double pe_m = 1;
  double pe_r = 1;
  std::vector<double> pe_x;
  std::string pe_case = "real";
  std::string pe_method = "direct";
  pe->add_option("--D", pe_D, "dimension")->required();
  pe->add_option("--m", pe_m, "mass (0 selects the massless kernel)");
  pe->add_option("--r", pe_r, "separation |x|");
  pe->add_option("--x", pe_x, "separation vector (overrides --r)")->delimiter(',');
  pe->add_option("--case", pe_case, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  pe->add_option("--method", pe_method, "direct or integral")->check(CLI::IsMember({"direct", "integral"}));
  pe->callback([&]() {
    action = [&]() {
      Kinematics k = pe_x.empty() ? Kinematics::radial(pe_D, pe_r, pe_m) : Kinematics{pe_D, pe_x, pe_m};
      json res{{"D", pe_D}, {"m", pe_m}, {"r", k.norm()}, {"case", pe_case}, {"method", pe_method}};
      if (pe_method == "integral") {
        if (pe_case == "complex") {
          throw validation_error("the integral representation is only available for the real case");
        }
        const QuadratureResult q = gm_integral(k, cfg.quadrature);
        res["value"] = q.value;
        res["error_estimate"] = q.error_estimate;
      } else if (pe_m == 0) {
        if (pe_case == "complex") {
          const PhasedValue v = g0_complex(k);
          res["value"] = {{"magnitude", v.magnitude}, {"sign", v.sign}, {"i_power", v.i_power}};
        } else {
          res["value"] = g0_real(k);
        }
      } else {
        res["value"] = pe_case == "complex" ? gm_complex(k, cfg.bessel) : gm_real(k, cfg.bessel);
      }
      return res;
    };
  });

  // prop-expand
  auto *px = app.add_subcommand("prop-expand", "series coefficients of one propagator");
  std::string px_kind = "taylor";
  int px_D = 4;
  std::string px_case = "real";
  std::string px_lambda;
  int px_terms = 0;
  std::string px_ell;
  double px_m = -1;
  double px_r = -1;
  px->add_option("--kind", px_kind, "taylor, asymptotic or gegenbauer")
      ->check(CLI::IsMember({"taylor", "asymptotic", "gegenbauer"}));
  px->add_option("--D", px_D, "dimension");
  px->add_option("--case", px_case, "real or complex")->check(CLI::IsMember({"real", "complex"}));
  px->add_option("--lambda", px_lambda, "Bessel order (overrides --D/--case)");
  px->add_option("--terms", px_terms, "number of terms (default from config)");
  px->add_option("--ell", px_ell, "term index for the Gegenbauer expansion");
  px->add_option("--m", px_m, "mass, to also report the truncated sum");
  px->add_option("--r", px_r, "distance, to also report the truncated sum");
  px->callback([&]() {
    action = [&]() {
      const HalfInt lambda = detail::expansion_lambda(px_D, px_case, px_lambda);
      json res{{"kind", px_kind}, {"lambda", lambda.str()}};
      const bool numeric = px_m >= 0 && px_r > 0;
      if (px_kind == "taylor") {
        const int count = px_terms > 0 ? px_terms : cfg.taylor_terms;
        json terms = json::array();
        for (const auto &spec : taylor_terms(lambda, count)) {
          const TaylorCoefficient c = taylor_term_coefficient(spec, lambda);
          terms.push_back({{"ell", spec.ell.str()},
                           {"branch", spec.branch == TaylorBranch::power ? "power" : "power_log"},
                           {"constant", to_json(c.constant_part)},
                           {"log_r", to_json(c.log_r_part)}});
        }
        res["terms"] = terms;
        if (numeric) {
          res["sum"] = taylor_sum(lambda, px_m, px_r, count);
        }
      } else if (px_kind == "asymptotic") {
        const int count = px_terms > 0 ? px_terms : cfg.asymptotic_terms;
        json terms = json::array();
        for (int l = 0; l < count; ++l) {
          const AsymptoticTerm t = asymptotic_term_coefficient(l, lambda);
          terms.push_back({{"l", l},
                           {"coeff", to_json(t.coeff)},
                           {"sqrt2_power", t.sqrt2_power},
                           {"r_exponent", t.r_exponent.str()}});
        }
        res["terms"] = terms;
        if (numeric) {
          if (!(px_m > 0)) {
            throw validation_error("the asymptotic sum needs m > 0");
          }
          res["sum"] = asymptotic_sum(lambda, px_m, px_r, count);
        }
      } else {
        if (px_ell.empty()) {
          throw validation_error("--ell is required for the Gegenbauer expansion");
        }
        const TaylorTermSpec spec = TaylorTermSpec::at(detail::parse_half(px_ell, "ell"));
        const GegenExpansion e = edge_gegenbauer_expansion(spec, lambda, cfg.gegen);
        auto tensor = [](const std::map<std::pair<int, int>, SymbolicCoeff> &t) {
          json arr = json::array();
          for (const auto &[key, c] : t) {
            arr.push_back({{"n", key.first}, {"d", key.second}, {"coeff", to_json(c)}});
          }
          return arr;
        };
        res["ell"] = spec.ell.str();
        res["radial"] = e.orders.radial;
        res["degree"] = e.orders.degree_cap();
        res["plain"] = tensor(e.plain);
        res["log_rho"] = tensor(e.log_rho);
      }
      return res;
    };
  });

  // gegen
  auto *gg = app.add_subcommand("gegen", "exact Gegenbauer basis operations");
  std::string gg_op;
  int gg_m = 0;
  int gg_n = 0;
  std::string gg_lambda = "1";
  std::string gg_ell = "0";
  double gg_x = 0;
  gg->add_option("--op", gg_op, "monomial, chebyshev, reproject, product, coeffs or value")
      ->required()
      ->check(CLI::IsMember({"monomial", "chebyshev", "reproject", "product", "coeffs", "value"}));
  gg->add_option("--m", gg_m, "monomial degree, or second factor degree for product");
  gg->add_option("--n", gg_n, "polynomial degree");
  gg->add_option("--lambda", gg_lambda, "weight (half-integer)");
  gg->add_option("--ell", gg_ell, "exponent for reproject");
  gg->add_option("--x", gg_x, "point for value");
  gg->callback([&]() {
    action = [&]() -> json {
      const HalfInt lambda = detail::parse_half(gg_lambda, "lambda");
      if (gg_op == "monomial") {
        return to_json(monomial_to_gegenbauer(gg_m, lambda));
      }
      if (gg_op == "chebyshev") {
        return to_json(chebyshev_to_gegenbauer(gg_n, lambda));
      }
      if (gg_op == "reproject") {
        return to_json(reproject_gegenbauer(detail::parse_half(gg_ell, "ell"), gg_n, lambda));
      }
      if (gg_op == "product") {
        return to_json(product_linearize(gg_n, gg_m, lambda));
      }
      if (gg_op == "coeffs") {
        return to_json(gegenbauer_coeffs(PolySpec{lambda, gg_n, false}));
      }
      confamp::detail::require_weight(lambda);
      if (gg_n < 0) {
        throw validation_error("polynomial degree must be non-negative");
      }
      return json{{"value", gegenbauer_value(lambda.to_double(), gg_n, gg_x)}};
    };
  });

  // graph-coproduct / graph-antipode
  std::string graphs_arg;
  auto *gc = app.add_subcommand("graph-coproduct", "coproduct of 1PI graphs");
  gc->add_option("--graphs", graphs_arg, "graph JSON (file or inline)")->required();
  gc->callback([&]() {
    action = [&]() {
      HopfContext ctx;
      json arr = json::array();
      for (const auto &g : detail::input_generators(load_payload(graphs_arg))) {
        arr.push_back({{"key", g->key()},
                       {"degree", g->degree()},
                       {"reduced_terms", ctx.reduced_terms(g).size()},
                       {"coproduct", to_json(ctx.coproduct(g))}});
      }
      return json{{"graphs", arr}};
    };
  });
  auto *ga = app.add_subcommand("graph-antipode", "antipode of 1PI graphs");
  ga->add_option("--graphs", graphs_arg, "graph JSON (file or inline)")->required();
  ga->callback([&]() {
    action = [&]() {
      HopfContext ctx;
      json arr = json::array();
      for (const auto &g : detail::input_generators(load_payload(graphs_arg))) {
        arr.push_back({{"key", g->key()}, {"degree", g->degree()}, {"antipode", to_json(ctx.antipode(g))}});
      }
      return json{{"graphs", arr}};
    };
  });

  // renorm / beta
  std::string target = "laurent";
  std::string phi_arg;
  int n_vertices = 0;
  int k_external = -1;
  std::uint64_t seed = 1;
  auto add_renorm_options = [&](CLI::App *sub) {
    sub->add_option("--graphs", graphs_arg, "graph JSON (file or inline)")->required();
    sub->add_option("--target", target, "laurent or logform")->check(CLI::IsMember({"laurent", "logform"}));
    sub->add_option("--phi", phi_arg, "Laurent values: array aligned with --graphs or object keyed by canonical key");
    sub->add_option("--n-vertices", n_vertices, "vertex bound of the divisor labels (logform)");
    sub->add_option("--k-external", k_external, "external bound of the divisor labels (logform)");
    sub->add_option("--seed", seed, "rule seed of the toy form assignment (logform)");
  };

  // Runs f with a factorization of the requested target over the closure of
  // the input graphs.
  auto with_pair = [&](auto &&f) -> json {
    auto ctx = std::make_shared<HopfContext>();
    const json payload = load_payload(graphs_arg);
    const std::vector<GraphRef> roots = detail::input_generators(payload);
    const std::vector<GraphRef> all = detail::closure(*ctx, roots);
    int degree = 0;
    for (const auto &g : all) {
      degree = std::max(degree, g->degree());
    }
    if (target == "laurent") {
      if (phi_arg.empty()) {
        throw validation_error("--phi is required for the laurent target");
      }
      const json phi_json = load_payload(phi_arg);
      std::map<std::string, LaurentSeries> values;
      if (phi_json.is_array()) {
        if (phi_json.size() != roots.size()) {
          throw validation_error("--phi array must have one entry per input graph");
        }
        for (std::size_t i = 0; i < roots.size(); ++i) {
          const LaurentSeries v = laurent_from_json(phi_json[i]);
          auto [it, inserted] = values.emplace(roots[i]->key(), v);
          if (!inserted && !(it->second == v)) {
            throw validation_error("isomorphic input graphs were given different values");
          }
        }
      } else if (phi_json.is_object()) {
        for (auto it = phi_json.begin(); it != phi_json.end(); ++it) {
          values.emplace(canonical(graph_from_key(it.key()))->key(), laurent_from_json(it.value()));
        }
      } else {
        throw validation_error("--phi must be an array or an object");
      }
      for (const auto &g : all) {
        if (!values.count(g->key())) {
          throw validation_error("no phi value for graph class " + g->key());
        }
      }
      Character<LaurentSeries> phi([values](const GraphRef &g) { return values.at(g->key()); },
                                   LaurentSeries::one());
      return f(birkhoff_factorize(phi, laurent_target(), degree, ctx), roots);
    }
    int nv = n_vertices;
    int ke = k_external;
    for (const auto &g : all) {
      const auto [internal, legs] = detail::graph_size(g);
      if (n_vertices == 0) {
        nv = std::max(nv, internal);
      }
      if (k_external < 0) {
        ke = std::max(ke, legs);
      }
    }
    return f(birkhoff_factorize(toy_feynman_character(nv, ke, seed), logform_target(), degree, ctx), roots);
  };

  auto *rn = app.add_subcommand("renorm", "Birkhoff factorization: counterterms and renormalized values");
  add_renorm_options(rn);
  rn->callback([&]() {
    action = [&]() {
      return with_pair([&](const auto &pair, const std::vector<GraphRef> &roots) {
        json arr = json::array();
        for (const auto &g : roots) {
          arr.push_back({{"key", g->key()},
                         {"degree", g->degree()},
                         {"phi", to_json(pair.phi()(g))},
                         {"phi_minus", to_json(pair.phi_minus(g))},
                         {"phi_plus", to_json(renormalized_value(pair, g))}});
        }
        return json{{"target", target}, {"graphs", arr}};
      });
    };
  });

  auto *bt = app.add_subcommand("beta", "beta functional phi_- o D and the universal-frame check");
  add_renorm_options(bt);
  bt->callback([&]() {
    action = [&]() {
      return with_pair([&](const auto &pair, const std::vector<GraphRef> &roots) {
        using R = std::decay_t<decltype(pair.phi()(roots.front()))>;
        const auto beta = beta_function(pair, pair.max_degree());
        const auto frame = universal_frame(beta, pair.target().unit, pair.max_degree(), pair.context());
        json arr = json::array();
        for (const auto &g : roots) {
          const Monomial m(g);
          const R b = beta(m);
          arr.push_back({{"key", g->key()},
                         {"degree", g->degree()},
                         {"beta", to_json(b)},
                         {"frame_matches_phi_minus", frame(m) == pair.phi_minus(g)}});
        }
        return json{{"target", target}, {"graphs", arr}};
      });
    };
  });

  // divisors
  auto *dv = app.add_subcommand("divisors", "divisor labels for n internal and k external points");
  int dv_n = 1;
  int dv_k = 0;
  dv->add_option("--n", dv_n, "internal points")->required();
  dv->add_option("--k", dv_k, "external points");
  dv->callback([&]() {
    action = [&]() {
      const auto labels = divisor_labels(dv_n, dv_k);
      json arr = json::array();
      for (const auto &l : labels) {
        arr.push_back(to_json(l));
      }
      return json{{"n", dv_n}, {"k", dv_k}, {"count", labels.size()}, {"labels", arr}};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ConversionError &e) {
    err << "error: " << e.what() << "\n";
    return invalid_input;
  } catch (const CLI::ValidationError &e) {
    err << "error: " << e.what() << "\n";
    return invalid_input;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage;
  }

  try {
    std::string path = config_path;
    if (path.empty()) {
      if (const char *env = std::getenv(config_env_var)) {
        path = env;
      }
    }
    if (!path.empty()) {
      cfg.merge(load_payload(path));
    }
    for (const auto &o : overrides) {
      cfg.set(o);
    }
    cfg.validate();
    const json result = action();
    const std::string text = canonical_dump(result) + "\n";
    if (output_path.empty()) {
      out << text;
    } else {
      std::ofstream file(output_path);
      if (!file) {
        throw validation_error("cannot write " + output_path);
      }
      file << text;
    }
    return ok;
  } catch (const non_convergence &e) {
    err << "error: " << e.what() << "\n";
    return not_converged;
  } catch (const json::exception &e) {
    err << "error: malformed input: " << e.what() << "\n";
    return invalid_input;
  } catch (const std::invalid_argument &e) { // includes validation_error
    err << "error: " << e.what() << "\n";
    return invalid_input;
  } catch (const std::domain_error &e) { // includes diagonal_singularity
    err << "error: " << e.what() << "\n";
    return invalid_input;
  }
}

} // namespace confamp::cli
