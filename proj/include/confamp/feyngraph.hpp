#pragma once

// Feynman graphs with external legs: validation, 1PI test, admissible subgraph
// enumeration, contraction, and canonical forms for isomorphism classes.
//
// Graphs are treated as undirected multigraphs for all structural questions;
// edge orientation is kept only as data.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "confamp/errors.hpp"

namespace confamp {

struct Vertex {
  int id = 0;
  bool external = false;
  bool operator==(const Vertex &) const = default;
};

struct Edge {
  int src = 0;
  int tgt = 0;
  bool internal = true;
  bool operator==(const Edge &) const = default;
};

// Optional "same theory" constraint on graphs and quotients.
struct TheoryProfile {
  std::optional<int> max_valence;
  bool operator==(const TheoryProfile &) const = default;
};

struct FeynmanGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  TheoryProfile theory{};

  bool operator==(const FeynmanGraph &) const = default;
};

enum class ViolationKind { looping_edge, missing_endpoint, duplicate_vertex, external_valence, edge_flag, valence_bound };

struct Violation {
  ViolationKind kind;
  std::string message;
};

inline const char *to_string(ViolationKind k) {
  switch (k) {
  case ViolationKind::looping_edge: return "looping_edge";
  case ViolationKind::missing_endpoint: return "missing_endpoint";
  case ViolationKind::duplicate_vertex: return "duplicate_vertex";
  case ViolationKind::external_valence: return "external_valence";
  case ViolationKind::edge_flag: return "edge_flag";
  case ViolationKind::valence_bound: return "valence_bound";
  }
  return "unknown";
}

namespace detail {

inline std::map<int, int> vertex_index(const FeynmanGraph &g) {
  std::map<int, int> idx;
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i) {
    idx.emplace(g.vertices[i].id, i);
  }
  return idx;
}

} // namespace detail

inline std::vector<Violation> validate(const FeynmanGraph &g) {
  std::vector<Violation> out;
  const auto idx = detail::vertex_index(g);
  if (idx.size() != g.vertices.size()) {
    out.push_back({ViolationKind::duplicate_vertex, "vertex ids are not unique"});
  }
  std::map<int, int> valence;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const Edge &edge = g.edges[e];
    const std::string name = "edge " + std::to_string(e) + " (" + std::to_string(edge.src) + "-" + std::to_string(edge.tgt) + ")";
    const bool has_src = idx.count(edge.src) != 0;
    const bool has_tgt = idx.count(edge.tgt) != 0;
    if (!has_src || !has_tgt) {
      out.push_back({ViolationKind::missing_endpoint, name + " has an endpoint that is not a vertex"});
      continue;
    }
    if (edge.src == edge.tgt) {
      out.push_back({ViolationKind::looping_edge, name + " is a looping edge"});
      continue;
    }
    ++valence[edge.src];
    ++valence[edge.tgt];
    const bool ext_src = g.vertices[idx.at(edge.src)].external;
    const bool ext_tgt = g.vertices[idx.at(edge.tgt)].external;
    if (ext_src && ext_tgt) {
      out.push_back({ViolationKind::edge_flag, name + " joins two external vertices"});
    } else if (edge.internal == (ext_src || ext_tgt)) {
      out.push_back({ViolationKind::edge_flag, name + " internal flag disagrees with its endpoints"});
    }
  }
  for (const Vertex &v : g.vertices) {
    const int val = valence.count(v.id) ? valence.at(v.id) : 0;
    if (v.external && val != 1) {
      out.push_back({ViolationKind::external_valence,
                     "external vertex " + std::to_string(v.id) + " has valence " + std::to_string(val) + ", expected 1"});
    }
    if (!v.external && g.theory.max_valence && val > *g.theory.max_valence) {
      out.push_back({ViolationKind::valence_bound, "vertex " + std::to_string(v.id) + " has valence " + std::to_string(val) +
                                                       " above the theory bound " + std::to_string(*g.theory.max_valence)});
    }
  }
  return out;
}

inline void require_valid(const FeynmanGraph &g) {
  const auto v = validate(g);
  if (!v.empty()) {
    throw validation_error("invalid graph: " + v.front().message);
  }
}

// |E^i|, the number of internal edges.
inline int degree(const FeynmanGraph &g) {
  return static_cast<int>(std::count_if(g.edges.begin(), g.edges.end(), [](const Edge &e) { return e.internal; }));
}

namespace detail {

// Union-find over vertex indices.
struct Components {
  std::vector<int> parent;
  explicit Components(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Connectivity of the internal vertices using the internal edges in `mask`
// (bit e set = edge e present), ignoring edge `skip`.
inline bool internal_connected(const FeynmanGraph &g, const std::map<int, int> &idx, const std::vector<int> &edge_ids,
                               int skip, const std::vector<int> &vertex_subset) {
  if (vertex_subset.empty()) {
    return true;
  }
  Components c(static_cast<int>(g.vertices.size()));
  for (int e : edge_ids) {
    if (e != skip) {
      c.unite(idx.at(g.edges[e].src), idx.at(g.edges[e].tgt));
    }
  }
  const int root = c.find(vertex_subset.front());
  return std::all_of(vertex_subset.begin(), vertex_subset.end(), [&](int v) { return c.find(v) == root; });
}

inline std::vector<int> internal_edge_ids(const FeynmanGraph &g) {
  std::vector<int> ids;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (g.edges[e].internal) {
      ids.push_back(e);
    }
  }
  return ids;
}

inline std::vector<int> internal_vertex_indices(const FeynmanGraph &g) {
  std::vector<int> ids;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    if (!g.vertices[v].external) {
      ids.push_back(v);
    }
  }
  return ids;
}

// Connected and bridgeless on the given internal edges and vertex set.
inline bool bridgeless_connected(const FeynmanGraph &g, const std::map<int, int> &idx, const std::vector<int> &edge_ids,
                                 const std::vector<int> &vertices, std::string *reason) {
  if (!internal_connected(g, idx, edge_ids, -1, vertices)) {
    if (reason) {
      *reason = "internal graph is disconnected";
    }
    return false;
  }
  for (int e : edge_ids) {
    if (!internal_connected(g, idx, edge_ids, e, vertices)) {
      if (reason) {
        *reason = "internal edge " + std::to_string(e) + " is a bridge";
      }
      return false;
    }
  }
  return true;
}

} // namespace detail

struct OnePiResult {
  bool value = false;
  std::string reason; // empty when value is true
};

// 1PI: the internal-edge graph on the internal vertices is connected and has no
// bridge.
inline OnePiResult check_1pi(const FeynmanGraph &g) {
  require_valid(g);
  const auto idx = detail::vertex_index(g);
  OnePiResult r;
  r.value = detail::bridgeless_connected(g, idx, detail::internal_edge_ids(g), detail::internal_vertex_indices(g), &r.reason);
  return r;
}

inline bool is_1pi(const FeynmanGraph &g) { return check_1pi(g).value; }

// A subgraph given by a set of internal edges, with its vertex set and
// connected components (edge index lists, each sorted).
struct SubgraphSelection {
  std::vector<int> edges;
  std::vector<int> vertices; // vertex ids
  std::vector<std::vector<int>> components;

  bool operator==(const SubgraphSelection &) const = default;
};

namespace detail {

inline SubgraphSelection make_selection(const FeynmanGraph &g, const std::map<int, int> &idx, std::vector<int> edge_ids) {
  std::sort(edge_ids.begin(), edge_ids.end());
  SubgraphSelection s;
  s.edges = edge_ids;
  Components c(static_cast<int>(g.vertices.size()));
  std::set<int> verts;
  for (int e : edge_ids) {
    const int a = idx.at(g.edges[e].src);
    const int b = idx.at(g.edges[e].tgt);
    c.unite(a, b);
    verts.insert(a);
    verts.insert(b);
  }
  std::map<int, std::vector<int>> by_root;
  for (int e : edge_ids) {
    by_root[c.find(idx.at(g.edges[e].src))].push_back(e);
  }
  for (auto &[root, es] : by_root) {
    s.components.push_back(es);
  }
  std::sort(s.components.begin(), s.components.end());
  for (int v : verts) {
    s.vertices.push_back(g.vertices[v].id);
  }
  std::sort(s.vertices.begin(), s.vertices.end());
  return s;
}

inline std::vector<int> component_vertices(const FeynmanGraph &g, const std::map<int, int> &idx, const std::vector<int> &es) {
  std::set<int> vs;
  for (int e : es) {
    vs.insert(idx.at(g.edges[e].src));
    vs.insert(idx.at(g.edges[e].tgt));
  }
  return {vs.begin(), vs.end()};
}

// Quotient without checks: every component of gamma collapses to its
// smallest-id vertex; the edges of gamma disappear.
inline FeynmanGraph collapse(const FeynmanGraph &g, const SubgraphSelection &gamma) {
  const auto idx = vertex_index(g);
  std::map<int, int> rename; // vertex id -> representative id
  for (const auto &comp : gamma.components) {
    const auto vs = component_vertices(g, idx, comp);
    int rep = g.vertices[vs.front()].id;
    for (int v : vs) {
      rep = std::min(rep, g.vertices[v].id);
    }
    for (int v : vs) {
      rename[g.vertices[v].id] = rep;
    }
  }
  const std::set<int> removed(gamma.edges.begin(), gamma.edges.end());
  FeynmanGraph q;
  q.theory = g.theory;
  for (const Vertex &v : g.vertices) {
    auto it = rename.find(v.id);
    if (it == rename.end() || it->second == v.id) {
      q.vertices.push_back(v);
    }
  }
  auto target = [&](int id) {
    auto it = rename.find(id);
    return it == rename.end() ? id : it->second;
  };
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (removed.count(e)) {
      continue;
    }
    Edge edge = g.edges[e];
    edge.src = target(edge.src);
    edge.tgt = target(edge.tgt);
    q.edges.push_back(edge);
  }
  return q;
}

} // namespace detail

// One connected component of gamma as a standalone graph: its vertices and
// edges, plus a fresh external leg for every other edge of the ambient graph
// incident to one of its vertices.
inline FeynmanGraph component_graph(const FeynmanGraph &g, const std::vector<int> &component_edges) {
  const auto idx = detail::vertex_index(g);
  const auto vs = detail::component_vertices(g, idx, component_edges);
  const std::set<int> own(component_edges.begin(), component_edges.end());
  std::set<int> vertex_ids;
  FeynmanGraph out;
  out.theory = g.theory;
  int next_id = 0;
  for (int v : vs) {
    out.vertices.push_back({g.vertices[v].id, false});
    vertex_ids.insert(g.vertices[v].id);
    next_id = std::max(next_id, g.vertices[v].id + 1);
  }
  for (const Vertex &v : g.vertices) {
    next_id = std::max(next_id, v.id + 1);
  }
  for (int e : component_edges) {
    out.edges.push_back(g.edges[e]);
  }
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (own.count(e)) {
      continue;
    }
    for (int end : {g.edges[e].src, g.edges[e].tgt}) {
      if (vertex_ids.count(end)) {
        out.vertices.push_back({next_id, true});
        out.edges.push_back({end, next_id, false});
        ++next_id;
      }
    }
  }
  return out;
}

namespace detail {

inline bool admissible_impl(const FeynmanGraph &g, const std::map<int, int> &idx, const SubgraphSelection &s,
                            int total_internal, std::string *reason) {
  if (s.edges.empty() || static_cast<int>(s.edges.size()) == total_internal) {
    if (reason) {
      *reason = "subgraph must be proper and nonempty";
    }
    return false;
  }
  for (int e : s.edges) {
    if (e < 0 || e >= static_cast<int>(g.edges.size()) || !g.edges[e].internal) {
      if (reason) {
        *reason = "subgraph uses a non-internal edge";
      }
      return false;
    }
  }
  for (const auto &comp : s.components) {
    if (!bridgeless_connected(g, idx, comp, component_vertices(g, idx, comp), nullptr)) {
      if (reason) {
        *reason = "a component of the subgraph is not 1PI";
      }
      return false;
    }
  }
  const FeynmanGraph q = collapse(g, s);
  const auto violations = validate(q);
  if (!violations.empty()) {
    if (reason) {
      *reason = "quotient is not a valid graph: " + violations.front().message;
    }
    return false;
  }
  const auto qidx = vertex_index(q);
  if (!bridgeless_connected(q, qidx, internal_edge_ids(q), internal_vertex_indices(q), nullptr)) {
    if (reason) {
      *reason = "quotient is not 1PI";
    }
    return false;
  }
  if (g.theory.max_valence) {
    for (const auto &comp : s.components) {
      if (!validate(component_graph(g, comp)).empty()) {
        if (reason) {
          *reason = "subgraph component violates the theory profile";
        }
        return false;
      }
    }
  }
  return true;
}

} // namespace detail

inline SubgraphSelection selection_from_edges(const FeynmanGraph &g, std::vector<int> edge_ids) {
  return detail::make_selection(g, detail::vertex_index(g), std::move(edge_ids));
}

inline bool is_admissible(const FeynmanGraph &g, const SubgraphSelection &s, std::string *reason = nullptr) {
  const auto idx = detail::vertex_index(g);
  return detail::admissible_impl(g, idx, s, degree(g), reason);
}

// All proper nonempty sets of internal edges whose components are 1PI and whose
// contraction is again a valid 1PI graph in the same theory. A contraction that
// would turn an unselected edge into a looping edge is not admissible.
inline std::vector<SubgraphSelection> admissible_subgraphs(const FeynmanGraph &g) {
  require_valid(g);
  const auto idx = detail::vertex_index(g);
  const auto internal = detail::internal_edge_ids(g);
  const int n = static_cast<int>(internal.size());
  if (n > 24) {
    throw validation_error("admissible_subgraphs: too many internal edges for exhaustive enumeration");
  }
  std::vector<SubgraphSelection> out;
  for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask) {
    std::vector<int> es;
    for (int b = 0; b < n; ++b) {
      if (mask & (1ul << b)) {
        es.push_back(internal[b]);
      }
    }
    if (es.size() < 2) {
      continue; // a single edge is a bridge of itself
    }
    SubgraphSelection s = detail::make_selection(g, idx, es);
    if (detail::admissible_impl(g, idx, s, n, nullptr)) {
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Gamma / gamma: each component of gamma collapsed to one vertex.
inline FeynmanGraph contract(const FeynmanGraph &g, const SubgraphSelection &gamma) {
  require_valid(g);
  std::string reason;
  const auto canonical = selection_from_edges(g, gamma.edges);
  if (!is_admissible(g, canonical, &reason)) {
    throw validation_error("cannot contract: " + reason);
  }
  return detail::collapse(g, canonical);
}

// ---------------------------------------------------------------------------
// Canonical forms.
//
// External vertices have valence one, so a graph is determined up to
// isomorphism by its internal multigraph together with the number of legs at
// each internal vertex. The canonical key is the lexicographically smallest
// encoding over all vertex orders compatible with an iterated colour refinement.

namespace detail {

struct Skeleton {
  int n = 0;
  std::vector<int> legs;                   // per internal vertex
  std::vector<std::vector<int>> adjacency; // multiplicities, symmetric
};

inline Skeleton skeleton(const FeynmanGraph &g) {
  const auto idx = vertex_index(g);
  std::vector<int> internal_pos(g.vertices.size(), -1);
  Skeleton s;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    if (!g.vertices[v].external) {
      internal_pos[v] = s.n++;
    }
  }
  s.legs.assign(s.n, 0);
  s.adjacency.assign(s.n, std::vector<int>(s.n, 0));
  for (const Edge &e : g.edges) {
    const int a = internal_pos[idx.at(e.src)];
    const int b = internal_pos[idx.at(e.tgt)];
    if (a >= 0 && b >= 0) {
      ++s.adjacency[a][b];
      ++s.adjacency[b][a];
    } else if (a >= 0) {
      ++s.legs[a];
    } else if (b >= 0) {
      ++s.legs[b];
    }
  }
  return s;
}

inline std::string encode(const Skeleton &s, const std::vector<int> &order) {
  std::ostringstream os;
  os << s.n << "|";
  for (int v : order) {
    os << s.legs[v] << ",";
  }
  os << "|";
  for (int i = 0; i < s.n; ++i) {
    for (int j = i + 1; j < s.n; ++j) {
      const int mult = s.adjacency[order[i]][order[j]];
      if (mult) {
        os << i << "-" << j << "x" << mult << ";";
      }
    }
  }
  return os.str();
}

inline std::vector<int> refine_colours(const Skeleton &s) {
  std::vector<std::vector<int>> signature(s.n);
  std::vector<int> colour(s.n);
  for (int v = 0; v < s.n; ++v) {
    int valence = std::accumulate(s.adjacency[v].begin(), s.adjacency[v].end(), 0);
    signature[v] = {s.legs[v], valence};
  }
  for (int round = 0; round <= s.n; ++round) {
    std::map<std::vector<int>, int> ids;
    for (const auto &sig : signature) {
      ids.emplace(sig, 0);
    }
    int next = 0;
    for (auto &[sig, id] : ids) {
      id = next++;
    }
    std::vector<int> new_colour(s.n);
    for (int v = 0; v < s.n; ++v) {
      new_colour[v] = ids.at(signature[v]);
    }
    const bool stable = round > 0 && new_colour == colour;
    colour = new_colour;
    if (stable) {
      break;
    }
    for (int v = 0; v < s.n; ++v) {
      std::vector<int> sig = {colour[v]};
      std::vector<std::pair<int, int>> nbrs;
      for (int u = 0; u < s.n; ++u) {
        if (s.adjacency[v][u]) {
          nbrs.push_back({colour[u], s.adjacency[v][u]});
        }
      }
      std::sort(nbrs.begin(), nbrs.end());
      for (auto [c, m] : nbrs) {
        sig.push_back(c);
        sig.push_back(m);
      }
      signature[v] = sig;
    }
  }
  return colour;
}

} // namespace detail

inline std::string canonical_key(const FeynmanGraph &g) {
  require_valid(g);
  const detail::Skeleton s = detail::skeleton(g);
  const std::vector<int> colour = detail::refine_colours(s);
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < s.n; ++v) {
    classes[colour[v]].push_back(v);
  }
  std::vector<std::vector<int>> cells;
  for (auto &[c, vs] : classes) {
    cells.push_back(vs);
  }
  std::string best;
  std::vector<int> order;
  std::function<void(std::size_t)> search = [&](std::size_t cell) {
    if (cell == cells.size()) {
      std::string code = detail::encode(s, order);
      if (best.empty() || code < best) {
        best = std::move(code);
      }
      return;
    }
    std::vector<int> perm = cells[cell];
    std::sort(perm.begin(), perm.end());
    do {
      order.insert(order.end(), perm.begin(), perm.end());
      search(cell + 1);
      order.resize(order.size() - perm.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  search(0);
  return best;
}

// Representative graph rebuilt from a canonical key: internal vertices 0..n-1,
// external legs numbered after them, edges oriented from lower to higher id.
inline FeynmanGraph graph_from_key(const std::string &key, TheoryProfile theory = {}) {
  FeynmanGraph g;
  g.theory = theory;
  std::istringstream is(key);
  int n = 0;
  char sep = 0;
  is >> n >> sep;
  std::vector<int> legs(n);
  for (int i = 0; i < n; ++i) {
    is >> legs[i] >> sep;
  }
  is >> sep; // '|'
  for (int i = 0; i < n; ++i) {
    g.vertices.push_back({i, false});
  }
  std::string rest;
  std::getline(is, rest);
  std::istringstream es(rest);
  std::string item;
  while (std::getline(es, item, ';')) {
    if (item.empty()) {
      continue;
    }
    int a = 0;
    int b = 0;
    int mult = 0;
    char dash = 0;
    char x = 0;
    std::istringstream it(item);
    it >> a >> dash >> b >> x >> mult;
    for (int k = 0; k < mult; ++k) {
      g.edges.push_back({a, b, true});
    }
  }
  int next = n;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < legs[i]; ++k) {
      g.vertices.push_back({next, true});
      g.edges.push_back({i, next, false});
      ++next;
    }
  }
  return g;
}

// Isomorphism class of a graph: its canonical key plus the representative.
class CanonicalGraph {
public:
  explicit CanonicalGraph(const FeynmanGraph &g) : key_(canonical_key(g)), graph_(graph_from_key(key_, g.theory)) {}

  const std::string &key() const { return key_; }
  const FeynmanGraph &graph() const { return graph_; }
  int degree() const { return confamp::degree(graph_); }

private:
  std::string key_;
  FeynmanGraph graph_;
};

using GraphRef = std::shared_ptr<const CanonicalGraph>;

inline GraphRef canonical(const FeynmanGraph &g) { return std::make_shared<const CanonicalGraph>(g); }

struct GraphRefLess {
  bool operator()(const GraphRef &a, const GraphRef &b) const { return a->key() < b->key(); }
};

// ---------------------------------------------------------------------------
// Small graph families.

inline FeynmanGraph banana(int k, int legs_each = 1) {
  FeynmanGraph g;
  g.vertices = {{0, false}, {1, false}};
  for (int i = 0; i < k; ++i) {
    g.edges.push_back({0, 1, true});
  }
  int next = 2;
  for (int v = 0; v < 2; ++v) {
    for (int l = 0; l < legs_each; ++l) {
      g.vertices.push_back({next, true});
      g.edges.push_back({v, next, false});
      ++next;
    }
  }
  return g;
}

inline FeynmanGraph cycle(int n, int legs_each = 1) {
  FeynmanGraph g;
  for (int i = 0; i < n; ++i) {
    g.vertices.push_back({i, false});
  }
  for (int i = 0; i < n; ++i) {
    g.edges.push_back({i, (i + 1) % n, true});
  }
  int next = n;
  for (int v = 0; v < n; ++v) {
    for (int l = 0; l < legs_each; ++l) {
      g.vertices.push_back({next, true});
      g.edges.push_back({v, next, false});
      ++next;
    }
  }
  return g;
}

// All connected, bridgeless loopless multigraphs with 1..max_edges edges on at
// most max_vertices vertices, each decorated by every leg assignment with at
// most max_legs legs per vertex, one representative per isomorphism class,
// sorted by (degree, key).
inline std::vector<FeynmanGraph> generate_graph_family(int max_edges, int max_vertices, int max_legs) {
  std::set<std::string> seen;
  std::vector<std::pair<std::pair<int, std::string>, FeynmanGraph>> found;
  for (int n = 1; n <= max_vertices; ++n) {
    std::vector<std::pair<int, int>> slots;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        slots.push_back({a, b});
      }
    }
    std::vector<int> mult(slots.size(), 0);
    std::function<void(std::size_t, int)> edges_rec = [&](std::size_t slot, int remaining) {
      if (slot == slots.size()) {
        const int used = max_edges - remaining;
        if (used == 0) {
          return;
        }
        std::vector<int> legs(n, 0);
        std::function<void(int)> legs_rec = [&](int v) {
          if (v == n) {
            FeynmanGraph g;
            for (int i = 0; i < n; ++i) {
              g.vertices.push_back({i, false});
            }
            for (std::size_t s = 0; s < slots.size(); ++s) {
              for (int k = 0; k < mult[s]; ++k) {
                g.edges.push_back({slots[s].first, slots[s].second, true});
              }
            }
            int next = n;
            for (int i = 0; i < n; ++i) {
              for (int k = 0; k < legs[i]; ++k) {
                g.vertices.push_back({next, true});
                g.edges.push_back({i, next, false});
                ++next;
              }
            }
            if (!is_1pi(g)) {
              return;
            }
            std::string key = canonical_key(g);
            if (seen.insert(key).second) {
              found.push_back({{degree(g), key}, graph_from_key(key)});
            }
            return;
          }
          for (int l = 0; l <= max_legs; ++l) {
            legs[v] = l;
            legs_rec(v + 1);
          }
        };
        legs_rec(0);
        return;
      }
      for (int k = 0; k <= remaining; ++k) {
        mult[slot] = k;
        edges_rec(slot + 1, remaining - k);
      }
      mult[slot] = 0;
    };
    edges_rec(0, max_edges);
  }
  std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  std::vector<FeynmanGraph> out;
  for (auto &[k, g] : found) {
    out.push_back(std::move(g));
  }
  return out;
}

} // namespace confamp
