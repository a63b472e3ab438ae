#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "confamp/feyngraph.hpp"

using namespace confamp;

namespace {

FeynmanGraph two_vertices_one_edge() {
  FeynmanGraph g;
  g.vertices = {{0, false}, {1, false}};
  g.edges = {{0, 1, true}};
  return g;
}

// Triangle 0-1-2 with the 0-1 edge doubled, one leg per vertex.
FeynmanGraph doubled_triangle() {
  FeynmanGraph g = cycle(3);
  g.edges.push_back({0, 1, true});
  return g;
}

bool has_kind(const std::vector<Violation> &vs, ViolationKind k) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation &v) { return v.kind == k; });
}

// Independent plain-adjacency helpers for the brute-force oracles.
using EdgeList = std::vector<std::pair<int, int>>;

bool connected_on(const std::set<int> &verts, const EdgeList &edges) {
  if (verts.empty()) {
    return true;
  }
  std::set<int> seen = {*verts.begin()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto [a, b] : edges) {
      if (seen.count(a) != seen.count(b)) {
        seen.insert(a);
        seen.insert(b);
        grew = true;
      }
    }
  }
  return seen == verts;
}

bool bridgeless_on(const std::set<int> &verts, const EdgeList &edges) {
  if (!connected_on(verts, edges)) {
    return false;
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    EdgeList rest = edges;
    rest.erase(rest.begin() + static_cast<long>(i));
    if (!connected_on(verts, rest)) {
      return false;
    }
  }
  return true;
}

// Admissible subsets by direct definition, as sorted edge index lists.
std::set<std::vector<int>> brute_force_admissible(const FeynmanGraph &g) {
  std::vector<int> internal;
  std::set<int> internal_vertices;
  for (const auto &v : g.vertices) {
    if (!v.external) {
      internal_vertices.insert(v.id);
    }
  }
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (g.edges[e].internal) {
      internal.push_back(e);
    }
  }
  const int n = static_cast<int>(internal.size());
  std::set<std::vector<int>> out;
  for (int mask = 1; mask + 1 < (1 << n); ++mask) {
    std::vector<int> chosen;
    EdgeList chosen_pairs;
    for (int b = 0; b < n; ++b) {
      if (mask & (1 << b)) {
        chosen.push_back(internal[b]);
        chosen_pairs.push_back({g.edges[internal[b]].src, g.edges[internal[b]].tgt});
      }
    }
    // Split into components by flood fill on the chosen edges.
    std::map<int, int> comp;
    int next = 0;
    for (auto [a, b] : chosen_pairs) {
      for (int v : {a, b}) {
        if (!comp.count(v)) {
          comp[v] = next++;
        }
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto [a, b] : chosen_pairs) {
        const int lo = std::min(comp[a], comp[b]);
        if (comp[a] != lo || comp[b] != lo) {
          comp[a] = comp[b] = lo;
          changed = true;
        }
      }
    }
    std::map<int, std::pair<std::set<int>, EdgeList>> parts;
    for (auto [a, b] : chosen_pairs) {
      parts[comp[a]].first.insert(a);
      parts[comp[a]].first.insert(b);
      parts[comp[a]].second.push_back({a, b});
    }
    bool ok = true;
    for (auto &[c, part] : parts) {
      ok = ok && bridgeless_on(part.first, part.second);
    }
    if (!ok) {
      continue;
    }
    // Quotient: rename vertices to component labels (offset to avoid clashes).
    auto rename = [&](int v) { return comp.count(v) ? -1 - comp[v] : v; };
    std::set<int> qverts;
    for (int v : internal_vertices) {
      qverts.insert(rename(v));
    }
    EdgeList qedges;
    for (int e : internal) {
      if (std::find(chosen.begin(), chosen.end(), e) != chosen.end()) {
        continue;
      }
      const int a = rename(g.edges[e].src);
      const int b = rename(g.edges[e].tgt);
      if (a == b) {
        ok = false;
      }
      qedges.push_back({a, b});
    }
    if (ok && bridgeless_on(qverts, qedges)) {
      out.insert(chosen);
    }
  }
  return out;
}

// Isomorphism by exhaustive search over internal vertex permutations.
bool brute_force_isomorphic(const FeynmanGraph &a, const FeynmanGraph &b) {
  auto describe = [](const FeynmanGraph &g) {
    std::vector<int> ids;
    for (const auto &v : g.vertices) {
      if (!v.external) {
        ids.push_back(v.id);
      }
    }
    std::map<int, int> pos;
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
      pos[ids[i]] = i;
    }
    const int n = static_cast<int>(ids.size());
    std::vector<int> legs(n, 0);
    std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
    for (const auto &e : g.edges) {
      const bool ia = pos.count(e.src) != 0;
      const bool ib = pos.count(e.tgt) != 0;
      if (ia && ib) {
        ++adj[pos[e.src]][pos[e.tgt]];
        ++adj[pos[e.tgt]][pos[e.src]];
      } else {
        ++legs[ia ? pos[e.src] : pos[e.tgt]];
      }
    }
    return std::make_pair(legs, adj);
  };
  const auto [la, aa] = describe(a);
  const auto [lb, ab] = describe(b);
  if (la.size() != lb.size()) {
    return false;
  }
  std::vector<int> perm(la.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool same = true;
    for (std::size_t i = 0; i < perm.size() && same; ++i) {
      same = la[i] == lb[perm[i]];
      for (std::size_t j = 0; j < perm.size() && same; ++j) {
        same = aa[i][j] == ab[perm[i]][perm[j]];
      }
    }
    if (same) {
      return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

FeynmanGraph relabel(const FeynmanGraph &g, std::mt19937 &rng) {
  std::vector<int> ids;
  for (const auto &v : g.vertices) {
    ids.push_back(v.id);
  }
  std::vector<int> shuffled = ids;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  std::map<int, int> to;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    to[ids[i]] = shuffled[i] * 7 + 3;
  }
  FeynmanGraph out;
  for (const auto &v : g.vertices) {
    out.vertices.push_back({to[v.id], v.external});
  }
  std::shuffle(out.vertices.begin(), out.vertices.end(), rng);
  for (const auto &e : g.edges) {
    Edge f{to[e.src], to[e.tgt], e.internal};
    if (rng() % 2) {
      std::swap(f.src, f.tgt);
    }
    out.edges.push_back(f);
  }
  std::shuffle(out.edges.begin(), out.edges.end(), rng);
  return out;
}

FeynmanGraph random_graph(std::mt19937 &rng, int max_vertices, int max_edges) {
  std::uniform_int_distribution<int> nv(2, max_vertices);
  const int n = nv(rng);
  FeynmanGraph g;
  for (int i = 0; i < n; ++i) {
    g.vertices.push_back({i, false});
  }
  std::uniform_int_distribution<int> ne(1, max_edges);
  std::uniform_int_distribution<int> pick(0, n - 1);
  const int m = ne(rng);
  for (int k = 0; k < m; ++k) {
    int a = pick(rng);
    int b = pick(rng);
    if (a != b) {
      g.edges.push_back({a, b, true});
    }
  }
  int next = n;
  for (int i = 0; i < n; ++i) {
    const int legs = static_cast<int>(rng() % 3);
    for (int l = 0; l < legs; ++l) {
      g.vertices.push_back({next, true});
      g.edges.push_back({i, next++, false});
    }
  }
  return g;
}

} // namespace

TEST(Validate, Examples) {
  EXPECT_TRUE(validate(two_vertices_one_edge()).empty());

  FeynmanGraph loop;
  loop.vertices = {{0, false}};
  loop.edges = {{0, 0, true}};
  EXPECT_TRUE(has_kind(validate(loop), ViolationKind::looping_edge));

  FeynmanGraph bad_ext = two_vertices_one_edge();
  bad_ext.vertices.push_back({5, true});
  bad_ext.edges.push_back({0, 5, false});
  bad_ext.edges.push_back({1, 5, false});
  EXPECT_TRUE(has_kind(validate(bad_ext), ViolationKind::external_valence));

  FeynmanGraph missing = two_vertices_one_edge();
  missing.edges.push_back({0, 9, true});
  EXPECT_TRUE(has_kind(validate(missing), ViolationKind::missing_endpoint));

  FeynmanGraph flag = banana(2);
  flag.edges.back().internal = true;
  EXPECT_TRUE(has_kind(validate(flag), ViolationKind::edge_flag));

  FeynmanGraph phi3 = banana(3, 1);
  phi3.theory.max_valence = 3;
  EXPECT_TRUE(has_kind(validate(phi3), ViolationKind::valence_bound));
  phi3.theory.max_valence = 4;
  EXPECT_TRUE(validate(phi3).empty());
}

TEST(OnePi, Examples) {
  EXPECT_TRUE(is_1pi(banana(2)));
  const auto single = check_1pi(two_vertices_one_edge());
  EXPECT_FALSE(single.value);
  EXPECT_NE(single.reason.find("bridge"), std::string::npos);
  EXPECT_TRUE(is_1pi(cycle(3)));

  FeynmanGraph split = banana(2);
  split.vertices.push_back({10, false});
  split.vertices.push_back({11, false});
  split.edges.push_back({10, 11, true});
  split.edges.push_back({10, 11, true});
  const auto r = check_1pi(split);
  EXPECT_FALSE(r.value);
  EXPECT_NE(r.reason.find("disconnected"), std::string::npos);
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree(banana(2)), 2);
  EXPECT_EQ(degree(cycle(3)), 3);
  EXPECT_EQ(degree(doubled_triangle()), 4);
}

TEST(Admissible, BananaHasNone) {
  for (int k = 2; k <= 4; ++k) {
    EXPECT_TRUE(admissible_subgraphs(banana(k)).empty()) << k;
  }
  EXPECT_TRUE(admissible_subgraphs(cycle(4)).empty());
}

TEST(Admissible, DoubledTriangle) {
  const FeynmanGraph g = doubled_triangle();
  const auto subs = admissible_subgraphs(g);
  ASSERT_EQ(subs.size(), 1u);
  // Edge 0 is 0-1 and edge 6 is the added parallel 0-1 edge.
  EXPECT_EQ(subs.front().edges, (std::vector<int>{0, 6}));
  EXPECT_EQ(subs.front().vertices, (std::vector<int>{0, 1}));
  EXPECT_EQ(subs.front().components.size(), 1u);

  const FeynmanGraph q = contract(g, subs.front());
  EXPECT_TRUE(validate(q).empty());
  EXPECT_TRUE(is_1pi(q));
  EXPECT_EQ(degree(q), 2);
  // The merged vertex carries the legs of both endpoints.
  FeynmanGraph expected = banana(2, 1);
  expected.vertices.push_back({20, true});
  expected.edges.push_back({0, 20, false});
  EXPECT_EQ(canonical_key(q), canonical_key(expected));
}

TEST(Admissible, MatchesBruteForceOnFamily) {
  const auto family = generate_graph_family(5, 4, 1);
  ASSERT_GE(family.size(), 20u);
  for (const auto &g : family) {
    std::set<std::vector<int>> found;
    for (const auto &s : admissible_subgraphs(g)) {
      found.insert(s.edges);
    }
    EXPECT_EQ(found, brute_force_admissible(g)) << canonical_key(g);
  }
}

TEST(Admissible, ImproperExcluded) {
  const FeynmanGraph g = doubled_triangle();
  std::vector<int> all;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (g.edges[e].internal) {
      all.push_back(e);
    }
  }
  std::string reason;
  EXPECT_FALSE(is_admissible(g, selection_from_edges(g, all), &reason));
  EXPECT_NE(reason.find("proper"), std::string::npos);
  EXPECT_THROW(contract(g, selection_from_edges(g, all)), validation_error);
}

TEST(Contract, TwoLoopLeavesResidualCycle) {
  // Two triangles sharing the edge 1-2: 0-1, 1-2, 2-0, 1-3, 3-2.
  FeynmanGraph g;
  for (int i = 0; i < 4; ++i) {
    g.vertices.push_back({i, false});
  }
  g.edges = {{0, 1, true}, {1, 2, true}, {2, 0, true}, {1, 3, true}, {3, 2, true}};
  // One triangle as gamma; the quotient keeps the other cycle with the shared
  // edge contracted, i.e. a 2-cycle.
  const auto gamma = selection_from_edges(g, {0, 1, 2});
  std::string reason;
  ASSERT_TRUE(is_admissible(g, gamma, &reason)) << reason;
  const FeynmanGraph q = contract(g, gamma);
  EXPECT_EQ(degree(q), degree(g) - 3);
  EXPECT_EQ(canonical_key(q), canonical_key(banana(2, 0)));
}

TEST(Contract, DegreeAdditivityOnFamily) {
  for (const auto &g : generate_graph_family(5, 4, 2)) {
    for (const auto &s : admissible_subgraphs(g)) {
      const FeynmanGraph q = contract(g, s);
      EXPECT_EQ(static_cast<int>(q.edges.size()), static_cast<int>(g.edges.size()) - static_cast<int>(s.edges.size()));
      int sub_degree = 0;
      for (const auto &c : s.components) {
        const FeynmanGraph piece = component_graph(g, c);
        EXPECT_TRUE(is_1pi(piece));
        sub_degree += degree(piece);
      }
      EXPECT_EQ(degree(q) + sub_degree, degree(g));
    }
  }
}

TEST(Contract, ComponentGraphCarriesLegs) {
  const FeynmanGraph g = doubled_triangle();
  const FeynmanGraph piece = component_graph(g, {0, 6});
  EXPECT_TRUE(validate(piece).empty());
  // Two internal edges plus, at each endpoint, one triangle edge and one leg.
  EXPECT_EQ(degree(piece), 2);
  EXPECT_EQ(piece.edges.size(), 6u);
  EXPECT_EQ(canonical_key(piece), canonical_key(banana(2, 2)));
}

TEST(Canonical, StableUnderRelabeling) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const FeynmanGraph g = random_graph(rng, 6, 9);
    const FeynmanGraph h = relabel(g, rng);
    ASSERT_TRUE(validate(h).empty());
    EXPECT_EQ(canonical_key(g), canonical_key(h));
    EXPECT_EQ(canonical_key(graph_from_key(canonical_key(g))), canonical_key(g));
  }
}

TEST(Canonical, AgreesWithBruteForceIsomorphism) {
  std::mt19937 rng(11);
  std::vector<FeynmanGraph> pool;
  for (int i = 0; i < 120; ++i) {
    pool.push_back(random_graph(rng, 5, 6));
  }
  int isomorphic_pairs = 0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i + 1; j < pool.size(); ++j) {
      const bool iso = brute_force_isomorphic(pool[i], pool[j]);
      isomorphic_pairs += iso;
      EXPECT_EQ(iso, canonical_key(pool[i]) == canonical_key(pool[j]));
    }
  }
  EXPECT_GT(isomorphic_pairs, 0);
}

TEST(Family, DistinctAndOnePi) {
  const auto family = generate_graph_family(4, 4, 2);
  EXPECT_GE(family.size(), 20u);
  std::set<std::string> keys;
  for (const auto &g : family) {
    EXPECT_TRUE(is_1pi(g));
    EXPECT_LE(degree(g), 4);
    keys.insert(canonical_key(g));
  }
  EXPECT_EQ(keys.size(), family.size());
}
