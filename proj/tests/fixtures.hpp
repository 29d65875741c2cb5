#pragma once

// Named example fixtures, random generators and independent oracles shared
// by the unit and acceptance suites.

#include <memory>
#include <random>
#include <set>

#include "pdir/pdir.hpp"

namespace fixtures {

using namespace pdir;

// --- graphs -----------------------------------------------------------------

inline UndirectedGraph fan_graph() {
  // cliques {1,2,5}, {2,3,5}, {3,4,5}
  return UndirectedGraph::create({{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}},
                                 {{1, 2}, {1, 5}, {2, 3}, {2, 5}, {3, 4}, {3, 5}, {4, 5}});
}

inline UndirectedGraph pendant_graph() {
  return UndirectedGraph::create({{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}},
                                 {{1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}});
}

inline UndirectedGraph tree_graph() {
  return UndirectedGraph::create({{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}},
                                 {{1, 2}, {2, 3}, {2, 4}, {4, 5}});
}

inline UndirectedGraph chain_graph(int d, int levels = 2) {
  std::vector<std::pair<Vertex, int>> vs;
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int v = 1; v <= d; ++v) vs.push_back({v, levels});
  for (int v = 1; v < d; ++v) es.push_back({v, v + 1});
  return UndirectedGraph::create(vs, es);
}

inline UndirectedGraph complete_graph(int d, int levels = 2) {
  std::vector<std::pair<Vertex, int>> vs;
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int v = 1; v <= d; ++v) vs.push_back({v, levels});
  for (int a = 1; a <= d; ++a)
    for (int b = a + 1; b <= d; ++b) es.push_back({a, b});
  return UndirectedGraph::create(vs, es);
}

// --- DAGs -------------------------------------------------------------------

inline ParentMap fan_p(const UndirectedGraph& g) {
  return validate_dag(g, "p", {{1, {2, 5}}, {2, {}}, {3, {2, 5}}, {4, {3, 5}}, {5, {2}}});
}
inline ParentMap fan_q(const UndirectedGraph& g) {
  return validate_dag(g, "q", {{1, {2, 5}}, {2, {3, 5}}, {3, {}}, {4, {3, 5}}, {5, {3}}});
}
inline ParentMap pendant_p(const UndirectedGraph& g) {
  return validate_dag(g, "p", {{1, {}}, {2, {4}}, {3, {1}}, {4, {3}}, {5, {3, 4}}});
}
inline ParentMap pendant_q(const UndirectedGraph& g) {
  return validate_dag(g, "q", {{1, {3}}, {2, {}}, {3, {4}}, {4, {2}}, {5, {3, 4}}});
}
inline ParentMap tree_p(const UndirectedGraph& g) {
  return validate_dag(g, "p", {{1, {}}, {2, {1}}, {3, {2}}, {4, {2}}, {5, {4}}});
}
inline ParentMap tree_q(const UndirectedGraph& g) {
  return validate_dag(g, "q", {{1, {2}}, {2, {3}}, {3, {}}, {4, {2}}, {5, {4}}});
}

// Tree DAG with every edge directed away from the root.
inline ParentMap tree_rooted_at(const UndirectedGraph& g, Vertex root, const std::string& id) {
  std::map<Vertex, VertexSet> parents;
  for (Vertex v : g.vertices()) parents[v];
  std::set<Vertex> seen{root};
  std::vector<Vertex> stack{root};
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : g.neighbors(v))
      if (seen.insert(w).second) {
        parents[w] = {v};
        stack.push_back(w);
      }
  }
  return validate_dag(g, id, parents);
}

inline ParentMap chain_forward(const UndirectedGraph& g, int d) {
  std::map<Vertex, VertexSet> parents;
  parents[1] = {};
  for (int v = 2; v <= d; ++v) parents[v] = {v - 1};
  return validate_dag(g, "fwd", parents);
}
inline ParentMap chain_backward(const UndirectedGraph& g, int d) {
  std::map<Vertex, VertexSet> parents;
  parents[d] = {};
  for (int v = 1; v < d; ++v) parents[v] = {v + 1};
  return validate_dag(g, "bwd", parents);
}

// --- families ---------------------------------------------------------------

using FamilyPtr = std::shared_ptr<const DagFamily>;

inline FamilyPtr pendant_family() {
  auto g = pendant_graph();
  return std::make_shared<const DagFamily>(
      make_family(g, {pendant_p(g), pendant_q(g)},
                  {{"p", {{1, 3}, {3, 4, 5}, {2, 4}}}, {"q", {{2, 4}, {3, 4, 5}, {1, 3}}}}));
}

// The fan graph (hub 5 over the path 1-2-3-4) admits four order collections:
// each separator's class is either cross-tied or left definitional.
//   'b' ties both, 'l' ties {2,5} only, 'r' ties {3,5} only, 'n' ties neither.
inline FamilyPtr fan_family(char variant) {
  auto g = fan_graph();
  std::vector<VertexSet> o1p{{2, 3, 5}, {1, 2, 5}, {3, 4, 5}};
  std::vector<VertexSet> o2p{{1, 2, 5}, {2, 3, 5}, {3, 4, 5}};
  std::vector<VertexSet> o1q{{2, 3, 5}, {3, 4, 5}, {1, 2, 5}};
  std::vector<VertexSet> o2q{{3, 4, 5}, {2, 3, 5}, {1, 2, 5}};
  std::map<std::string, std::vector<VertexSet>> orders;
  switch (variant) {
    case 'b': orders = {{"p", o2p}, {"q", o2q}}; break;
    case 'l': orders = {{"p", o2p}, {"q", o1q}}; break;
    case 'r': orders = {{"p", o1p}, {"q", o2q}}; break;
    case 'n': orders = {{"p", o1p}, {"q", o1q}}; break;
    default: fail("InvalidInput", "variant must be one of b/l/r/n");
  }
  return std::make_shared<const DagFamily>(make_family(g, {fan_p(g), fan_q(g)}, orders));
}

inline FamilyPtr tree_family(bool merged) {
  auto g = tree_graph();
  std::vector<VertexSet> po{{1, 2}, {2, 3}, {2, 4}, {4, 5}};
  std::vector<VertexSet> qo = merged ? std::vector<VertexSet>{{2, 3}, {2, 4}, {4, 5}, {1, 2}}
                                     : std::vector<VertexSet>{{2, 3}, {1, 2}, {2, 4}, {4, 5}};
  return std::make_shared<const DagFamily>(
      make_family(g, {tree_p(g), tree_q(g)}, {{"p", po}, {"q", qo}}));
}

inline FamilyPtr chain_family(int d, int levels = 2) {
  auto g = chain_graph(d, levels);
  std::vector<VertexSet> fwd, bwd;
  for (int v = 1; v < d; ++v) fwd.push_back({v, v + 1});
  for (int v = d - 1; v >= 1; --v) bwd.push_back({v, v + 1});
  return std::make_shared<const DagFamily>(
      make_family(g, {chain_forward(g, d), chain_backward(g, d)},
                  {{"fwd", fwd}, {"bwd", bwd}}));
}

// Leaf-rooted family on the tree graph; covers every separator-clique
// pairing.
inline FamilyPtr tree_leaf_family() {
  auto g = tree_graph();
  auto d1 = tree_rooted_at(g, 1, "root1");
  auto d3 = tree_rooted_at(g, 3, "root3");
  auto d5 = tree_rooted_at(g, 5, "root5");
  return std::make_shared<const DagFamily>(make_family(
      g, {d1, d3, d5},
      {{"root1", {{1, 2}, {2, 3}, {2, 4}, {4, 5}}},
       {"root3", {{2, 3}, {1, 2}, {2, 4}, {4, 5}}},
       {"root5", {{4, 5}, {2, 4}, {1, 2}, {2, 3}}}}));
}

// Six-vertex variant of the pendant-triangle family whose big clique carries a
// two-element interior chain: {3} (or {4}) < {3,4} < {3,4,5} < {3,4,5,6}.
inline FamilyPtr deep_chain_family() {
  auto g = UndirectedGraph::create(
      {{1, 2}, {2, 2}, {3, 2}, {4, 2}, {5, 2}, {6, 2}},
      {{1, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}, {3, 6}, {4, 6}, {5, 6}});
  auto p = validate_dag(
      g, "p", {{1, {}}, {2, {4}}, {3, {1}}, {4, {3}}, {5, {3, 4}}, {6, {3, 4, 5}}});
  auto q = validate_dag(
      g, "q", {{1, {3}}, {2, {}}, {3, {4}}, {4, {2}}, {5, {3, 4}}, {6, {3, 4, 5}}});
  return std::make_shared<const DagFamily>(make_family(
      g, {p, q},
      {{"p", {{1, 3}, {3, 4, 5, 6}, {2, 4}}}, {"q", {{2, 4}, {3, 4, 5, 6}, {1, 3}}}}));
}

inline FamilyPtr k2_family(int levels1 = 2, int levels2 = 2) {
  auto g = UndirectedGraph::create({{1, levels1}, {2, levels2}}, {{1, 2}});
  auto fwd = validate_dag(g, "fwd", {{1, {}}, {2, {1}}});
  auto bwd = validate_dag(g, "bwd", {{1, {2}}, {2, {}}});
  return std::make_shared<const DagFamily>(
      make_family(g, {fwd, bwd}, {{"fwd", {{1, 2}}}, {"bwd", {{1, 2}}}}));
}

// --- random generators --------------------------------------------------------

// Vertex-incremental random chordal graph: each new vertex attaches to a
// non-empty complete subset of an existing clique.
inline UndirectedGraph random_chordal(std::mt19937_64& gen, int n, int max_levels = 3) {
  std::uniform_int_distribution<int> level_dist(2, max_levels);
  std::vector<std::pair<Vertex, int>> vs;
  for (int v = 1; v <= n; ++v) vs.push_back({v, level_dist(gen)});
  std::vector<VertexSet> cliques{{1}};
  std::vector<std::pair<Vertex, Vertex>> es;
  for (int v = 2; v <= n; ++v) {
    const VertexSet& host = cliques[std::uniform_int_distribution<size_t>(0, cliques.size() - 1)(gen)];
    VertexSet attach;
    for (Vertex w : host)
      if (std::uniform_int_distribution<int>(0, 1)(gen)) attach.push_back(w);
    if (attach.empty()) attach.push_back(host[std::uniform_int_distribution<size_t>(0, host.size() - 1)(gen)]);
    for (Vertex w : attach) es.push_back({std::min(w, v), std::max(w, v)});
    cliques.push_back(set_insert(attach, v));
  }
  return UndirectedGraph::create(vs, es);
}

// Orientation of a chordal graph along a random maximum-cardinality-search
// numbering; always a moral DAG Markov equivalent to the graph.
inline ParentMap random_moral_dag(std::mt19937_64& gen, const UndirectedGraph& g,
                                  const std::string& id) {
  std::map<Vertex, int> weight;
  std::set<Vertex> pending(g.vertices().begin(), g.vertices().end());
  for (Vertex v : g.vertices()) weight[v] = 0;
  std::vector<Vertex> order;
  while (!pending.empty()) {
    int best = -1;
    std::vector<Vertex> ties;
    for (Vertex v : pending) {
      if (weight[v] > best) {
        best = weight[v];
        ties.clear();
      }
      if (weight[v] == best) ties.push_back(v);
    }
    Vertex pick = ties[std::uniform_int_distribution<size_t>(0, ties.size() - 1)(gen)];
    order.push_back(pick);
    pending.erase(pick);
    for (Vertex w : g.neighbors(pick))
      if (pending.count(w)) ++weight[w];
  }
  std::map<Vertex, int> position;
  for (size_t i = 0; i < order.size(); ++i) position[order[i]] = static_cast<int>(i);
  std::map<Vertex, VertexSet> parents;
  for (Vertex v : g.vertices()) {
    VertexSet ps;
    for (Vertex w : g.neighbors(v))
      if (position[w] < position[v]) ps.push_back(w);
    parents[v] = ps;
  }
  return validate_dag(g, id, parents);
}

inline FamilyPtr random_family(std::mt19937_64& gen, const UndirectedGraph& g, int n_dags) {
  std::vector<ParentMap> dags;
  std::map<std::string, std::vector<VertexSet>> orders;
  for (int i = 0; i < n_dags; ++i) {
    auto dag = random_moral_dag(gen, g, "d" + std::to_string(i));
    auto candidates = find_p_perfect_orders(g, dag);
    const auto& pick = candidates[std::uniform_int_distribution<size_t>(0, candidates.size() - 1)(gen)];
    orders[dag.id] = pick.cliques;
    dags.push_back(std::move(dag));
  }
  return std::make_shared<const DagFamily>(make_family(g, std::move(dags), orders));
}

// --- priors and tables --------------------------------------------------------

inline ContingencyTable random_counts(std::mt19937_64& gen, const UndirectedGraph& g,
                                      int max_entry) {
  auto t = make_counts(g);
  std::uniform_int_distribution<int> dist(0, max_entry);
  for (auto& v : t.counts.values) {
    v = dist(gen);
    t.total += v;
  }
  return t;
}

// nu^A = scale * (marginal of a positive joint table): satisfies every
// marginalization constraint, including the unpaired ones.
inline NuTables consistent_nu(const DagFamily& family, const StructureSets& sets,
                              const std::vector<double>& joint, double scale) {
  const LevelMap& levels = family.graph.levels();
  MarginalTable<double> full(family.graph.vertices(), levels);
  full.values = joint;
  NuTables nu;
  for (const auto& a : sets.q_sets) {
    auto t = marginalize(full, a, levels);
    for (auto& v : t.values) v *= scale;
    nu[a] = std::move(t);
  }
  return nu;
}

inline std::vector<double> random_joint(std::mt19937_64& gen, const UndirectedGraph& g) {
  auto radix = radix_for(g.vertices(), g.levels());
  std::vector<double> joint(static_cast<size_t>(cell_count(radix)));
  std::uniform_real_distribution<double> dist(0.2, 1.0);
  for (auto& v : joint) v = dist(gen);
  return joint;
}

// Fully random member of the family: a consistent base plus a random exact
// null-space perturbation of the constraint system, scaled to keep every
// entry positive. Exercises the freedom the family has beyond the hyper
// Dirichlet.
inline PDirichlet random_valid_prior(std::mt19937_64& gen, FamilyPtr family,
                                     double tolerance = 1e-9) {
  auto sets = compute_structure_sets(*family);
  const LevelMap& levels = family->graph.levels();
  NuTables nu = consistent_nu(*family, sets, random_joint(gen, family->graph),
                              std::uniform_real_distribution<double>(0.5, 2.0)(gen));

  auto chains = compute_chains(*family, sets);
  auto system = derive_constraints(*family, sets, chains);
  auto matrix = constraint_matrix(system, sets.q_sets, levels);
  auto basis = integer_nullspace(matrix.rows, matrix.columns);

  std::vector<double> flat;
  for (const auto& a : sets.q_sets)
    for (double v : nu.at(a).values) flat.push_back(v);
  double min_entry = *std::min_element(flat.begin(), flat.end());

  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> delta(flat.size(), 0.0);
  double max_abs = 0.0;
  for (const auto& vec : basis) {
    double c = coef(gen);
    for (size_t i = 0; i < flat.size(); ++i)
      delta[i] += c * static_cast<double>(vec[i]);
  }
  for (double v : delta) max_abs = std::max(max_abs, std::abs(v));
  if (max_abs > 0.0) {
    double scale = 0.5 * min_entry / max_abs;
    for (size_t i = 0; i < flat.size(); ++i) flat[i] += scale * delta[i];
  }
  size_t pos = 0;
  for (const auto& a : sets.q_sets)
    for (auto& v : nu.at(a).values) v = flat[pos++];
  return build_prior(std::move(family), std::move(nu), {}, tolerance);
}

// Exponent table with small independent entries.
inline ContingencyTable random_exponents(std::mt19937_64& gen, const UndirectedGraph& g,
                                         int max_entry = 3) {
  return random_counts(gen, g, max_entry);
}

// --- independent oracles --------------------------------------------------------

// Running-intersection check written directly from the definition.
inline bool rip_holds(const std::vector<VertexSet>& cliques) {
  VertexSet history;
  for (size_t j = 0; j < cliques.size(); ++j) {
    VertexSet sep = set_intersection(cliques[j], history);
    if (j > 0) {
      bool ok = false;
      for (size_t i = 0; i < j; ++i) ok = ok || is_subset(sep, cliques[i]);
      if (!ok) return false;
    }
    history = set_union(history, cliques[j]);
  }
  return true;
}

// Reachability oracle over the child map.
inline std::set<Vertex> reachable_from(const ParentMap& dag, Vertex v) {
  std::set<Vertex> seen;
  std::vector<Vertex> stack{v};
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex w : dag.children.at(x))
      if (seen.insert(w).second) stack.push_back(w);
  }
  return seen;
}

// log Dirichlet-multinomial moment for a single Dirichlet on all cells.
inline double dirichlet_moment_oracle(const std::vector<double>& alpha,
                                      const std::vector<std::int64_t>& r) {
  double total_a = 0.0;
  std::int64_t total_r = 0;
  double out = 0.0;
  for (size_t i = 0; i < alpha.size(); ++i) {
    out += log_rising_factorial(alpha[i], r[i]);
    total_a += alpha[i];
    total_r += r[i];
  }
  return out - log_rising_factorial(total_a, total_r);
}

}  // namespace fixtures
