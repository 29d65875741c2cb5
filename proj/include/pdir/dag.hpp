#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pdir/common.hpp"
#include "pdir/graph.hpp"

namespace pdir {

// A moral DAG over a declared skeleton, stored as the parent function p_v.
// q_v = p_v + {v}; c_v are the children. Validated: acyclic, skeleton equal to
// the undirected graph, no immoralities (hence Markov equivalent to it).
struct ParentMap {
  std::string id;
  std::map<Vertex, VertexSet> parents;
  std::map<Vertex, VertexSet> children;
  std::map<Vertex, VertexSet> closures;  // q_v

  const VertexSet& parents_of(Vertex v) const {
    auto it = parents.find(v);
    if (it == parents.end()) fail("UnknownVertex", "unknown vertex " + std::to_string(v));
    return it->second;
  }
  const VertexSet& closure_of(Vertex v) const { return closures.at(v); }
};

inline ParentMap validate_dag(const UndirectedGraph& g, const std::string& id,
                              const std::map<Vertex, VertexSet>& parents) {
  ParentMap dag;
  dag.id = id;
  for (Vertex v : g.vertices()) {
    auto it = parents.find(v);
    if (it == parents.end())
      fail("InvalidInput", "dag '" + id + "': no parent set for vertex " + std::to_string(v));
    dag.parents[v] = normalized(it->second);
  }
  if (parents.size() != g.vertex_count())
    fail("InvalidInput", "dag '" + id + "': parent map mentions undeclared vertices");

  // Skeleton check and children map.
  std::set<std::pair<Vertex, Vertex>> implied;
  for (const auto& [v, ps] : dag.parents) {
    for (Vertex w : ps) {
      if (!g.levels().count(w))
        fail("UnknownVertex", "dag '" + id + "': unknown parent " + std::to_string(w));
      if (w == v) fail("CycleDetected", "dag '" + id + "': vertex " + std::to_string(v) +
                                            " is its own parent");
      implied.insert({std::min(v, w), std::max(v, w)});
      dag.children[w] = set_insert(dag.children[w], v);
    }
    dag.children.try_emplace(v);
  }
  if (implied != g.edges())
    fail("SkeletonMismatch", "dag '" + id + "': oriented edges do not match the graph skeleton");

  // Acyclicity via Kahn's algorithm.
  std::map<Vertex, int> indegree;
  for (Vertex v : g.vertices()) indegree[v] = static_cast<int>(dag.parents[v].size());
  std::vector<Vertex> frontier;
  for (auto& [v, d] : indegree)
    if (d == 0) frontier.push_back(v);
  size_t done = 0;
  while (!frontier.empty()) {
    Vertex v = frontier.back();
    frontier.pop_back();
    ++done;
    for (Vertex w : dag.children[v])
      if (--indegree[w] == 0) frontier.push_back(w);
  }
  if (done != g.vertex_count()) fail("CycleDetected", "dag '" + id + "' contains a directed cycle");

  // Morality: any two parents of a common child must be adjacent.
  for (const auto& [w, ps] : dag.parents)
    for (size_t i = 0; i < ps.size(); ++i)
      for (size_t j = i + 1; j < ps.size(); ++j)
        if (!g.adjacent(ps[i], ps[j]))
          fail("ImmoralityDetected", "dag '" + id + "': parents " + std::to_string(ps[i]) +
                                         " and " + std::to_string(ps[j]) + " of " +
                                         std::to_string(w) + " are not adjacent");

  for (Vertex v : g.vertices()) dag.closures[v] = set_insert(dag.parents[v], v);
  return dag;
}

inline VertexSet descendants(const ParentMap& dag, Vertex v) {
  if (!dag.parents.count(v)) fail("UnknownVertex", "unknown vertex " + std::to_string(v));
  std::set<Vertex> seen;
  std::vector<Vertex> stack{v};
  while (!stack.empty()) {
    Vertex x = stack.back();
    stack.pop_back();
    for (Vertex w : dag.children.at(x))
      if (seen.insert(w).second) stack.push_back(w);
  }
  return {seen.begin(), seen.end()};
}

inline VertexSet non_descendants(const ParentMap& dag, Vertex v) {
  VertexSet all;
  for (const auto& [w, _] : dag.parents) all.push_back(w);
  return set_difference(set_difference(all, descendants(dag, v)), {v});
}

// Vertex numbering v_{l,j} attached to a p-perfect order: within each clique
// the residual vertices form a parent ladder starting from the separator.
struct DagNumbering {
  // per clique position l: residual vertices v_{l,s_l+1}..v_{l,c_l} in ladder order
  std::vector<std::vector<Vertex>> ladders;
};

inline std::optional<DagNumbering> try_numbering(const ParentMap& dag, const CliqueOrder& order) {
  DagNumbering numbering;
  for (size_t l = 0; l < order.size(); ++l) {
    VertexSet rung = order.separators[l];
    VertexSet remaining = order.residuals[l];
    std::vector<Vertex> ladder;
    while (!remaining.empty()) {
      std::optional<Vertex> next;
      for (Vertex v : remaining)
        if (dag.parents.at(v) == rung) {
          next = v;
          break;
        }
      if (!next) return std::nullopt;
      ladder.push_back(*next);
      rung = set_insert(rung, *next);
      remaining = set_difference(remaining, {*next});
    }
    if (rung != order.cliques[l]) return std::nullopt;
    numbering.ladders.push_back(std::move(ladder));
  }
  return numbering;
}

inline DagNumbering numbering(const ParentMap& dag, const CliqueOrder& order) {
  auto n = try_numbering(dag, order);
  if (!n)
    fail("NotPPerfect", "dag '" + dag.id + "': clique order admits no parent-ladder numbering");
  return *n;
}

// All perfect clique orders that are p-perfect for the DAG (and therefore
// admit the ladder numbering). Enumerates every perfect order and filters;
// clique counts stay small at the scale this library targets.
inline std::vector<CliqueOrder> find_p_perfect_orders(const UndirectedGraph& g,
                                                      const ParentMap& dag) {
  std::vector<CliqueOrder> out;
  for (auto& order : all_perfect_orders(g))
    if (try_numbering(dag, order)) out.push_back(std::move(order));
  if (out.empty())
    fail("NoPerfectOrderFound",
         "dag '" + dag.id + "': no p-perfect order exists; this should be unreachable for a "
                            "validated moral DAG and indicates a bug or invalid input");
  return out;
}

struct ImageMultisets {
  std::vector<VertexSet> q_image;       // set: all q_v (distinct by construction)
  std::vector<VertexSet> p_image;       // multiset: all p_v, sorted with repeats
  std::vector<VertexSet> residual_image;  // R_p = q(V) \ cliques = p(V) \ separators
};

inline ImageMultisets image_multisets(const UndirectedGraph& g, const ParentMap& dag) {
  ImageMultisets out;
  for (const auto& [v, q] : dag.closures) out.q_image.push_back(q);
  std::sort(out.q_image.begin(), out.q_image.end());
  for (const auto& [v, p] : dag.parents) out.p_image.push_back(p);
  std::sort(out.p_image.begin(), out.p_image.end());
  std::set<VertexSet> cliques;
  for (const auto& c : find_cliques(g)) cliques.insert(c);
  for (const auto& q : out.q_image)
    if (!cliques.count(q)) out.residual_image.push_back(q);
  return out;
}

}  // namespace pdir
