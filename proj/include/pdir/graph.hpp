#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pdir/common.hpp"
#include "pdir/table.hpp"

namespace pdir {

// Undirected decomposable skeleton. Connected, no self-loops, every variable
// has at least two states. Immutable once constructed.
class UndirectedGraph {
 public:
  static UndirectedGraph create(const std::vector<std::pair<Vertex, int>>& vertex_levels,
                                const std::vector<std::pair<Vertex, Vertex>>& edges) {
    UndirectedGraph g;
    for (auto [v, lv] : vertex_levels) {
      if (g.levels_.count(v)) fail("InvalidInput", "duplicate vertex id " + std::to_string(v));
      if (lv < 2) fail("InvalidInput", "vertex " + std::to_string(v) + " needs at least 2 levels");
      g.levels_[v] = lv;
    }
    for (auto& [v, lv] : g.levels_) g.vertices_.push_back(v);
    for (auto [a, b] : edges) {
      if (a == b) fail("InvalidInput", "self-loop at vertex " + std::to_string(a));
      if (!g.levels_.count(a) || !g.levels_.count(b))
        fail("InvalidInput", "edge endpoint not a declared vertex: " + std::to_string(a) + "-" +
                                 std::to_string(b));
      if (a > b) std::swap(a, b);
      g.edges_.insert({a, b});
    }
    for (auto& [a, b] : g.edges_) {
      g.adj_[a] = set_insert(g.adj_[a], b);
      g.adj_[b] = set_insert(g.adj_[b], a);
    }
    g.check_connected();
    return g;
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const LevelMap& levels() const { return levels_; }
  int level(Vertex v) const {
    auto it = levels_.find(v);
    if (it == levels_.end()) fail("UnknownVertex", "unknown vertex " + std::to_string(v));
    return it->second;
  }
  size_t vertex_count() const { return vertices_.size(); }
  const std::set<std::pair<Vertex, Vertex>>& edges() const { return edges_; }

  bool adjacent(Vertex a, Vertex b) const {
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    return edges_.count({a, b}) > 0;
  }

  VertexSet neighbors(Vertex v) const {
    auto it = adj_.find(v);
    if (it != adj_.end()) return it->second;
    if (!levels_.count(v)) fail("UnknownVertex", "unknown vertex " + std::to_string(v));
    return {};
  }

  bool is_complete(const VertexSet& s) const {
    for (size_t i = 0; i < s.size(); ++i)
      for (size_t j = i + 1; j < s.size(); ++j)
        if (!adjacent(s[i], s[j])) return false;
    return true;
  }

  // Signature used to detect mismatched graphs across files.
  bool same_variables(const UndirectedGraph& other) const { return levels_ == other.levels_; }

 private:
  void check_connected() const {
    if (vertices_.empty()) fail("InvalidInput", "graph has no vertices");
    std::set<Vertex> seen;
    std::deque<Vertex> queue{vertices_.front()};
    seen.insert(vertices_.front());
    while (!queue.empty()) {
      Vertex v = queue.front();
      queue.pop_front();
      for (Vertex w : neighbors(v))
        if (seen.insert(w).second) queue.push_back(w);
    }
    if (seen.size() != vertices_.size())
      fail("InvalidInput",
           "graph is disconnected; analyse each connected component separately");
  }

  std::vector<Vertex> vertices_;
  LevelMap levels_;
  std::set<std::pair<Vertex, Vertex>> edges_;
  std::map<Vertex, VertexSet> adj_;
};

// An ordered clique sequence C_1..C_K with its separators S_l = C_l n H_{l-1}
// (S_1 = {}), histories H_l and residuals R_l = C_l \ S_l.
struct CliqueOrder {
  std::vector<VertexSet> cliques;
  std::vector<VertexSet> separators;
  std::vector<VertexSet> histories;
  std::vector<VertexSet> residuals;

  size_t size() const { return cliques.size(); }
};

struct SeparatorOccurrence {
  VertexSet separator;
  int occurrence_index = 1;  // position among equal separators, 1-based
};

struct DecomposabilityResult {
  bool decomposable = false;
  std::vector<Vertex> elimination_order;  // perfect elimination ordering when decomposable
  std::vector<Vertex> cycle;              // a chordless cycle of length >= 4 otherwise
};

namespace detail {

// Maximum-cardinality search visit order.
inline std::vector<Vertex> mcs_order(const UndirectedGraph& g) {
  std::map<Vertex, int> weight;
  std::set<Vertex> pending(g.vertices().begin(), g.vertices().end());
  for (Vertex v : g.vertices()) weight[v] = 0;
  std::vector<Vertex> order;
  while (!pending.empty()) {
    Vertex best = *pending.begin();
    for (Vertex v : pending)
      if (weight[v] > weight[best]) best = v;
    order.push_back(best);
    pending.erase(best);
    for (Vertex w : g.neighbors(best))
      if (pending.count(w)) ++weight[w];
  }
  return order;
}

inline std::optional<std::vector<Vertex>> find_chordless_cycle(const UndirectedGraph& g) {
  // Look for non-adjacent u,w with a common neighbor v and a u-w path that
  // avoids the rest of v's closed neighborhood; v plus that path is chordless.
  for (Vertex v : g.vertices()) {
    VertexSet nb = g.neighbors(v);
    for (size_t i = 0; i < nb.size(); ++i) {
      for (size_t j = i + 1; j < nb.size(); ++j) {
        Vertex u = nb[i], w = nb[j];
        if (g.adjacent(u, w)) continue;
        std::set<Vertex> blocked(nb.begin(), nb.end());
        blocked.insert(v);
        blocked.erase(u);
        blocked.erase(w);
        std::map<Vertex, Vertex> parent;
        std::deque<Vertex> queue{u};
        parent[u] = u;
        bool found = false;
        while (!queue.empty() && !found) {
          Vertex x = queue.front();
          queue.pop_front();
          for (Vertex y : g.neighbors(x)) {
            if (blocked.count(y) || parent.count(y)) continue;
            parent[y] = x;
            if (y == w) {
              found = true;
              break;
            }
            queue.push_back(y);
          }
        }
        if (!found) continue;
        std::vector<Vertex> path{w};
        while (path.back() != u) path.push_back(parent[path.back()]);
        path.push_back(v);  // cycle v - u - ... - w - v
        std::reverse(path.begin(), path.end());
        return path;
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline DecomposabilityResult check_decomposable(const UndirectedGraph& g) {
  DecomposabilityResult res;
  std::vector<Vertex> order = detail::mcs_order(g);
  std::set<Vertex> visited;
  bool chordal = true;
  for (Vertex v : order) {
    VertexSet earlier;
    for (Vertex w : g.neighbors(v))
      if (visited.count(w)) earlier.push_back(w);
    if (!g.is_complete(earlier)) {
      chordal = false;
      break;
    }
    visited.insert(v);
  }
  if (chordal) {
    res.decomposable = true;
    res.elimination_order.assign(order.rbegin(), order.rend());
    return res;
  }
  auto cycle = detail::find_chordless_cycle(g);
  if (!cycle) fail("InternalError", "MCS rejected the graph but no chordless cycle was found");
  res.decomposable = false;
  res.cycle = *cycle;
  return res;
}

// Maximal cliques in canonical order (lexicographic on sorted vertex lists).
inline std::vector<VertexSet> find_cliques(const UndirectedGraph& g) {
  auto dec = check_decomposable(g);
  if (!dec.decomposable)
    fail("NotDecomposable", "graph has a chordless cycle through " + set_str(normalized(dec.cycle)));
  // Eliminating along a PEO, {v} + not-yet-eliminated neighbors is complete;
  // the maximal ones among these sets are exactly the cliques.
  std::set<Vertex> remaining(g.vertices().begin(), g.vertices().end());
  std::vector<VertexSet> candidates;
  for (Vertex v : dec.elimination_order) {
    VertexSet c{v};
    for (Vertex w : g.neighbors(v))
      if (remaining.count(w)) c.push_back(w);
    candidates.push_back(normalized(c));
    remaining.erase(v);
  }
  std::vector<VertexSet> cliques;
  for (const auto& c : candidates) {
    bool maximal = true;
    for (const auto& d : candidates)
      if (c != d && is_subset(c, d)) {
        maximal = false;
        break;
      }
    if (maximal) cliques.push_back(c);
  }
  std::sort(cliques.begin(), cliques.end());
  cliques.erase(std::unique(cliques.begin(), cliques.end()), cliques.end());
  return cliques;
}

// Checks the running intersection property and fills in S/H/R.
inline CliqueOrder validate_perfect_order(const UndirectedGraph& g,
                                          const std::vector<VertexSet>& cliques_in_order) {
  std::vector<VertexSet> expected = find_cliques(g);
  std::vector<VertexSet> sorted;
  for (const auto& c : cliques_in_order) sorted.push_back(normalized(c));
  {
    auto probe = sorted;
    std::sort(probe.begin(), probe.end());
    if (probe != expected)
      fail("InvalidInput", "clique list does not enumerate every maximal clique exactly once");
  }
  CliqueOrder order;
  VertexSet history;
  for (size_t l = 0; l < sorted.size(); ++l) {
    const VertexSet& c = sorted[l];
    VertexSet sep = set_intersection(c, history);
    if (l > 0) {
      bool covered = false;
      for (size_t i = 0; i < l && !covered; ++i) covered = is_subset(sep, sorted[i]);
      if (!covered)
        fail("NotPerfectOrder", "running intersection violated at clique index " +
                                    std::to_string(l + 1) + " (separator " + set_str(sep) + ")");
    }
    history = set_union(history, c);
    order.cliques.push_back(c);
    order.separators.push_back(l == 0 ? VertexSet{} : sep);
    order.histories.push_back(history);
    order.residuals.push_back(set_difference(c, order.separators.back()));
  }
  return order;
}

namespace detail {

inline void perfect_order_dfs(const UndirectedGraph& g, const std::vector<VertexSet>& cliques,
                              std::vector<size_t>& chosen, std::vector<bool>& used,
                              VertexSet& history, std::vector<std::vector<size_t>>& out,
                              bool first_only) {
  if (first_only && !out.empty()) return;
  if (chosen.size() == cliques.size()) {
    out.push_back(chosen);
    return;
  }
  for (size_t k = 0; k < cliques.size(); ++k) {
    if (used[k]) continue;
    VertexSet sep = set_intersection(cliques[k], history);
    if (!chosen.empty()) {
      bool covered = false;
      for (size_t i : chosen)
        if (is_subset(sep, cliques[i])) {
          covered = true;
          break;
        }
      if (!covered) continue;
    }
    used[k] = true;
    chosen.push_back(k);
    VertexSet saved = history;
    history = set_union(history, cliques[k]);
    perfect_order_dfs(g, cliques, chosen, used, history, out, first_only);
    history = std::move(saved);
    chosen.pop_back();
    used[k] = false;
  }
}

inline std::vector<std::vector<size_t>> perfect_order_indices(const UndirectedGraph& g,
                                                              bool first_only) {
  std::vector<VertexSet> cliques = find_cliques(g);
  std::vector<size_t> chosen;
  std::vector<bool> used(cliques.size(), false);
  VertexSet history;
  std::vector<std::vector<size_t>> out;
  perfect_order_dfs(g, cliques, chosen, used, history, out, first_only);
  return out;
}

}  // namespace detail

// Lexicographically first perfect order over the canonical clique list.
inline CliqueOrder canonical_perfect_order(const UndirectedGraph& g) {
  auto cliques = find_cliques(g);
  auto idx = detail::perfect_order_indices(g, /*first_only=*/true);
  if (idx.empty()) fail("NotDecomposable", "no perfect order exists");
  std::vector<VertexSet> seq;
  for (size_t k : idx.front()) seq.push_back(cliques[k]);
  return validate_perfect_order(g, seq);
}

inline std::vector<CliqueOrder> all_perfect_orders(const UndirectedGraph& g,
                                                   size_t max_cliques = 9) {
  auto cliques = find_cliques(g);
  if (cliques.size() > max_cliques)
    fail("TooLarge", "perfect-order enumeration limited to " + std::to_string(max_cliques) +
                         " cliques");
  std::vector<CliqueOrder> out;
  for (const auto& idx : detail::perfect_order_indices(g, /*first_only=*/false)) {
    std::vector<VertexSet> seq;
    for (size_t k : idx) seq.push_back(cliques[k]);
    out.push_back(validate_perfect_order(g, seq));
  }
  return out;
}

// Multiset {S_2..S_K}; identical for every perfect order. Occurrences of equal
// separators are indexed by first appearance in the canonical perfect order.
inline std::vector<SeparatorOccurrence> separator_multiset(const UndirectedGraph& g) {
  CliqueOrder order = canonical_perfect_order(g);
  std::map<VertexSet, int> seen;
  std::vector<SeparatorOccurrence> out;
  for (size_t l = 1; l < order.size(); ++l)
    out.push_back({order.separators[l], ++seen[order.separators[l]]});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.separator != b.separator ? a.separator < b.separator
                                      : a.occurrence_index < b.occurrence_index;
  });
  return out;
}

}  // namespace pdir
