#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pdir/common.hpp"
#include "pdir/dag.hpp"
#include "pdir/graph.hpp"

namespace pdir {

// A restricted DAG family P over one skeleton, together with the chosen
// collection O_P: exactly one p-perfect clique order per DAG. The first DAG is
// the reference member.
struct DagFamily {
  UndirectedGraph graph;
  std::vector<ParentMap> dags;
  std::vector<std::string> dag_ids;                 // in declaration order
  std::map<std::string, CliqueOrder> orders;        // dag id -> its order
  std::map<std::string, DagNumbering> numberings;   // dag id -> ladder numbering

  const ParentMap& dag(const std::string& id) const {
    for (const auto& d : dags)
      if (d.id == id) return d;
    fail("UnknownDag", "no dag '" + id + "' in the family");
  }
  const CliqueOrder& order(const std::string& id) const {
    auto it = orders.find(id);
    if (it == orders.end()) fail("UnknownOrder", "no order for dag '" + id + "'");
    return it->second;
  }
};

inline DagFamily make_family(UndirectedGraph graph, std::vector<ParentMap> dags,
                             const std::map<std::string, std::vector<VertexSet>>& orders) {
  if (dags.empty()) fail("InvalidInput", "family needs at least one dag");
  DagFamily fam;
  fam.graph = std::move(graph);
  fam.dags = std::move(dags);
  std::set<std::string> ids;
  for (const auto& d : fam.dags) {
    if (!ids.insert(d.id).second) fail("InvalidInput", "duplicate dag id '" + d.id + "'");
    fam.dag_ids.push_back(d.id);
    auto it = orders.find(d.id);
    if (it == orders.end()) fail("InvalidInput", "no clique order given for dag '" + d.id + "'");
    CliqueOrder order = validate_perfect_order(fam.graph, it->second);
    fam.numberings[d.id] = numbering(d, order);  // throws NotPPerfect if unusable
    fam.orders[d.id] = std::move(order);
  }
  if (orders.size() != fam.dags.size())
    fail("InvalidInput", "orders given for dag ids that are not in the family");
  return fam;
}

// Denominator slot of the moment formula: the empty slot, a separator
// occurrence (S,k), or an interior set from the residual intersection.
struct PSlot {
  enum Kind { kEmpty = 0, kSeparator = 1, kInterior = 2 };
  Kind kind = kEmpty;
  VertexSet subset;
  int occurrence = 0;  // 1-based, separators only

  friend bool operator<(const PSlot& a, const PSlot& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.subset != b.subset) return a.subset < b.subset;
    return a.occurrence < b.occurrence;
  }
  friend bool operator==(const PSlot& a, const PSlot& b) {
    return a.kind == b.kind && a.subset == b.subset && a.occurrence == b.occurrence;
  }

  std::string key() const {
    switch (kind) {
      case kEmpty: return "empty";
      case kSeparator: return set_key(subset) + "#" + std::to_string(occurrence);
      case kInterior: return set_key(subset);
    }
    return {};
  }
};

// The numerator family Q = cliques + interior sets, and the denominator
// multiset P = {empty} + separator occurrences + interior sets.
struct StructureSets {
  std::vector<VertexSet> cliques;        // canonical order
  std::vector<VertexSet> interior_sets;  // the intersection of the residual images, sorted
  std::vector<VertexSet> q_sets;         // cliques then interior sets
  std::vector<PSlot> p_slots;            // empty, separator occurrences, interior sets
};

inline StructureSets compute_structure_sets(const DagFamily& family) {
  StructureSets sets;
  sets.cliques = find_cliques(family.graph);

  bool first = true;
  std::set<VertexSet> interior;
  for (const auto& dag : family.dags) {
    auto img = image_multisets(family.graph, dag);
    std::set<VertexSet> r(img.residual_image.begin(), img.residual_image.end());
    if (first) {
      interior = std::move(r);
      first = false;
    } else {
      std::set<VertexSet> keep;
      for (const auto& s : interior)
        if (r.count(s)) keep.insert(s);
      interior = std::move(keep);
    }
  }
  sets.interior_sets.assign(interior.begin(), interior.end());

  for (const auto& b : sets.interior_sets) {
    int containing = 0;
    for (const auto& c : sets.cliques)
      if (is_subset(b, c)) ++containing;
    if (containing != 1)
      fail("InteriorSetInMultipleCliques",
           "interior set " + set_str(b) + " lies in " + std::to_string(containing) +
               " cliques; the nested-chain construction requires exactly one");
  }

  sets.q_sets = sets.cliques;
  sets.q_sets.insert(sets.q_sets.end(), sets.interior_sets.begin(), sets.interior_sets.end());

  sets.p_slots.push_back(PSlot{PSlot::kEmpty, {}, 0});
  for (const auto& occ : separator_multiset(family.graph))
    sets.p_slots.push_back(PSlot{PSlot::kSeparator, occ.separator, occ.occurrence_index});
  for (const auto& b : sets.interior_sets)
    sets.p_slots.push_back(PSlot{PSlot::kInterior, b, 0});
  return sets;
}

// Nested chain S = Q_jc < ... < Q_1 < Q_0 = C for one (order, clique-position)
// pair; the interior elements are the interior sets contained in the clique.
struct CliqueChain {
  VertexSet clique;
  VertexSet bottom;                 // paired separator (empty for the first clique)
  std::vector<VertexSet> elements;  // Q_0 = clique, ..., Q_jc = bottom
  size_t length() const { return elements.size() - 1; }  // j_C
};

using FamilyChains = std::map<std::string, std::vector<CliqueChain>>;

inline FamilyChains compute_chains(const DagFamily& family, const StructureSets& sets) {
  FamilyChains chains;
  for (const auto& id : family.dag_ids) {
    const CliqueOrder& order = family.orders.at(id);
    std::vector<CliqueChain> per_clique;
    for (size_t l = 0; l < order.size(); ++l) {
      CliqueChain chain;
      chain.clique = order.cliques[l];
      chain.bottom = order.separators[l];
      chain.elements.push_back(chain.clique);
      // Ladder prefixes q_{v_{l,j}} below the clique that are interior sets.
      VertexSet prefix = order.separators[l];
      std::vector<VertexSet> inner;
      for (Vertex v : family.numberings.at(id).ladders[l]) {
        prefix = set_insert(prefix, v);
        if (prefix != chain.clique &&
            std::binary_search(sets.interior_sets.begin(), sets.interior_sets.end(), prefix))
          inner.push_back(prefix);
      }
      for (auto it = inner.rbegin(); it != inner.rend(); ++it) chain.elements.push_back(*it);
      chain.elements.push_back(chain.bottom);
      for (size_t i = 1; i < chain.elements.size(); ++i)
        if (!is_subset(chain.elements[i], chain.elements[i - 1]) ||
            chain.elements[i] == chain.elements[i - 1])
          fail("ChainNotNested", "chain for clique " + set_str(chain.clique) +
                                     " in order of dag '" + id + "' is not strictly nested");
      // every interior set inside the clique must appear in the chain
      size_t expected = 0;
      for (const auto& b : sets.interior_sets)
        if (is_subset(b, chain.clique)) ++expected;
      if (inner.size() != expected)
        fail("ChainNotNested", "chain for clique " + set_str(chain.clique) +
                                   " misses an interior set");
      per_clique.push_back(std::move(chain));
    }
    chains[id] = std::move(per_clique);
  }
  return chains;
}

// marginalize(nu^source -> target); the symbolic building block of the
// hyperparameter constraints.
struct MarginalExpr {
  VertexSet source;
  VertexSet target;

  friend bool operator==(const MarginalExpr& a, const MarginalExpr& b) {
    return a.source == b.source && a.target == b.target;
  }
  std::string str() const {
    return target.empty() ? "sum(nu[" + set_key(source) + "])"
                          : "nu[" + set_key(source) + "]->[" + set_key(target) + "]";
  }
};

// One slot of the denominator multiset with every expression the orders tie to
// it. Interior slots and single-expression classes are definitional; a class
// with m >= 2 distinct expressions contributes (m-1)*|I_B| scalar equalities.
struct ConstraintClass {
  PSlot slot;
  std::vector<MarginalExpr> exprs;
};

struct ConstraintSystem {
  std::vector<ConstraintClass> classes;

  const ConstraintClass& class_for(const PSlot& slot) const {
    for (const auto& c : classes)
      if (c.slot == slot) return c;
    fail("InternalError", "no constraint class for slot " + slot.key());
  }
  size_t scalar_constraint_count(const LevelMap& levels) const {
    size_t n = 0;
    for (const auto& c : classes)
      if (c.exprs.size() > 1)
        n += (c.exprs.size() - 1) * static_cast<size_t>(cell_count(radix_for(c.slot.subset, levels)));
    return n;
  }
};

// Occurrence matching across orders is positional: the k-th occurrence of a
// separator in clique-order position is identified across every order.
inline ConstraintSystem derive_constraints(const DagFamily& family, const StructureSets& sets,
                                           const FamilyChains& chains) {
  std::map<PSlot, std::vector<MarginalExpr>> classes;
  for (const auto& slot : sets.p_slots) classes[slot];

  for (const auto& id : family.dag_ids) {
    const CliqueOrder& order = family.orders.at(id);
    const auto& order_chains = chains.at(id);
    std::map<VertexSet, int> occurrence;
    for (size_t l = 0; l < order.size(); ++l) {
      const CliqueChain& chain = order_chains[l];
      // Interior links B = Q_i defined from the element directly above.
      for (size_t i = 1; i + 1 < chain.elements.size(); ++i) {
        PSlot slot{PSlot::kInterior, chain.elements[i], 0};
        MarginalExpr expr{chain.elements[i - 1], chain.elements[i]};
        auto& exprs = classes.at(slot);
        if (std::find(exprs.begin(), exprs.end(), expr) == exprs.end()) exprs.push_back(expr);
      }
      // Bottom link for the paired separator (or the grand total for l = 1).
      MarginalExpr bottom{chain.elements[chain.elements.size() - 2], chain.bottom};
      PSlot slot = l == 0 ? PSlot{PSlot::kEmpty, {}, 0}
                          : PSlot{PSlot::kSeparator, chain.bottom, ++occurrence[chain.bottom]};
      auto it = classes.find(slot);
      if (it == classes.end())
        fail("InternalError", "order of dag '" + id + "' produced unknown slot " + slot.key());
      auto& exprs = it->second;
      if (std::find(exprs.begin(), exprs.end(), bottom) == exprs.end()) exprs.push_back(bottom);
    }
  }

  ConstraintSystem system;
  for (const auto& slot : sets.p_slots) {
    const auto& exprs = classes.at(slot);
    if (exprs.empty()) fail("InternalError", "slot " + slot.key() + " received no expression");
    system.classes.push_back({slot, exprs});
  }
  return system;
}

struct SeparatingReport {
  bool separating = false;
  VertexSet uncovered;  // vertices with the same parent set in every dag
};

inline SeparatingReport is_separating(const DagFamily& family) {
  SeparatingReport report;
  for (Vertex v : family.graph.vertices()) {
    bool differs = false;
    const VertexSet& first = family.dags.front().parents.at(v);
    for (const auto& dag : family.dags)
      if (dag.parents.at(v) != first) {
        differs = true;
        break;
      }
    if (!differs) report.uncovered.push_back(v);
  }
  report.separating = report.uncovered.empty();
  return report;
}

struct HyperDirichletSufficiencyReport {
  bool sufficient = false;
  bool interior_empty = false;
  std::vector<std::pair<VertexSet, VertexSet>> unpaired;  // (separator, clique)
};

// Sufficient condition for the prior family to collapse to the hyper
// Dirichlet: no interior sets and every separator-clique containment
// realized as a pairing by some order in the collection.
inline HyperDirichletSufficiencyReport is_hyper_dirichlet_sufficient(const DagFamily& family,
                                                                     const StructureSets& sets) {
  HyperDirichletSufficiencyReport report;
  report.interior_empty = sets.interior_sets.empty();
  std::set<std::pair<VertexSet, VertexSet>> paired;
  for (const auto& id : family.dag_ids) {
    const CliqueOrder& order = family.orders.at(id);
    for (size_t l = 1; l < order.size(); ++l)
      paired.insert({order.separators[l], order.cliques[l]});
  }
  std::set<VertexSet> separators;
  for (const auto& occ : separator_multiset(family.graph)) separators.insert(occ.separator);
  for (const auto& s : separators)
    for (const auto& c : sets.cliques)
      if (is_subset(s, c) && !paired.count({s, c})) report.unpaired.push_back({s, c});
  report.sufficient = report.interior_empty && report.unpaired.empty();
  return report;
}

}  // namespace pdir
