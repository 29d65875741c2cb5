#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pdir/common.hpp"
#include "pdir/family.hpp"
#include "pdir/linalg.hpp"
#include "pdir/rng.hpp"
#include "pdir/table.hpp"

namespace pdir {

// log of the rising factorial a(a+1)...(a+n-1) = Gamma(a+n)/Gamma(a). The
// explicit product keeps small integer exponents exact (0 -> 0, 1 -> log a).
inline double log_rising_factorial(double a, std::int64_t n) {
  if (n < 0) fail("NegativeExponent", "rising factorial needs a non-negative exponent");
  if (n == 0) return 0.0;
  if (!(a > 0.0)) fail("NonPositiveParameter", "rising factorial base must be positive");
  if (n <= 256) {
    double s = 0.0;
    for (std::int64_t t = 0; t < n; ++t) s += std::log(a + static_cast<double>(t));
    return s;
  }
  return std::lgamma(a + static_cast<double>(n)) - std::lgamma(a);
}

using NuTables = std::map<VertexSet, MarginalTable<double>>;
using MuTables = std::map<PSlot, MarginalTable<double>>;

// The P-Dirichlet prior: nu tables on the numerator family Q, mu tables on
// the denominator slots P, validated against the linear constraint system
// derived from the order collection. Immutable once built.
struct PDirichlet {
  std::shared_ptr<const DagFamily> family;
  StructureSets sets;
  FamilyChains chains;
  ConstraintSystem constraints;
  NuTables nu;
  MuTables mu;
  double tolerance = 1e-9;
  double worst_residual = 0.0;

  const MarginalTable<double>& nu_table(const VertexSet& a) const {
    auto it = nu.find(a);
    if (it == nu.end()) fail("MissingTable", "no nu table for " + set_str(a));
    return it->second;
  }
  const MarginalTable<double>& mu_table(const PSlot& slot) const {
    auto it = mu.find(slot);
    if (it == mu.end()) fail("MissingTable", "no mu table for slot " + slot.key());
    return it->second;
  }
  double equivalent_sample_size() const { return mu_table(PSlot{PSlot::kEmpty, {}, 0}).values[0]; }
};

namespace detail {

inline MarginalTable<double> evaluate_expr(const NuTables& nu, const MarginalExpr& expr,
                                           const LevelMap& levels) {
  auto it = nu.find(expr.source);
  if (it == nu.end()) fail("MissingTable", "no nu table for " + set_str(expr.source));
  return marginalize(it->second, expr.target, levels);
}

inline double relative_gap(const MarginalTable<double>& a, const MarginalTable<double>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    double scale = std::max(std::abs(a.values[i]), 1e-300);
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]) / scale);
  }
  return worst;
}

}  // namespace detail

inline PDirichlet build_prior(std::shared_ptr<const DagFamily> family, NuTables nu_tables,
                              MuTables mu_tables = {}, double tolerance = 1e-9) {
  PDirichlet prior;
  prior.family = std::move(family);
  prior.sets = compute_structure_sets(*prior.family);
  prior.chains = compute_chains(*prior.family, prior.sets);
  prior.constraints = derive_constraints(*prior.family, prior.sets, prior.chains);
  prior.tolerance = tolerance;
  const LevelMap& levels = prior.family->graph.levels();

  for (const auto& a : prior.sets.q_sets) {
    auto it = nu_tables.find(a);
    if (it == nu_tables.end()) fail("MissingTable", "missing nu table for " + set_str(a));
    auto& table = it->second;
    table.subset = a;
    table.radix = radix_for(a, levels);
    if (table.values.size() != static_cast<size_t>(cell_count(table.radix)))
      fail("InvalidInput", "nu table for " + set_str(a) + " has the wrong length");
    for (double v : table.values)
      if (!(v > 0.0)) fail("NonPositiveParameter", "nu table for " + set_str(a) +
                                                       " has a non-positive entry");
  }
  if (nu_tables.size() != prior.sets.q_sets.size())
    fail("InvalidInput", "nu tables given for subsets outside the numerator family");
  prior.nu = std::move(nu_tables);

  // mu entries default to the first expression of their class; explicit
  // entries are kept and validated below like any other expression.
  for (const auto& cls : prior.constraints.classes) {
    auto it = mu_tables.find(cls.slot);
    if (it != mu_tables.end()) {
      auto& table = it->second;
      table.subset = cls.slot.subset;
      table.radix = radix_for(cls.slot.subset, levels);
      if (table.values.size() != static_cast<size_t>(cell_count(table.radix)))
        fail("InvalidInput", "mu table for slot " + cls.slot.key() + " has the wrong length");
      for (double v : table.values)
        if (!(v > 0.0))
          fail("NonPositiveParameter", "mu table for slot " + cls.slot.key() +
                                           " has a non-positive entry");
      prior.mu[cls.slot] = std::move(table);
    } else {
      prior.mu[cls.slot] = detail::evaluate_expr(prior.nu, cls.exprs.front(), levels);
    }
  }
  for (const auto& [slot, _] : mu_tables)
    if (!prior.mu.count(slot)) fail("InvalidInput", "mu table for unknown slot " + slot.key());

  double worst = 0.0;
  const ConstraintClass* worst_class = nullptr;
  for (const auto& cls : prior.constraints.classes) {
    const auto& ref = prior.mu.at(cls.slot);
    for (const auto& expr : cls.exprs) {
      double gap = detail::relative_gap(ref, detail::evaluate_expr(prior.nu, expr, levels));
      if (gap > worst) {
        worst = gap;
        worst_class = &cls;
      }
    }
  }
  prior.worst_residual = worst;
  if (worst > tolerance)
    fail("ConstraintViolated",
         "hyperparameter constraints violated: worst relative residual " + std::to_string(worst) +
             " in class " + (worst_class ? worst_class->slot.key() : std::string("?")) +
             " exceeds tolerance " + std::to_string(tolerance));
  return prior;
}

// nu^A = alpha/|I_A| on every numerator set; satisfies every constraint
// exactly and has expected cell probabilities 1/|I|.
inline PDirichlet uniform_template(std::shared_ptr<const DagFamily> family, double alpha,
                                   double tolerance = 1e-9) {
  if (!(alpha > 0.0)) fail("NonPositiveParameter", "alpha must be positive");
  const LevelMap& levels = family->graph.levels();
  StructureSets sets = compute_structure_sets(*family);
  NuTables nu;
  for (const auto& a : sets.q_sets) {
    MarginalTable<double> t(a, levels);
    double v = alpha / static_cast<double>(t.size());
    for (auto& x : t.values) x = v;
    nu[a] = std::move(t);
  }
  return build_prior(std::move(family), std::move(nu), {}, tolerance);
}

namespace detail {

inline void check_exponent_table(const PDirichlet& prior, const ContingencyTable& r) {
  const auto& g = prior.family->graph;
  if (r.counts.subset != g.vertices() || r.counts.radix != radix_for(g.vertices(), g.levels()))
    fail("GraphMismatch", "exponent table does not match the family's variables");
  for (auto v : r.counts.values)
    if (v < 0) fail("NegativeExponent", "exponent table has a negative entry");
}

}  // namespace detail

// log E prod_i p(i)^{r_i}: rising-factorial products over the numerator sets
// divided by the products over every denominator slot (each separator
// occurrence contributes its own factor).
inline double log_moment(const PDirichlet& prior, const ContingencyTable& r) {
  detail::check_exponent_table(prior, r);
  const LevelMap& levels = prior.family->graph.levels();
  double num = 0.0;
  for (const auto& a : prior.sets.q_sets) {
    const auto& table = prior.nu.at(a);
    auto marg = r.marginal(a, levels);
    for (size_t i = 0; i < table.values.size(); ++i)
      num += log_rising_factorial(table.values[i], marg.values[i]);
  }
  double den = 0.0;
  for (const auto& slot : prior.sets.p_slots) {
    const auto& table = prior.mu.at(slot);
    auto marg = r.marginal(slot.subset, levels);
    for (size_t i = 0; i < table.values.size(); ++i)
      den += log_rising_factorial(table.values[i], marg.values[i]);
  }
  return num - den;
}

inline double moment(const PDirichlet& prior, const ContingencyTable& r) {
  return std::exp(log_moment(prior, r));
}

// ---------------------------------------------------------------------------
// Hyper Dirichlet special case
// ---------------------------------------------------------------------------

struct HyperDirichlet {
  UndirectedGraph graph;
  CliqueOrder order;  // canonical perfect order; fixes separator multiplicities
  std::map<VertexSet, MarginalTable<double>> clique_tables;
  std::map<VertexSet, MarginalTable<double>> separator_tables;
  double total = 0.0;
};

// Validates the marginal-consistency constraints on the hyperparameters.
inline void check_hyper_consistency(const HyperDirichlet& hd, double tolerance = 1e-9) {
  const LevelMap& levels = hd.graph.levels();
  for (const auto& [c, table] : hd.clique_tables) {
    double sum = 0.0;
    for (double v : table.values) {
      if (!(v > 0.0)) fail("NonPositiveParameter", "clique table " + set_str(c) +
                                                       " has a non-positive entry");
      sum += v;
    }
    if (std::abs(sum - hd.total) > tolerance * std::max(1.0, std::abs(hd.total)))
      fail("InconsistentHyperParameters",
           "clique " + set_str(c) + " total differs from the grand total");
    for (const auto& [s, sep] : hd.separator_tables) {
      if (!is_subset(s, c)) continue;
      double gap = detail::relative_gap(sep, marginalize(table, s, levels));
      if (gap > tolerance)
        fail("InconsistentHyperParameters", "clique " + set_str(c) +
                                                " does not marginalize to separator " + set_str(s));
    }
  }
}

// log of the hyper Dirichlet normalizing constant.
inline double hyper_log_normalizer(const HyperDirichlet& hd, double tolerance = 1e-9) {
  check_hyper_consistency(hd, tolerance);
  double out = -std::lgamma(hd.total);
  for (size_t l = 0; l < hd.order.size(); ++l)
    for (double v : hd.clique_tables.at(hd.order.cliques[l]).values) out += std::lgamma(v);
  for (size_t l = 1; l < hd.order.size(); ++l)
    for (double v : hd.separator_tables.at(hd.order.separators[l]).values) out -= std::lgamma(v);
  return out;
}

// Z(alpha + r) with the marginal counts of r added slotwise.
inline HyperDirichlet hyper_shift_by_counts(const HyperDirichlet& hd, const ContingencyTable& r) {
  const LevelMap& levels = hd.graph.levels();
  HyperDirichlet out = hd;
  out.total += static_cast<double>(r.total);
  for (auto& [c, table] : out.clique_tables) {
    auto marg = r.marginal(c, levels);
    for (size_t i = 0; i < table.values.size(); ++i)
      table.values[i] += static_cast<double>(marg.values[i]);
  }
  for (auto& [s, table] : out.separator_tables) {
    auto marg = r.marginal(s, levels);
    for (size_t i = 0; i < table.values.size(); ++i)
      table.values[i] += static_cast<double>(marg.values[i]);
  }
  return out;
}

struct HyperDirichletCheck {
  bool equal = false;
  double max_deviation = 0.0;
  std::string detail;
};

// Semantic reduction test on the stored values: no interior sets, every
// clique marginalizes to a common table over each contained separator (and to
// the common grand total over the empty set), and the stored mu slots agree.
inline HyperDirichletCheck equals_hyper_dirichlet(const PDirichlet& prior) {
  HyperDirichletCheck check;
  if (!prior.sets.interior_sets.empty()) {
    check.detail = "interior set family is non-empty";
    return check;
  }
  const LevelMap& levels = prior.family->graph.levels();
  std::vector<VertexSet> targets{VertexSet{}};
  for (const auto& slot : prior.sets.p_slots)
    if (slot.kind == PSlot::kSeparator && slot.occurrence == 1) targets.push_back(slot.subset);

  for (const auto& s : targets) {
    std::optional<MarginalTable<double>> common;
    for (const auto& c : prior.sets.cliques) {
      if (!is_subset(s, c)) continue;
      auto marg = marginalize(prior.nu.at(c), s, levels);
      if (!common) {
        common = marg;
        continue;
      }
      check.max_deviation = std::max(check.max_deviation, detail::relative_gap(*common, marg));
    }
    for (const auto& slot : prior.sets.p_slots)
      if (slot.subset == s)
        check.max_deviation =
            std::max(check.max_deviation, detail::relative_gap(*common, prior.mu.at(slot)));
  }
  check.equal = check.max_deviation <= prior.tolerance;
  if (!check.equal) check.detail = "marginal consistency fails across cliques";
  return check;
}

inline HyperDirichlet to_hyper_dirichlet(const PDirichlet& prior) {
  auto check = equals_hyper_dirichlet(prior);
  if (!check.equal)
    fail("InconsistentHyperParameters",
         "prior is not hyper Dirichlet: " + check.detail +
             " (deviation " + std::to_string(check.max_deviation) + ")");
  const LevelMap& levels = prior.family->graph.levels();
  HyperDirichlet hd;
  hd.graph = prior.family->graph;
  hd.order = canonical_perfect_order(hd.graph);
  for (const auto& c : prior.sets.cliques) hd.clique_tables[c] = prior.nu.at(c);
  for (size_t l = 1; l < hd.order.size(); ++l) {
    const VertexSet& s = hd.order.separators[l];
    if (hd.separator_tables.count(s)) continue;
    for (const auto& c : prior.sets.cliques)
      if (is_subset(s, c)) {
        hd.separator_tables[s] = marginalize(prior.nu.at(c), s, levels);
        break;
      }
  }
  hd.total = prior.equivalent_sample_size();
  return hd;
}

// ---------------------------------------------------------------------------
// Sampling (independent Dirichlet blocks along one order's chains)
// ---------------------------------------------------------------------------

namespace detail {

struct SampleBlock {
  VertexSet source;                            // Q_i
  std::vector<std::vector<size_t>> cell_groups;  // per conditioning cell k: nu indices, m ascending
  std::vector<size_t> full_projection;           // full-cell index -> source-cell index
};

struct SamplePlan {
  std::vector<SampleBlock> blocks;
  std::vector<int> full_radix;
  size_t full_cells = 1;
};

inline SamplePlan make_sample_plan(const PDirichlet& prior, const std::string& order_id) {
  if (!prior.family->orders.count(order_id))
    fail("UnknownOrder", "no order '" + order_id + "' in the family");
  const LevelMap& levels = prior.family->graph.levels();
  const auto& chains = prior.chains.at(order_id);

  SamplePlan plan;
  plan.full_radix = radix_for(prior.family->graph.vertices(), levels);
  plan.full_cells = static_cast<size_t>(cell_count(plan.full_radix));
  MarginalTable<double> full_probe(prior.family->graph.vertices(), levels);

  for (const auto& chain : chains) {
    for (size_t i = 0; i + 1 < chain.elements.size(); ++i) {
      SampleBlock block;
      block.source = chain.elements[i];
      const VertexSet& cond = chain.elements[i + 1];
      const auto& src = prior.nu.at(block.source);
      auto cond_radix = radix_for(cond, levels);
      auto to_cond = projection_map(src, cond, cond_radix);
      block.cell_groups.assign(static_cast<size_t>(cell_count(cond_radix)), {});
      // Mixed-radix iteration makes the residual coordinate ascending within
      // each group automatically.
      for (size_t idx = 0; idx < src.values.size(); ++idx)
        block.cell_groups[to_cond[idx]].push_back(idx);
      block.full_projection =
          projection_map(full_probe, block.source, src.radix);
      plan.blocks.push_back(std::move(block));
    }
  }
  return plan;
}

}  // namespace detail

// Streams n_draws full probability tables to the callback. For each chain step
// and each conditioning cell an independent Dirichlet vector is drawn from the
// source nu entries; a full table is the product of its blocks. Draw order is
// fixed: cliques in the order's sequence, chain steps top down, conditioning
// cells ascending, component gammas ascending.
template <typename Callback>
void sample_stream(const PDirichlet& prior, const std::string& order_id, std::uint64_t seed,
                   int n_draws, Callback&& callback) {
  auto plan = detail::make_sample_plan(prior, order_id);
  Rng rng(seed);
  std::vector<std::vector<double>> block_prob(plan.blocks.size());
  std::vector<double> shapes;
  for (int draw = 0; draw < n_draws; ++draw) {
    for (size_t b = 0; b < plan.blocks.size(); ++b) {
      const auto& block = plan.blocks[b];
      const auto& src = prior.nu.at(block.source);
      block_prob[b].assign(src.values.size(), 0.0);
      for (const auto& group : block.cell_groups) {
        shapes.clear();
        for (size_t idx : group) shapes.push_back(src.values[idx]);
        auto probs = rng.dirichlet(shapes);
        for (size_t j = 0; j < group.size(); ++j) block_prob[b][group[j]] = probs[j];
      }
    }
    std::vector<double> table(plan.full_cells, 1.0);
    for (size_t b = 0; b < plan.blocks.size(); ++b)
      for (size_t cell = 0; cell < plan.full_cells; ++cell)
        table[cell] *= block_prob[b][plan.blocks[b].full_projection[cell]];
    callback(draw, table);
  }
}

inline std::vector<std::vector<double>> sample(const PDirichlet& prior,
                                               const std::string& order_id, std::uint64_t seed,
                                               int n_draws) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<size_t>(n_draws));
  sample_stream(prior, order_id, seed, n_draws,
                [&](int, const std::vector<double>& t) { out.push_back(t); });
  return out;
}

// ---------------------------------------------------------------------------
// Per-DAG local Dirichlet extraction
// ---------------------------------------------------------------------------

// Parameters of the independent local Dirichlet blocks p^{v|p_v} for one DAG:
// a table over I_{q_v} per vertex. Chain-position vertices take the nu table
// of their prefix directly; the others marginalize the smallest chain element
// containing their prefix.
struct LocalDirichletSet {
  std::string dag_id;
  std::map<Vertex, MarginalTable<double>> blocks;  // over q_v

  MarginalTable<double> alpha_bar(Vertex v, const VertexSet& parent_set,
                                  const LevelMap& levels) const {
    return marginalize(blocks.at(v), parent_set, levels);
  }
};

inline LocalDirichletSet extract_local_dirichlets(const PDirichlet& prior,
                                                  const std::string& dag_id) {
  bool known = false;
  for (const auto& id : prior.family->dag_ids) known = known || id == dag_id;
  if (!known) fail("UnknownDag", "no dag '" + dag_id + "' in the family");

  const LevelMap& levels = prior.family->graph.levels();
  const CliqueOrder& order = prior.family->orders.at(dag_id);
  const DagNumbering& numbering = prior.family->numberings.at(dag_id);
  const auto& chains = prior.chains.at(dag_id);

  LocalDirichletSet locals;
  locals.dag_id = dag_id;
  for (size_t l = 0; l < order.size(); ++l) {
    VertexSet prefix = order.separators[l];
    for (Vertex v : numbering.ladders[l]) {
      prefix = set_insert(prefix, v);
      // Smallest chain element containing q_v (the bottom separator never does).
      const auto& elements = chains[l].elements;
      size_t host = 0;
      for (size_t i = 0; i + 1 < elements.size(); ++i)
        if (is_subset(prefix, elements[i])) host = i;
      locals.blocks[v] = marginalize(prior.nu.at(elements[host]), prefix, levels);
    }
  }
  return locals;
}

// |log moment by the local-Dirichlet product minus log moment by the table
// formula|; an exact identity up to rounding for any valid prior.
inline double p_moment_crosscheck(const PDirichlet& prior, const std::string& dag_id,
                                  const ContingencyTable& r) {
  detail::check_exponent_table(prior, r);
  const LevelMap& levels = prior.family->graph.levels();
  const ParentMap& dag = prior.family->dag(dag_id);
  LocalDirichletSet locals = extract_local_dirichlets(prior, dag_id);

  double log_local = 0.0;
  for (const auto& [v, block] : locals.blocks) {
    auto r_q = r.marginal(block.subset, levels);
    for (size_t i = 0; i < block.values.size(); ++i)
      log_local += log_rising_factorial(block.values[i], r_q.values[i]);
    const VertexSet& parents = dag.parents_of(v);
    auto bar = locals.alpha_bar(v, parents, levels);
    auto r_p = r.marginal(parents, levels);
    for (size_t i = 0; i < bar.values.size(); ++i)
      log_local -= log_rising_factorial(bar.values[i], r_p.values[i]);
  }
  return std::abs(log_local - log_moment(prior, r));
}

// ---------------------------------------------------------------------------
// Dimension analysis
// ---------------------------------------------------------------------------

// Scalarized constraint rows over the nu entries (mu eliminated through the
// definitional links). Shared by the rank computation and the verification
// oracles.
struct ConstraintMatrix {
  IntMatrix rows;
  size_t columns = 0;
  std::vector<VertexSet> column_sets;     // aligned with q_sets
  std::vector<size_t> column_offsets;
};

inline ConstraintMatrix constraint_matrix(const ConstraintSystem& system,
                                          const std::vector<VertexSet>& q_sets,
                                          const LevelMap& levels) {
  ConstraintMatrix m;
  m.column_sets = q_sets;
  for (const auto& a : q_sets) {
    m.column_offsets.push_back(m.columns);
    m.columns += static_cast<size_t>(cell_count(radix_for(a, levels)));
  }
  auto offset_of = [&](const VertexSet& a) {
    for (size_t i = 0; i < m.column_sets.size(); ++i)
      if (m.column_sets[i] == a) return m.column_offsets[i];
    fail("InternalError", "expression source " + set_str(a) + " is not a numerator set");
  };
  for (const auto& cls : system.classes) {
    if (cls.exprs.size() < 2) continue;
    auto target_radix = radix_for(cls.slot.subset, levels);
    size_t target_cells = static_cast<size_t>(cell_count(target_radix));
    for (size_t e = 0; e + 1 < cls.exprs.size(); ++e) {
      const auto& lhs = cls.exprs[e];
      const auto& rhs = cls.exprs[e + 1];
      MarginalTable<double> lhs_probe(lhs.source, levels), rhs_probe(rhs.source, levels);
      auto lhs_map = projection_map(lhs_probe, cls.slot.subset, target_radix);
      auto rhs_map = projection_map(rhs_probe, cls.slot.subset, target_radix);
      size_t lhs_off = offset_of(lhs.source), rhs_off = offset_of(rhs.source);
      for (size_t n = 0; n < target_cells; ++n) {
        std::vector<BigInt> row(m.columns, 0);
        for (size_t i = 0; i < lhs_map.size(); ++i)
          if (lhs_map[i] == n) row[lhs_off + i] += 1;
        for (size_t i = 0; i < rhs_map.size(); ++i)
          if (rhs_map[i] == n) row[rhs_off + i] -= 1;
        m.rows.push_back(std::move(row));
      }
    }
  }
  return m;
}

// Ground-truth family dimension: free nu entries minus the exact rank of the
// scalarized constraint system.
inline int dimension_rank(const ConstraintSystem& system, const std::vector<VertexSet>& q_sets,
                          const LevelMap& levels) {
  auto m = constraint_matrix(system, q_sets, levels);
  return static_cast<int>(m.columns) - exact_rank(m.rows);
}

inline int dimension_rank(const PDirichlet& prior) {
  return dimension_rank(prior.constraints, prior.sets.q_sets, prior.family->graph.levels());
}

struct DimensionPair {
  long long family_dimension = 0;       // N_P
  long long hyper_dimension = 0;        // N_HP for the same skeleton
};

// Closed-form dimension counts. N_S counts distinct cliques paired with S
// across the order collection (number-of-containing-cliques for the hyper
// Dirichlet). When occurrence classes of a multiple separator split, the
// closed form can disagree with the rank; the rank value is authoritative.
inline DimensionPair dimension_formula(const DagFamily& family, const StructureSets& sets) {
  const LevelMap& levels = family.graph.levels();
  DimensionPair dims;
  for (const auto& q : sets.q_sets) dims.family_dimension += cell_count(radix_for(q, levels));
  for (const auto& c : sets.cliques) dims.hyper_dimension += cell_count(radix_for(c, levels));

  std::set<VertexSet> separators;
  for (const auto& occ : separator_multiset(family.graph)) separators.insert(occ.separator);
  for (const auto& s : separators) {
    std::set<VertexSet> paired;
    for (const auto& id : family.dag_ids) {
      const CliqueOrder& order = family.orders.at(id);
      for (size_t l = 1; l < order.size(); ++l)
        if (order.separators[l] == s) paired.insert(order.cliques[l]);
    }
    long long cells = cell_count(radix_for(s, levels));
    long long containing = 0;
    for (const auto& c : sets.cliques)
      if (is_subset(s, c)) ++containing;
    dims.family_dimension -= (static_cast<long long>(paired.size()) - 1) * cells;
    dims.hyper_dimension -= (containing - 1) * cells;
  }
  if (!sets.interior_sets.empty() && dims.family_dimension <= dims.hyper_dimension)
    fail("InternalError", "dimension inequality violated for a family with interior sets");
  return dims;
}

}  // namespace pdir
