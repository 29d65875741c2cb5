#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "pdir/common.hpp"
#include "pdir/inference.hpp"
#include "pdir/linalg.hpp"
#include "pdir/prior.hpp"

namespace pdir {

struct MomentCheckRow {
  ContingencyTable exponents;
  double analytic = 0.0;
  double empirical_mean = 0.0;
  double empirical_se = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct MomentCheckReport {
  std::vector<MomentCheckRow> rows;
  int draws = 0;
  std::uint64_t seed = 0;
  std::string order_id;
  bool any_flagged = false;
};

inline double z_score(double analytic, double mean, double se) {
  if (se == 0.0) return mean == analytic ? 0.0 : std::numeric_limits<double>::infinity();
  return (mean - analytic) / se;
}

// Monte Carlo check of the moment formula against the sampling construction.
inline MomentCheckReport mc_check_moments(const PDirichlet& prior,
                                          const std::vector<ContingencyTable>& r_list, int draws,
                                          std::uint64_t seed, const std::string& order_id) {
  if (draws < 1000) fail("UsageError", "mc_check_moments needs at least 1000 draws");
  MomentCheckReport report;
  report.draws = draws;
  report.seed = seed;
  report.order_id = order_id;

  std::vector<double> sum(r_list.size(), 0.0), sum_sq(r_list.size(), 0.0);
  std::vector<std::vector<std::pair<size_t, std::int64_t>>> sparse(r_list.size());
  for (size_t k = 0; k < r_list.size(); ++k) {
    detail::check_exponent_table(prior, r_list[k]);
    for (size_t idx = 0; idx < r_list[k].counts.values.size(); ++idx)
      if (r_list[k].counts.values[idx] > 0) sparse[k].push_back({idx, r_list[k].counts.values[idx]});
  }

  sample_stream(prior, order_id, seed, draws, [&](int, const std::vector<double>& table) {
    for (size_t k = 0; k < r_list.size(); ++k) {
      double log_v = 0.0;
      for (auto [idx, e] : sparse[k]) log_v += static_cast<double>(e) * std::log(table[idx]);
      double v = std::exp(log_v);
      sum[k] += v;
      sum_sq[k] += v * v;
    }
  });

  for (size_t k = 0; k < r_list.size(); ++k) {
    MomentCheckRow row;
    row.exponents = r_list[k];
    row.analytic = moment(prior, r_list[k]);
    row.empirical_mean = sum[k] / draws;
    double var = std::max(0.0, sum_sq[k] / draws - row.empirical_mean * row.empirical_mean);
    row.empirical_se = std::sqrt(var / draws);
    row.z = z_score(row.analytic, row.empirical_mean, row.empirical_se);
    row.flagged = std::abs(row.z) > 4.0;
    report.any_flagged = report.any_flagged || row.flagged;
    report.rows.push_back(std::move(row));
  }
  return report;
}

// Exact rank of the scalarized constraint system over the rationals.
inline int exact_rank(const ConstraintSystem& system, const std::vector<VertexSet>& q_sets,
                      const LevelMap& levels) {
  return exact_rank(constraint_matrix(system, q_sets, levels).rows);
}

struct SmallEnumeration {
  std::vector<ParentMap> dags;       // every moral DAG Markov equivalent to the graph
  std::vector<CliqueOrder> orders;   // every perfect order of the cliques
};

// Exhaustive enumeration for cross-checks; guarded because both lists grow
// factorially.
inline SmallEnumeration enumerate_small(const UndirectedGraph& g, size_t max_vertices = 5,
                                        size_t max_cliques = 6) {
  if (g.vertex_count() > max_vertices)
    fail("TooLarge", "enumeration limited to " + std::to_string(max_vertices) + " vertices");
  SmallEnumeration out;
  std::vector<std::pair<Vertex, Vertex>> edges(g.edges().begin(), g.edges().end());
  if (edges.size() > 20) fail("TooLarge", "enumeration limited to 20 edges");
  for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
    std::map<Vertex, VertexSet> parents;
    for (Vertex v : g.vertices()) parents[v];
    for (size_t e = 0; e < edges.size(); ++e) {
      auto [a, b] = edges[e];
      if (mask & (1u << e))
        parents[b] = set_insert(parents[b], a);  // a -> b
      else
        parents[a] = set_insert(parents[a], b);  // b -> a
    }
    try {
      out.dags.push_back(validate_dag(g, "d" + std::to_string(out.dags.size()), parents));
    } catch (const Error&) {
      // orientation is cyclic or immoral
    }
  }
  out.orders = all_perfect_orders(g, max_cliques);
  return out;
}

}  // namespace pdir
