#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "pdir/common.hpp"
#include "pdir/prior.hpp"
#include "pdir/table.hpp"

namespace pdir {

inline ContingencyTable make_counts(const UndirectedGraph& g) {
  return ContingencyTable::zeros(g.vertices(), g.levels());
}

inline MarginalTable<std::int64_t> marginal_counts(const ContingencyTable& table,
                                                   const VertexSet& subset,
                                                   const LevelMap& levels) {
  for (Vertex v : subset)
    if (!levels.count(v)) fail("UnknownVertex", "unknown vertex " + std::to_string(v));
  return table.marginal(subset, levels);
}

inline void check_same_variables(const PDirichlet& prior, const ContingencyTable& data) {
  const auto& g = prior.family->graph;
  if (data.counts.subset != g.vertices() ||
      data.counts.radix != radix_for(g.vertices(), g.levels()))
    fail("GraphMismatch", "counts table does not match the family's variables");
}

// Evidence = E prod_i p(i)^{n(i)}, the prior moment at the observed counts.
inline double log_evidence(const PDirichlet& prior, const ContingencyTable& data) {
  check_same_variables(prior, data);
  return log_moment(prior, data);
}

// E p(i) for one cell, and the full predictive table (sums to one).
inline double predictive_cell(const PDirichlet& prior, std::span<const int> cell) {
  const auto& g = prior.family->graph;
  auto radix = radix_for(g.vertices(), g.levels());
  if (cell.size() != radix.size()) fail("CellOutOfRange", "cell has the wrong arity");
  for (size_t p = 0; p < radix.size(); ++p)
    if (cell[p] < 0 || cell[p] >= radix[p])
      fail("CellOutOfRange", "cell index out of range in position " + std::to_string(p));

  double log_p = 0.0;
  auto add = [&](const VertexSet& subset, const MarginalTable<double>& table, double sign) {
    auto pos = positions_in(subset, g.vertices());
    std::vector<int> digits;
    digits.reserve(pos.size());
    for (size_t p : pos) digits.push_back(cell[p]);
    log_p += sign * std::log(table.values[table.index_of(digits)]);
  };
  for (const auto& a : prior.sets.q_sets) add(a, prior.nu.at(a), +1.0);
  for (const auto& slot : prior.sets.p_slots) add(slot.subset, prior.mu.at(slot), -1.0);
  return std::exp(log_p);
}

inline std::vector<double> predictive_table(const PDirichlet& prior) {
  const auto& g = prior.family->graph;
  auto radix = radix_for(g.vertices(), g.levels());
  size_t cells = static_cast<size_t>(cell_count(radix));
  std::vector<double> out(cells);
  std::vector<int> digits(radix.size(), 0);
  for (size_t idx = 0; idx < cells; ++idx) {
    out[idx] = predictive_cell(prior, digits);
    for (size_t p = digits.size(); p-- > 0;) {
      if (++digits[p] < radix[p]) break;
      digits[p] = 0;
    }
  }
  return out;
}

struct PosteriorReport {
  PDirichlet posterior;
  double log_evidence = 0.0;
  std::vector<double> predictive;  // posterior predictive cell expectations
};

// Conjugate update: every nu and mu table is shifted by the matching marginal
// counts. The shifted tables satisfy the same constraint system, so the
// rebuilt posterior revalidates with no additional residual.
inline PosteriorReport posterior_update(const PDirichlet& prior, const ContingencyTable& data) {
  check_same_variables(prior, data);
  const LevelMap& levels = prior.family->graph.levels();
  NuTables nu = prior.nu;
  for (auto& [a, table] : nu) {
    auto marg = data.marginal(a, levels);
    for (size_t i = 0; i < table.values.size(); ++i)
      table.values[i] += static_cast<double>(marg.values[i]);
  }
  MuTables mu = prior.mu;
  for (auto& [slot, table] : mu) {
    auto marg = data.marginal(slot.subset, levels);
    for (size_t i = 0; i < table.values.size(); ++i)
      table.values[i] += static_cast<double>(marg.values[i]);
  }
  PosteriorReport report{build_prior(prior.family, std::move(nu), std::move(mu), prior.tolerance),
                         log_evidence(prior, data),
                         {}};
  report.predictive = predictive_table(report.posterior);
  return report;
}

struct ScoreConfig {
  std::string label;
  std::shared_ptr<const PDirichlet> prior;
  std::shared_ptr<const ContingencyTable> data;
};

struct ScoreRow {
  std::string label;
  size_t config_index = 0;
  double log_evidence = 0.0;
  int dimension_rank = 0;
  DimensionPair dimension_formula;
};

// Ranks configurations by log evidence, descending; ties keep input order.
inline std::vector<ScoreRow> score_configurations(const std::vector<ScoreConfig>& configs) {
  if (configs.empty()) fail("InvalidInput", "no configurations to score");
  const auto& ref = configs.front().prior->family->graph;
  std::vector<ScoreRow> rows;
  for (size_t i = 0; i < configs.size(); ++i) {
    const auto& cfg = configs[i];
    if (!cfg.prior->family->graph.same_variables(ref))
      fail("GraphMismatch", "configuration " + std::to_string(i) +
                                " has a different variable set or level map");
    ScoreRow row;
    row.label = cfg.label.empty() ? "config" + std::to_string(i) : cfg.label;
    row.config_index = i;
    row.log_evidence = log_evidence(*cfg.prior, *cfg.data);
    row.dimension_rank = dimension_rank(*cfg.prior);
    row.dimension_formula = dimension_formula(*cfg.prior->family, cfg.prior->sets);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
    return a.log_evidence > b.log_evidence;
  });
  return rows;
}

}  // namespace pdir
