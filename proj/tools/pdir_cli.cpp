// Command-line front end: each subcommand is a thin adapter from the JSON
// file formats to one library operation. Output is machine-readable JSON on
// stdout (deterministic key order); --pretty switches to an indented or
// aligned human rendering. Exit codes: 0 ok, 1 validation error, 2 usage.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pdir/pdir.hpp"

namespace {

using pdir::Json;

struct Options {
  std::string family, dag, prior, counts, r, order, out, configs;
  std::vector<std::string> priors, counts_list;
  std::uint64_t seed = 0;
  int draws = 0;
  double tol = -1.0;
  double alpha = 1.0;
  bool pretty = false;
};

void emit(const Json& j, const Options& opt) {
  if (!opt.out.empty()) {
    pdir::io::write_file(opt.out, j, opt.pretty);
    return;
  }
  std::cout << (opt.pretty ? j.dump(2) : j.dump()) << '\n';
}

Json subset_json(const pdir::VertexSet& s) { return Json(s); }

Json sets_json(const pdir::StructureSets& sets) {
  Json j;
  j["spec"] = 1;
  j["cliques"] = Json::array();
  for (const auto& c : sets.cliques) j["cliques"].push_back(subset_json(c));
  j["interior"] = Json::array();
  for (const auto& s : sets.interior_sets) j["interior"].push_back(subset_json(s));
  j["q_sets"] = Json::array();
  for (const auto& a : sets.q_sets) j["q_sets"].push_back(subset_json(a));
  j["p_slots"] = Json::array();
  for (const auto& slot : sets.p_slots) j["p_slots"].push_back(slot.key());
  return j;
}

Json constraints_json(const pdir::ConstraintSystem& system, const pdir::LevelMap& levels) {
  Json j;
  j["spec"] = 1;
  j["classes"] = Json::array();
  for (const auto& cls : system.classes) {
    Json c;
    c["slot"] = cls.slot.key();
    c["exprs"] = Json::array();
    for (const auto& e : cls.exprs) c["exprs"].push_back(e.str());
    j["classes"].push_back(std::move(c));
  }
  j["scalar_constraints"] = system.scalar_constraint_count(levels);
  return j;
}

pdir::ContingencyTable load_r(const pdir::PDirichlet& prior, const std::string& path) {
  return pdir::load_counts(prior.family->graph, path);
}

int cmd_validate(const Options& opt) {
  auto family = pdir::load_family(opt.family);
  auto sets = pdir::compute_structure_sets(*family);
  auto separating = pdir::is_separating(*family);
  auto sufficiency = pdir::is_hyper_dirichlet_sufficient(*family, sets);
  Json j;
  j["spec"] = 1;
  j["ok"] = true;
  j["vertices"] = family->graph.vertex_count();
  j["dags"] = family->dag_ids;
  j["separating"] = separating.separating;
  j["separating_uncovered"] = separating.uncovered;
  j["hyper_dirichlet_sufficient"] = sufficiency.sufficient;
  emit(j, opt);
  return 0;
}

int cmd_sets(const Options& opt) {
  auto family = pdir::load_family(opt.family);
  emit(sets_json(pdir::compute_structure_sets(*family)), opt);
  return 0;
}

int cmd_chains(const Options& opt) {
  auto family = pdir::load_family(opt.family);
  auto sets = pdir::compute_structure_sets(*family);
  auto chains = pdir::compute_chains(*family, sets);
  Json j;
  j["spec"] = 1;
  Json per_dag = Json::object();
  for (const auto& id : family->dag_ids) {
    Json arr = Json::array();
    for (const auto& chain : chains.at(id)) {
      Json c;
      c["clique"] = subset_json(chain.clique);
      c["bottom"] = subset_json(chain.bottom);
      c["elements"] = Json::array();
      for (const auto& e : chain.elements) c["elements"].push_back(subset_json(e));
      arr.push_back(std::move(c));
    }
    per_dag[id] = std::move(arr);
  }
  j["chains"] = std::move(per_dag);
  emit(j, opt);
  return 0;
}

int cmd_constraints(const Options& opt) {
  auto family = pdir::load_family(opt.family);
  auto sets = pdir::compute_structure_sets(*family);
  auto chains = pdir::compute_chains(*family, sets);
  emit(constraints_json(pdir::derive_constraints(*family, sets, chains),
                        family->graph.levels()),
       opt);
  return 0;
}

int cmd_dim(const Options& opt) {
  auto family = pdir::load_family(opt.family);
  auto sets = pdir::compute_structure_sets(*family);
  auto chains = pdir::compute_chains(*family, sets);
  auto system = pdir::derive_constraints(*family, sets, chains);
  auto dims = pdir::dimension_formula(*family, sets);
  Json j;
  j["spec"] = 1;
  j["formula"] = {{"np", dims.family_dimension}, {"nhp", dims.hyper_dimension}};
  j["rank"] = pdir::dimension_rank(system, sets.q_sets, family->graph.levels());
  emit(j, opt);
  return 0;
}

int cmd_init_prior(const Options& opt) {
  auto family = pdir::load_family(opt.family);
  double tol = opt.tol > 0 ? opt.tol : 1e-9;
  auto prior = pdir::uniform_template(family, opt.alpha, tol);
  emit(pdir::prior_to_json(prior, pdir::family_path_for_output(opt.family, opt.out)), opt);
  return 0;
}

int cmd_check_prior(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  auto hd = pdir::equals_hyper_dirichlet(loaded.prior);
  Json j;
  j["spec"] = 1;
  j["ok"] = true;
  j["worst_residual"] = loaded.prior.worst_residual;
  j["tolerance"] = loaded.prior.tolerance;
  j["equivalent_sample_size"] = loaded.prior.equivalent_sample_size();
  j["hyper_dirichlet"] = hd.equal;
  emit(j, opt);
  return 0;
}

int cmd_moment(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  auto r = load_r(loaded.prior, opt.r);
  double lm = pdir::log_moment(loaded.prior, r);
  Json j;
  j["spec"] = 1;
  j["log_moment"] = lm;
  j["moment"] = std::exp(lm);
  emit(j, opt);
  return 0;
}

int cmd_predictive(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  Json j;
  j["spec"] = 1;
  j["layout"] = "mixed-radix, ascending vertices, last vertex fastest";
  j["cells"] = pdir::predictive_table(loaded.prior);
  emit(j, opt);
  return 0;
}

int cmd_sample(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  Json j;
  j["spec"] = 1;
  j["order"] = opt.order;
  j["seed"] = opt.seed;
  j["draws"] = opt.draws;
  j["tables"] = Json::array();
  for (const auto& table : pdir::sample(loaded.prior, opt.order, opt.seed, opt.draws))
    j["tables"].push_back(table);
  emit(j, opt);
  return 0;
}

int cmd_update(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  auto data = load_r(loaded.prior, opt.counts);
  auto report = pdir::posterior_update(loaded.prior, data);
  Json j = pdir::prior_to_json(
      report.posterior, pdir::family_path_for_output(loaded.resolved_family_path, opt.out));
  j["report"] = {{"log_evidence", report.log_evidence}, {"predictive", report.predictive}};
  emit(j, opt);
  return 0;
}

int cmd_evidence(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  auto data = load_r(loaded.prior, opt.counts);
  Json j;
  j["spec"] = 1;
  j["log_evidence"] = pdir::log_evidence(loaded.prior, data);
  emit(j, opt);
  return 0;
}

int cmd_extract_local(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  auto locals = pdir::extract_local_dirichlets(loaded.prior, opt.dag);
  const auto& dag = loaded.family->dag(opt.dag);
  const auto& levels = loaded.family->graph.levels();
  Json j;
  j["spec"] = 1;
  j["dag"] = opt.dag;
  Json blocks = Json::object();
  for (const auto& [v, table] : locals.blocks) {
    Json b;
    b["closure"] = subset_json(table.subset);
    b["parents"] = subset_json(dag.parents_of(v));
    b["alpha"] = table.values;
    b["alpha_bar"] = locals.alpha_bar(v, dag.parents_of(v), levels).values;
    blocks[std::to_string(v)] = std::move(b);
  }
  j["blocks"] = std::move(blocks);
  emit(j, opt);
  return 0;
}

int cmd_mc_verify(const Options& opt) {
  auto loaded = pdir::load_prior(opt.prior, opt.tol);
  const auto& g = loaded.family->graph;
  std::vector<pdir::ContingencyTable> r_list;
  if (!opt.r.empty()) {
    Json j = pdir::io::parse_file(opt.r);
    if (j.contains("tables"))
      for (const auto& t : j.at("tables"))
        r_list.push_back(pdir::counts_from_json(g, t, opt.r));
    else
      r_list.push_back(pdir::counts_from_json(g, j, opt.r));
  } else {
    // default: the zero table and every first moment (up to 64 cells)
    r_list.push_back(pdir::make_counts(g));
    auto radix = pdir::radix_for(g.vertices(), g.levels());
    size_t cells = static_cast<size_t>(pdir::cell_count(radix));
    std::vector<int> digits(radix.size(), 0);
    for (size_t idx = 0; idx < cells && idx < 64; ++idx) {
      auto t = pdir::make_counts(g);
      t.set_cell(digits, 1);
      r_list.push_back(std::move(t));
      for (size_t p = digits.size(); p-- > 0;) {
        if (++digits[p] < radix[p]) break;
        digits[p] = 0;
      }
    }
  }
  auto report = pdir::mc_check_moments(loaded.prior, r_list, opt.draws, opt.seed, opt.order);
  if (opt.pretty && opt.out.empty()) {
    std::printf("%-24s %14s %14s %12s %8s %s\n", "r", "analytic", "mean", "se", "z", "flag");
    for (const auto& row : report.rows) {
      std::string label = "r-total=" + std::to_string(row.exponents.total);
      std::printf("%-24s %14.8g %14.8g %12.4g %8.2f %s\n", label.c_str(), row.analytic,
                  row.empirical_mean, row.empirical_se, row.z, row.flagged ? "FLAG" : "");
    }
    return report.any_flagged ? 1 : 0;
  }
  Json j;
  j["spec"] = 1;
  j["order"] = report.order_id;
  j["seed"] = report.seed;
  j["draws"] = report.draws;
  j["rows"] = Json::array();
  for (const auto& row : report.rows) {
    Json r = pdir::counts_to_json(row.exponents);
    r.erase("spec");
    j["rows"].push_back({{"r", std::move(r)},
                         {"analytic", row.analytic},
                         {"mean", row.empirical_mean},
                         {"se", row.empirical_se},
                         {"z", row.z},
                         {"flagged", row.flagged}});
  }
  j["any_flagged"] = report.any_flagged;
  emit(j, opt);
  return report.any_flagged ? 1 : 0;
}

int cmd_score(const Options& opt) {
  if (opt.priors.empty()) pdir::fail("UsageError", "score needs at least one --prior");
  if (opt.counts_list.size() != 1 && opt.counts_list.size() != opt.priors.size())
    pdir::fail("UsageError", "give one --counts for all priors or one per prior");
  std::vector<pdir::ScoreConfig> configs;
  for (size_t i = 0; i < opt.priors.size(); ++i) {
    auto loaded = std::make_shared<pdir::LoadedPrior>(pdir::load_prior(opt.priors[i], opt.tol));
    const std::string& counts_path =
        opt.counts_list.size() == 1 ? opt.counts_list.front() : opt.counts_list[i];
    auto data = std::make_shared<const pdir::ContingencyTable>(
        pdir::load_counts(loaded->family->graph, counts_path));
    configs.push_back({opt.priors[i],
                       std::shared_ptr<const pdir::PDirichlet>(loaded, &loaded->prior), data});
  }
  auto rows = pdir::score_configurations(configs);
  if (opt.pretty && opt.out.empty()) {
    std::printf("%-4s %-40s %16s %6s\n", "rank", "prior", "log_evidence", "dim");
    for (size_t i = 0; i < rows.size(); ++i)
      std::printf("%-4zu %-40s %16.6f %6d\n", i + 1, rows[i].label.c_str(), rows[i].log_evidence,
                  rows[i].dimension_rank);
    return 0;
  }
  Json j;
  j["spec"] = 1;
  j["ranking"] = Json::array();
  for (const auto& row : rows)
    j["ranking"].push_back({{"prior", row.label},
                            {"config_index", row.config_index},
                            {"log_evidence", row.log_evidence},
                            {"dimension", row.dimension_rank},
                            {"np", row.dimension_formula.family_dimension},
                            {"nhp", row.dimension_formula.hyper_dimension}});
  emit(j, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P-Dirichlet priors for discrete decomposable graphical models"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "write output JSON to a file instead of stdout");
    cmd->add_flag("--pretty", opt.pretty, "human-readable output");
    cmd->add_option("--tol", opt.tol, "constraint tolerance override");
  };
  auto need_family = [&](CLI::App* cmd) {
    cmd->add_option("--family", opt.family, "family JSON file")->required();
  };
  auto need_prior = [&](CLI::App* cmd) {
    cmd->add_option("--prior", opt.prior, "prior JSON file")->required();
  };

  std::map<std::string, std::function<int(const Options&)>> dispatch;
  {
    auto* c = app.add_subcommand("validate", "validate a family file");
    need_family(c); add_common(c);
    dispatch["validate"] = cmd_validate;
  }
  {
    auto* c = app.add_subcommand("sets", "numerator/denominator structure sets");
    need_family(c); add_common(c);
    dispatch["sets"] = cmd_sets;
  }
  {
    auto* c = app.add_subcommand("chains", "nested clique chains per order");
    need_family(c); add_common(c);
    dispatch["chains"] = cmd_chains;
  }
  {
    auto* c = app.add_subcommand("constraints", "hyperparameter constraint classes");
    need_family(c); add_common(c);
    dispatch["constraints"] = cmd_constraints;
  }
  {
    auto* c = app.add_subcommand("dim", "family dimension (closed form and exact rank)");
    need_family(c); add_common(c);
    dispatch["dim"] = cmd_dim;
  }
  {
    auto* c = app.add_subcommand("init-prior", "uniform prior template");
    need_family(c); add_common(c);
    c->add_option("--alpha", opt.alpha, "equivalent sample size")->default_val(1.0);
    dispatch["init-prior"] = cmd_init_prior;
  }
  {
    auto* c = app.add_subcommand("check-prior", "validate a prior file");
    need_prior(c); add_common(c);
    dispatch["check-prior"] = cmd_check_prior;
  }
  {
    auto* c = app.add_subcommand("moment", "rising-factorial moment at an exponent table");
    need_prior(c); add_common(c);
    c->add_option("--r", opt.r, "exponent table (counts JSON)")->required();
    dispatch["moment"] = cmd_moment;
  }
  {
    auto* c = app.add_subcommand("predictive", "expected cell probabilities");
    need_prior(c); add_common(c);
    dispatch["predictive"] = cmd_predictive;
  }
  {
    auto* c = app.add_subcommand("sample", "draw probability tables");
    need_prior(c); add_common(c);
    c->add_option("--order", opt.order, "order id (a dag id)")->required();
    c->add_option("--seed", opt.seed, "RNG seed")->required();
    c->add_option("--draws", opt.draws, "number of draws")->required()
        ->check(CLI::PositiveNumber);
    dispatch["sample"] = cmd_sample;
  }
  {
    auto* c = app.add_subcommand("update", "conjugate posterior update");
    need_prior(c); add_common(c);
    c->add_option("--counts", opt.counts, "counts JSON file")->required();
    dispatch["update"] = cmd_update;
  }
  {
    auto* c = app.add_subcommand("evidence", "log marginal likelihood of counts");
    need_prior(c); add_common(c);
    c->add_option("--counts", opt.counts, "counts JSON file")->required();
    dispatch["evidence"] = cmd_evidence;
  }
  {
    auto* c = app.add_subcommand("extract-local", "per-DAG local Dirichlet parameters");
    need_prior(c); add_common(c);
    c->add_option("--dag", opt.dag, "dag id")->required();
    dispatch["extract-local"] = cmd_extract_local;
  }
  {
    auto* c = app.add_subcommand("mc-verify", "Monte Carlo check of the moment formula");
    need_prior(c); add_common(c);
    c->add_option("--order", opt.order, "order id (a dag id)")->required();
    c->add_option("--seed", opt.seed, "RNG seed")->required();
    c->add_option("--draws", opt.draws, "number of draws")
        ->default_val(100000)
        ->check(CLI::PositiveNumber);
    c->add_option("--r", opt.r, "exponent table(s); default: zero table and first moments");
    dispatch["mc-verify"] = cmd_mc_verify;
  }
  {
    auto* c = app.add_subcommand("score", "rank (prior, counts) configurations by evidence");
    add_common(c);
    c->add_option("--prior", opt.priors, "prior JSON file (repeatable)")->required();
    c->add_option("--counts", opt.counts_list, "counts JSON file (one, or one per prior)")
        ->required();
    dispatch["score"] = cmd_score;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return dispatch.at(app.get_subcommands().front()->get_name())(opt);
  } catch (const pdir::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Unexpected: " << e.what() << '\n';
    return 1;
  }
}
