#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "pdir/common.hpp"
#include "pdir/family.hpp"
#include "pdir/inference.hpp"
#include "pdir/prior.hpp"

namespace pdir {

using Json = nlohmann::ordered_json;

namespace io {

inline Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("FileError", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail("FileFormat", path + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const Json& j, bool pretty = true) {
  std::ofstream out(path);
  if (!out) fail("FileError", "cannot write " + path);
  out << (pretty ? j.dump(2) : j.dump()) << '\n';
}

inline double number_of(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      size_t used = 0;
      double v = std::stod(j.get<std::string>(), &used);
      if (used == j.get<std::string>().size()) return v;
    } catch (...) {
    }
  }
  fail("FileFormat", where + ": expected a number or decimal string");
}

// Shortest decimal string that round-trips the double exactly.
inline std::string decimal_string(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::stod(buf) == v) break;
  }
  return buf;
}

inline VertexSet parse_subset_key(const std::string& key, const std::string& where) {
  VertexSet out;
  size_t pos = 0;
  while (pos < key.size()) {
    size_t next = key.find(',', pos);
    std::string token = key.substr(pos, next == std::string::npos ? next : next - pos);
    try {
      out.push_back(std::stoi(token));
    } catch (...) {
      fail("FileFormat", where + ": bad vertex id '" + token + "' in key '" + key + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  VertexSet sorted = normalized(out);
  if (sorted != out) fail("FileFormat", where + ": key '" + key + "' is not ascending");
  return sorted;
}

}  // namespace io

inline UndirectedGraph graph_from_json(const Json& j, const std::string& where) {
  if (!j.contains("vertices") || !j.contains("edges"))
    fail("FileFormat", where + ": graph needs 'vertices' and 'edges'");
  std::vector<std::pair<Vertex, int>> vertex_levels;
  for (const auto& v : j.at("vertices")) {
    int id = v.at("id").get<int>();
    if (id < 1) fail("FileFormat", where + ": vertex ids must be positive integers");
    vertex_levels.push_back({id, v.at("levels").get<int>()});
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      fail("FileFormat", where + ": edges must be 2-element arrays");
    if (e[0].get<int>() >= e[1].get<int>())
      fail("FileFormat", where + ": edges must be ascending pairs");
    edges.push_back({e[0].get<int>(), e[1].get<int>()});
  }
  return UndirectedGraph::create(vertex_levels, edges);
}

inline Json graph_to_json(const UndirectedGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (Vertex v : g.vertices()) j["vertices"].push_back({{"id", v}, {"levels", g.level(v)}});
  j["edges"] = Json::array();
  for (auto [a, b] : g.edges()) j["edges"].push_back({a, b});
  return j;
}

inline ParentMap dag_from_json(const UndirectedGraph& g, const Json& j, const std::string& where) {
  if (!j.contains("id") || !j.contains("parents"))
    fail("FileFormat", where + ": dag needs 'id' and 'parents'");
  std::map<Vertex, VertexSet> parents;
  for (const auto& [key, value] : j.at("parents").items()) {
    Vertex v;
    try {
      v = std::stoi(key);
    } catch (...) {
      fail("FileFormat", where + ": bad vertex key '" + key + "'");
    }
    VertexSet ps;
    for (const auto& w : value) ps.push_back(w.get<int>());
    if (normalized(ps) != ps) fail("FileFormat", where + ": parent arrays must be ascending");
    parents[v] = ps;
  }
  return validate_dag(g, j.at("id").get<std::string>(), parents);
}

inline Json dag_to_json(const ParentMap& dag) {
  Json j;
  j["id"] = dag.id;
  Json parents = Json::object();
  for (const auto& [v, ps] : dag.parents) parents[std::to_string(v)] = ps;
  j["parents"] = std::move(parents);
  return j;
}

inline std::shared_ptr<const DagFamily> family_from_json(const Json& j, const std::string& where,
                                                         const std::string& base_dir) {
  if (!j.contains("graph") || !j.contains("dags") || !j.contains("orders"))
    fail("FileFormat", where + ": family needs 'graph', 'dags' and 'orders'");
  UndirectedGraph graph;
  if (j.at("graph").is_string()) {
    std::filesystem::path p = j.at("graph").get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    graph = graph_from_json(io::parse_file(p.string()), p.string());
  } else {
    graph = graph_from_json(j.at("graph"), where);
  }
  std::vector<ParentMap> dags;
  for (const auto& d : j.at("dags")) dags.push_back(dag_from_json(graph, d, where));
  std::map<std::string, std::vector<VertexSet>> orders;
  for (const auto& [id, seq] : j.at("orders").items()) {
    std::vector<VertexSet> cliques;
    for (const auto& c : seq) {
      VertexSet clique;
      for (const auto& v : c) clique.push_back(v.get<int>());
      if (normalized(clique) != clique)
        fail("FileFormat", where + ": order cliques must be ascending arrays");
      cliques.push_back(clique);
    }
    orders[id] = cliques;
  }
  return std::make_shared<const DagFamily>(make_family(std::move(graph), std::move(dags), orders));
}

inline std::shared_ptr<const DagFamily> load_family(const std::string& path) {
  return family_from_json(io::parse_file(path), path,
                          std::filesystem::path(path).parent_path().string());
}

inline Json family_to_json(const DagFamily& family) {
  Json j;
  j["spec"] = 1;
  j["graph"] = graph_to_json(family.graph);
  j["dags"] = Json::array();
  for (const auto& d : family.dags) j["dags"].push_back(dag_to_json(d));
  Json orders = Json::object();
  for (const auto& id : family.dag_ids) {
    Json seq = Json::array();
    for (const auto& c : family.orders.at(id).cliques) seq.push_back(c);
    orders[id] = std::move(seq);
  }
  j["orders"] = std::move(orders);
  return j;
}

inline ContingencyTable counts_from_json(const UndirectedGraph& g, const Json& j,
                                         const std::string& where) {
  ContingencyTable table = make_counts(g);
  if (!j.contains("cells")) fail("FileFormat", where + ": counts need 'cells'");
  for (const auto& cell : j.at("cells")) {
    std::vector<int> digits;
    for (const auto& d : cell.at("i")) digits.push_back(d.get<int>());
    if (digits.size() != g.vertex_count())
      fail("FileFormat", where + ": cell index arity does not match the variable count");
    table.set_cell(digits, cell.at("n").get<std::int64_t>());
  }
  return table;
}

inline ContingencyTable load_counts(const UndirectedGraph& g, const std::string& path) {
  return counts_from_json(g, io::parse_file(path), path);
}

inline Json counts_to_json(const ContingencyTable& table) {
  Json j;
  j["spec"] = 1;
  Json cells = Json::array();
  for (size_t idx = 0; idx < table.counts.values.size(); ++idx) {
    if (table.counts.values[idx] == 0) continue;
    cells.push_back({{"i", table.counts.digits_of(idx)}, {"n", table.counts.values[idx]}});
  }
  j["cells"] = std::move(cells);
  return j;
}

struct LoadedPrior {
  std::shared_ptr<const DagFamily> family;
  PDirichlet prior;
  std::string family_path;           // as written in the file
  std::string resolved_family_path;  // absolute
};

// Family path to embed in a prior file so that reloading resolves: relative
// to the output file when possible, absolute otherwise.
inline std::string family_path_for_output(const std::string& resolved_family,
                                          const std::string& out_path) {
  namespace fs = std::filesystem;
  fs::path family = fs::absolute(resolved_family).lexically_normal();
  if (out_path.empty()) return family.string();
  std::error_code ec;
  fs::path rel = fs::relative(family, fs::absolute(out_path).parent_path(), ec);
  if (ec || rel.empty()) return family.string();
  return rel.string();
}

inline LoadedPrior prior_from_json(const Json& j, const std::string& where,
                                   const std::string& base_dir, double tolerance_override = -1.0) {
  if (!j.contains("family") || !j.contains("nu"))
    fail("FileFormat", where + ": prior needs 'family' and 'nu'");
  LoadedPrior loaded;
  loaded.family_path = j.at("family").get<std::string>();
  std::filesystem::path p = loaded.family_path;
  if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
  loaded.resolved_family_path = std::filesystem::absolute(p).lexically_normal().string();
  loaded.family = load_family(p.string());
  const LevelMap& levels = loaded.family->graph.levels();

  double tolerance = 1e-9;
  if (j.contains("tolerance")) tolerance = io::number_of(j.at("tolerance"), where);
  if (tolerance_override > 0.0) tolerance = tolerance_override;

  NuTables nu;
  for (const auto& [key, values] : j.at("nu").items()) {
    VertexSet subset = io::parse_subset_key(key, where);
    MarginalTable<double> table(subset, levels);
    if (!values.is_array() || values.size() != table.size())
      fail("FileFormat", where + ": nu['" + key + "'] must hold " + std::to_string(table.size()) +
                             " values");
    for (size_t i = 0; i < table.size(); ++i)
      table.values[i] = io::number_of(values[i], where + ": nu['" + key + "']");
    nu[subset] = std::move(table);
  }
  MuTables mu;
  if (j.contains("mu")) {
    for (const auto& [key, values] : j.at("mu").items()) {
      PSlot slot;
      if (key == "empty") {
        slot = PSlot{PSlot::kEmpty, {}, 0};
      } else if (auto hash = key.find('#'); hash != std::string::npos) {
        slot.kind = PSlot::kSeparator;
        slot.subset = io::parse_subset_key(key.substr(0, hash), where);
        try {
          slot.occurrence = std::stoi(key.substr(hash + 1));
        } catch (...) {
          fail("FileFormat", where + ": bad occurrence suffix in mu key '" + key + "'");
        }
      } else {
        slot = PSlot{PSlot::kInterior, io::parse_subset_key(key, where), 0};
      }
      MarginalTable<double> table(slot.subset, levels);
      const Json& arr = values.is_array() ? values : Json::array({values});
      if (arr.size() != table.size())
        fail("FileFormat",
             where + ": mu['" + key + "'] must hold " + std::to_string(table.size()) + " values");
      for (size_t i = 0; i < table.size(); ++i)
        table.values[i] = io::number_of(arr[i], where + ": mu['" + key + "']");
      mu[slot] = std::move(table);
    }
  }
  loaded.prior = build_prior(loaded.family, std::move(nu), std::move(mu), tolerance);
  return loaded;
}

inline LoadedPrior load_prior(const std::string& path, double tolerance_override = -1.0) {
  return prior_from_json(io::parse_file(path), path,
                         std::filesystem::path(path).parent_path().string(), tolerance_override);
}

// Numbers are written as decimal strings so reloading reproduces the exact
// binary values.
inline Json prior_to_json(const PDirichlet& prior, const std::string& family_path) {
  Json j;
  j["spec"] = 1;
  j["family"] = family_path;
  j["tolerance"] = prior.tolerance;
  Json nu = Json::object();
  for (const auto& a : prior.sets.q_sets) {
    Json arr = Json::array();
    for (double v : prior.nu.at(a).values) arr.push_back(io::decimal_string(v));
    nu[set_key(a)] = std::move(arr);
  }
  j["nu"] = std::move(nu);
  Json mu = Json::object();
  for (const auto& slot : prior.sets.p_slots) {
    const auto& table = prior.mu.at(slot);
    if (slot.kind == PSlot::kEmpty) {
      mu["empty"] = io::decimal_string(table.values[0]);
    } else {
      Json arr = Json::array();
      for (double v : table.values) arr.push_back(io::decimal_string(v));
      mu[slot.key()] = std::move(arr);
    }
  }
  j["mu"] = std::move(mu);
  return j;
}

}  // namespace pdir
