#include "fock/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

#include "fock/moments.hpp"

namespace fock::cli {

using nlohmann::json;

namespace {

const std::map<std::string, double> kDefaultTolerances = {
    {"route_agreement", 1e-9},     {"mo_agreement", 1e-6},
    {"isometry_spectrum", 1e-9},   {"isometry_norms", 1e-6},
    {"band_width", 100.0},         {"gaussian_linear_band", 1.01},
    {"fejer_threshold", 0.05},     {"little_bloch_tail", 0.2},
    {"no_decay_floor", 0.9},       {"spectrum_ratio", 0.5},
    {"growth_per_doubling", 1.05}, {"trace_rel_d1", 1e-4},
    {"trace_rel_d2", 1e-3},        {"hs_rel", 0.02},
    {"diag_band", 10.0},           {"near_constancy", 0.5},
    {"stabilization", 1e-4},       {"besov_bmo_factor", 10.0},
    {"e_ratio_slack", 0.1},        {"lipschitz_slack", 0.2}};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config error at '" + where + "': " + what);
}

Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(where, "complex scalars are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

double ExperimentConfig::tolerance(const std::string& key) const {
  auto it = tolerances.find(key);
  if (it != tolerances.end()) return it->second;
  auto jt = kDefaultTolerances.find(key);
  if (jt == kDefaultTolerances.end())
    throw std::logic_error("unknown tolerance key: " + key);
  return jt->second;
}

WeightModel ExperimentConfig::make_weight_model() const {
  return make_weight(weight.family, weight.s, weight.eta);
}

OperatorSymbol parse_symbol_terms(const json& terms, int d, int m) {
  OperatorSymbol t(d, m);
  if (!terms.is_array()) fail("symbols[].terms", "expected an array");
  for (size_t i = 0; i < terms.size(); ++i) {
    const json& term = terms[i];
    const std::string where = "symbols[].terms[" + std::to_string(i) + "]";
    if (!term.is_object() || !term.contains("index") || !term.contains("matrix"))
      fail(where, "each term needs 'index' and 'matrix'");
    MultiIndex gamma;
    for (const json& v : term["index"]) gamma.push_back(v.get<int>());
    if (int(gamma.size()) != d) fail(where + ".index", "length must equal dimension");
    const json& rows = term["matrix"];
    if (!rows.is_array() || int(rows.size()) != m)
      fail(where + ".matrix", "must have 'fiber' rows");
    CMat a(m, m);
    for (int r = 0; r < m; ++r) {
      if (int(rows[r].size()) != m) fail(where + ".matrix", "rows must have 'fiber' entries");
      for (int c = 0; c < m; ++c)
        a(r, c) = parse_complex(rows[r][c], where + ".matrix");
    }
    t.set_term(gamma, a);
  }
  return t;
}

ExperimentConfig parse_config_json(const json& j) {
  ExperimentConfig c;
  static const std::set<std::string> known = {
      "weight",      "dimension",     "fiber",          "kmax",
      "truncation",  "seed",          "symbols",        "grid",
      "pairs",       "p_list",        "cutoffs",        "decay_radii",
      "truncation_sweep", "fejer_sweep", "identity_degree",
      "random_symbols", "random_symbol_degree", "tolerances"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) fail(it.key(), "unknown field");

  if (j.contains("weight")) {
    const json& w = j["weight"];
    if (!w.is_object() || !w.contains("family"))
      fail("weight", "expected {family, [s], [eta]}");
    c.weight.family = w["family"].get<std::string>();
    if (w.contains("s")) c.weight.s = w["s"].get<double>();
    if (w.contains("eta")) c.weight.eta = w["eta"].get<double>();
  }
  if (j.contains("dimension")) c.dimension = j["dimension"].get<int>();
  if (c.dimension < 1 || c.dimension > 3)
    fail("dimension", "d must be 1, 2 or 3");
  if (j.contains("fiber")) c.fiber = j["fiber"].get<int>();
  if (c.fiber < 1) fail("fiber", "m must be >= 1");
  if (j.contains("kmax")) c.kmax = j["kmax"].get<int>();
  if (j.contains("truncation")) c.truncation = j["truncation"].get<int>();
  else if (c.dimension >= 2) c.truncation = 8;
  if (c.truncation < 1) fail("truncation", "N must be >= 1");
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (g.contains("rmin")) c.grid.rmin = g["rmin"].get<double>();
    if (g.contains("rmax")) c.grid.rmax = g["rmax"].get<double>();
    if (g.contains("radii")) c.grid.radii = g["radii"].get<int>();
    if (g.contains("directions")) c.grid.directions = g["directions"].get<int>();
    if (!(c.grid.rmin > 0 && c.grid.rmax > c.grid.rmin))
      fail("grid", "need 0 < rmin < rmax");
  }
  if (j.contains("pairs")) c.pairs = j["pairs"].get<int>();
  if (j.contains("random_symbols"))
    c.random_symbols = j["random_symbols"].get<int>();
  if (j.contains("random_symbol_degree"))
    c.random_symbol_degree = j["random_symbol_degree"].get<int>();
  if (j.contains("p_list")) c.p_list = j["p_list"].get<std::vector<double>>();
  if (j.contains("cutoffs")) c.cutoffs = j["cutoffs"].get<std::vector<double>>();
  if (j.contains("decay_radii"))
    c.decay_radii = j["decay_radii"].get<std::vector<double>>();
  if (j.contains("truncation_sweep"))
    c.truncation_sweep = j["truncation_sweep"].get<std::vector<int>>();
  if (j.contains("fejer_sweep"))
    c.fejer_sweep = j["fejer_sweep"].get<std::vector<int>>();
  if (j.contains("identity_degree"))
    c.identity_degree = j["identity_degree"].get<int>();
  if (j.contains("tolerances")) {
    for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it) {
      if (!kDefaultTolerances.count(it.key()))
        fail("tolerances." + it.key(), "unknown tolerance");
      const double v = it.value().get<double>();
      if (!(v > 0)) fail("tolerances." + it.key(), "tolerances must be positive");
      c.tolerances[it.key()] = v;
    }
  }
  if (j.contains("symbols")) {
    for (const json& s : j["symbols"]) {
      SymbolSpec spec;
      spec.name = s.contains("name") ? s["name"].get<std::string>() : "symbol";
      spec.symbol = parse_symbol_terms(s["terms"], c.dimension, c.fiber);
      c.symbols.push_back(std::move(spec));
    }
  }
  // validate the weight parameters eagerly for early diagnostics
  (void)c.make_weight_model();
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  return parse_config_json(j);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  json j;
  j["weight"] = {{"family", c.weight.family}, {"s", c.weight.s}, {"eta", c.weight.eta}};
  j["dimension"] = c.dimension;
  j["fiber"] = c.fiber;
  j["kmax"] = c.kmax;
  j["truncation"] = c.truncation;
  j["seed"] = c.seed;
  j["grid"] = {{"rmin", c.grid.rmin},
               {"rmax", c.grid.rmax},
               {"radii", c.grid.radii},
               {"directions", c.grid.directions}};
  j["pairs"] = c.pairs;
  j["p_list"] = c.p_list;
  j["cutoffs"] = c.cutoffs;
  j["decay_radii"] = c.decay_radii;
  j["truncation_sweep"] = c.truncation_sweep;
  j["fejer_sweep"] = c.fejer_sweep;
  j["identity_degree"] = c.identity_degree;
  j["random_symbols"] = c.random_symbols;
  j["random_symbol_degree"] = c.random_symbol_degree;
  json tol;
  for (const auto& [k, v] : kDefaultTolerances)
    tol[k] = c.tolerances.count(k) ? c.tolerances.at(k) : v;
  j["tolerances"] = tol;
  json syms = json::array();
  for (const auto& s : c.symbols) syms.push_back(s.name);
  j["symbols"] = syms;
  return j;
}

bool Report::pass() const {
  for (const ScenarioReport& s : scenarios)
    for (const CheckRecord& c : s.checks)
      if (!c.pass && (c.asserted || strict)) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  json j;
  j["tool"] = "focklab";
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["strict"] = strict;
  j["config"] = config_echo;
  j["pass"] = pass();
  j["runtime_s"] = runtime_s;
  json sc = json::array();
  for (const ScenarioReport& s : scenarios) {
    json e;
    e["id"] = s.id;
    e["records"] = s.records;
    e["runtime_s"] = s.runtime_s;
    json checks = json::array();
    for (const CheckRecord& c : s.checks)
      checks.push_back({{"name", c.name},
                        {"tolerance", c.tolerance},
                        {"value", c.value},
                        {"pass", c.pass},
                        {"asserted", c.asserted}});
    e["checks"] = checks;
    sc.push_back(e);
  }
  j["scenarios"] = sc;
  return j;
}

void write_report(const Report& rep, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json");
    out << rep.to_json().dump(2) << "\n";
  }
  for (const auto& [name, table] : rep.csv) {
    std::ofstream out(fs::path(out_dir) / (name + ".csv"));
    for (const auto& row : table) {
      for (size_t i = 0; i < row.size(); ++i)
        out << row[i] << (i + 1 < row.size() ? "," : "");
      out << "\n";
    }
  }
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names = {
      "moments", "kernel-check", "bloch",        "bmo",   "hankel",
      "schatten", "compactness",  "equivalence", "fejer", "identities"};
  return names;
}

}  // namespace fock::cli
