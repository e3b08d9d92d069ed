#include "hardynil/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hardynil/errors.hpp"

namespace hardynil::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

std::string entry_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw ConfigError(where + ": matrix entries must be numbers or strings");
}

std::vector<std::vector<std::string>> matrices(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key + ": expected an array of entry lists");
  std::vector<std::vector<std::string>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string where = key + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) throw ConfigError(where + ": expected an array of entries");
    std::vector<std::string> row;
    for (const auto& e : v[i]) {
      row.push_back(entry_text(e, where));
      parse_entry(row.back());
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key + ": expected a string");
  return v.get<std::string>();
}

std::int64_t grid_number(std::string_view s) {
  double v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("N grid: '" + std::string(s) + "' is not a number");
  if (!(v >= 1 && v <= 9e15) || v != std::floor(v))
    throw ConfigError("N grid: '" + std::string(s) + "' is not a positive integer");
  return static_cast<std::int64_t>(v);
}

void check_ascending(const std::vector<std::int64_t>& g) {
  for (std::size_t i = 1; i < g.size(); ++i)
    if (g[i] <= g[i - 1]) throw ConfigError("N grid must be strictly increasing");
}

nilpotent::Unitriangular<DD> to_matrix(int d, const std::vector<std::string>& entries) {
  std::vector<DD> v;
  for (const auto& e : entries) v.push_back(parse_entry(e));
  return nilpotent::Unitriangular<DD>::from_entries(d, v);
}

}  // namespace

DD parse_entry(std::string_view text) {
  hardy::HardyExpr e;
  try {
    e = hardy::parse(text);
  } catch (const ParseError& err) {
    throw ConfigError("matrix entry '" + std::string(text) + "': " + err.what());
  }
  DD v(0.0);
  for (const auto& term : e.terms()) {
    if (!term.is_constant()) throw ConfigError("matrix entry '" + std::string(text) + "' is not a constant");
    v += term.coeff.to_dd();
  }
  return v;
}

std::vector<std::int64_t> parse_grid(std::string_view text) {
  std::vector<std::int64_t> out;
  const auto c1 = text.find(':');
  if (c1 != std::string_view::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.substr(c2 + 1) != "decade")
      throw ConfigError("N grid: expected a:b:decade, got '" + std::string(text) + "'");
    const std::int64_t a = grid_number(text.substr(0, c1)), b = grid_number(text.substr(c1 + 1, c2 - c1 - 1));
    if (b < a) throw ConfigError("N grid: empty range '" + std::string(text) + "'");
    for (std::int64_t n = a; n <= b; n *= 10) {
      out.push_back(n);
      if (n > b / 10) break;
    }
    return out;
  }
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    out.push_back(grid_number(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  check_ascending(out);
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(doc,
                 {"group", "generators", "functions", "base_point", "floor_mode", "N_grid", "tests",
                  "declared_closure", "window", "precision", "seed", "threads"},
                 "config");
  for (const char* key : {"group", "generators", "functions"})
    if (!doc.contains(key)) throw ConfigError(std::string("config: missing key '") + key + "'");

  ExperimentConfig cfg;
  const json& group = doc["group"];
  if (!group.is_object()) throw ConfigError("group: expected an object");
  reject_unknown(group, {"dim"}, "group");
  if (!group.contains("dim")) throw ConfigError("group: missing key 'dim'");

  cfg.generators = matrices(doc["generators"], "generators");
  if (cfg.generators.empty()) throw ConfigError("generators: at least one generator is required");
  const json& dim = group["dim"];
  if (dim.is_number_integer()) {
    cfg.dims.assign(cfg.generators.size(), dim.get<int>());
  } else if (dim.is_array()) {
    for (const auto& d : dim) {
      if (!d.is_number_integer()) throw ConfigError("group.dim: expected integers");
      cfg.dims.push_back(d.get<int>());
    }
  } else {
    throw ConfigError("group.dim: expected an integer or an array of integers");
  }
  if (cfg.dims.size() != cfg.generators.size())
    throw ConfigError("group.dim: " + std::to_string(cfg.dims.size()) + " blocks for " +
                      std::to_string(cfg.generators.size()) + " generators");
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    const int d = cfg.dims[i];
    if (d < 2 || d > 16) throw ConfigError("group.dim: dimension must be in [2, 16]");
    if (cfg.generators[i].size() != static_cast<std::size_t>(d * (d - 1) / 2))
      throw ConfigError("generators[" + std::to_string(i) + "]: expected " + std::to_string(d * (d - 1) / 2) +
                        " entries");
  }

  const json& fns = doc["functions"];
  if (!fns.is_array()) throw ConfigError("functions: expected an array of strings");
  for (const auto& f : fns) {
    cfg.functions.push_back(get_string(f, "functions"));
    try {
      hardy::parse(cfg.functions.back());
    } catch (const ParseError& e) {
      throw ConfigError("functions: '" + cfg.functions.back() + "': " + e.what());
    }
  }
  if (cfg.functions.size() != cfg.generators.size())
    throw ConfigError("functions: " + std::to_string(cfg.functions.size()) + " functions for " +
                      std::to_string(cfg.generators.size()) + " generators");

  if (doc.contains("base_point") && !doc["base_point"].is_null()) {
    cfg.base_point = matrices(doc["base_point"], "base_point");
    if (cfg.base_point->size() != cfg.dims.size()) throw ConfigError("base_point: one entry list per block");
    for (std::size_t i = 0; i < cfg.dims.size(); ++i)
      if ((*cfg.base_point)[i].size() != cfg.generators[i].size())
        throw ConfigError("base_point[" + std::to_string(i) + "]: wrong number of entries");
  }
  if (doc.contains("floor_mode")) {
    const auto s = get_string(doc["floor_mode"], "floor_mode");
    if (s == "real") cfg.floor_mode = orbits::FloorMode::real;
    else if (s == "integer_part") cfg.floor_mode = orbits::FloorMode::integer_part;
    else throw ConfigError("floor_mode: expected 'real' or 'integer_part'");
  }
  if (doc.contains("N_grid")) {
    const json& g = doc["N_grid"];
    if (g.is_string()) {
      cfg.n_grid = parse_grid(g.get<std::string>());
    } else if (g.is_array()) {
      for (const auto& v : g) {
        if (v.is_number_integer()) cfg.n_grid.push_back(v.get<std::int64_t>());
        else if (v.is_number() || v.is_string()) cfg.n_grid.push_back(grid_number(v.is_string() ? v.get<std::string>() : v.dump()));
        else throw ConfigError("N_grid: expected numbers");
        if (cfg.n_grid.back() < 1) throw ConfigError("N_grid: values must be positive");
      }
      check_ascending(cfg.n_grid);
    } else {
      throw ConfigError("N_grid: expected a string or an array");
    }
  }
  if (doc.contains("tests")) {
    const json& t = doc["tests"];
    if (!t.is_array()) throw ConfigError("tests: expected an array of strings");
    for (const auto& v : t) {
      cfg.tests.push_back(get_string(v, "tests"));
      try {
        orbits::TestFunction::parse(cfg.tests.back());
      } catch (const PreconditionError& e) {
        throw ConfigError(std::string("tests: ") + e.what());
      }
    }
    if (!cfg.tests.empty() && cfg.tests.size() != cfg.generators.size())
      throw ConfigError("tests: one test function per generator");
    for (std::size_t i = 0; i < cfg.tests.size(); ++i) {
      const int d = cfg.dims[i];
      try {
        orbits::TestFunction::parse(cfg.tests[i])
            .check_shape(static_cast<std::size_t>(d * (d - 1) / 2), static_cast<std::size_t>(d - 1));
      } catch (const PreconditionError& e) {
        throw ConfigError("tests[" + std::to_string(i) + "]: " + e.what());
      }
    }
  }
  if (doc.contains("declared_closure")) {
    const auto s = get_string(doc["declared_closure"], "declared_closure");
    if (s == "full") cfg.declared_closure = averages::Closure::full;
    else if (s == "undeclared") cfg.declared_closure = averages::Closure::undeclared;
    else throw ConfigError("declared_closure: expected 'full' or 'undeclared'");
  }
  if (doc.contains("window")) {
    const json& w = doc["window"];
    if (w.is_string()) {
      if (w.get<std::string>() != "auto") throw ConfigError("window: expected 'auto' or {\"gamma\": ...}");
    } else if (w.is_object()) {
      reject_unknown(w, {"gamma"}, "window");
      if (!w.contains("gamma")) throw ConfigError("window: missing key 'gamma'");
      try {
        cfg.window_gamma = parse_rational(w["gamma"].is_string() ? w["gamma"].get<std::string>() : w["gamma"].dump());
      } catch (const std::exception&) {
        throw ConfigError("window.gamma: expected a rational such as \"3/5\"");
      }
      if (!(*cfg.window_gamma > 0 && *cfg.window_gamma < 1)) throw ConfigError("window.gamma: must lie in (0, 1)");
    } else {
      throw ConfigError("window: expected 'auto' or {\"gamma\": ...}");
    }
  }
  if (doc.contains("precision")) {
    const auto s = get_string(doc["precision"], "precision");
    if (s == "double") cfg.precision = orbits::Precision::double_precision;
    else if (s == "dd") cfg.precision = orbits::Precision::double_double;
    else throw ConfigError("precision: expected 'double' or 'dd'");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("threads")) {
    if (!doc["threads"].is_number_unsigned()) throw ConfigError("threads: expected a nonnegative integer");
    cfg.threads = doc["threads"].get<unsigned>();
  }
  return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["group"]["dim"] = cfg.dims;
  doc["generators"] = cfg.generators;
  doc["functions"] = cfg.functions;
  if (cfg.base_point) doc["base_point"] = *cfg.base_point;
  doc["floor_mode"] = cfg.floor_mode == orbits::FloorMode::real ? "real" : "integer_part";
  doc["N_grid"] = cfg.n_grid;
  doc["tests"] = cfg.tests;
  doc["declared_closure"] = cfg.declared_closure == averages::Closure::full ? "full" : "undeclared";
  if (cfg.window_gamma) doc["window"]["gamma"] = to_string(*cfg.window_gamma);
  else doc["window"] = "auto";
  doc["precision"] = cfg.precision == orbits::Precision::double_double ? "dd" : "double";
  doc["seed"] = cfg.seed;
  doc["threads"] = cfg.threads;
  return doc;
}

orbits::OrbitConfig to_orbit_config(const ExperimentConfig& cfg) {
  orbits::OrbitConfig oc;
  oc.block_dims = cfg.dims;
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    oc.generators.push_back({i, to_matrix(cfg.dims[i], cfg.generators[i])});
    oc.functions.push_back(hardy::parse(cfg.functions[i]));
    if (cfg.base_point) oc.base_point.blocks.push_back(to_matrix(cfg.dims[i], (*cfg.base_point)[i]));
  }
  oc.floor_mode = cfg.floor_mode;
  oc.precision = cfg.precision;
  oc.threads = cfg.threads;
  return oc;
}

averages::AverageExperiment to_experiment(const ExperimentConfig& cfg) {
  averages::AverageExperiment exp;
  const auto oc = to_orbit_config(cfg);
  for (std::size_t i = 0; i < cfg.dims.size(); ++i) {
    averages::Factor f{oc.generators[i].element, oc.functions[i], {}, orbits::TestFunction::one()};
    if (cfg.base_point) f.base_point = oc.base_point.blocks[i];
    if (!cfg.tests.empty()) f.test = orbits::TestFunction::parse(cfg.tests[i]);
    exp.factors.push_back(std::move(f));
  }
  exp.floor_mode = cfg.floor_mode;
  exp.precision = cfg.precision;
  exp.threads = cfg.threads;
  exp.declared_closure = cfg.declared_closure;
  return exp;
}

windows::WindowPlan window_plan(const ExperimentConfig& cfg) {
  std::vector<hardy::HardyExpr> inputs;
  for (const auto& text : cfg.functions) {
    const auto snp = hardy::decompose(hardy::parse(text)).snp_part;
    if (snp.is_zero()) continue;
    const auto cls = hardy::classify(snp);
    if (cls.is_subfractional || cls.tends_to == hardy::Tendency::zero || cls.tends_to == hardy::Tendency::finite)
      continue;
    if (std::find(inputs.begin(), inputs.end(), snp) == inputs.end()) inputs.push_back(snp);
  }
  if (inputs.empty()) return {cfg.window_gamma.value_or(Rational(1, 2)), {}, {}};
  if (cfg.window_gamma) {
    auto orders = windows::orders_for(inputs, *cfg.window_gamma);
    if (!orders)
      throw PreconditionError("window: t^" + to_string(*cfg.window_gamma) + " is not in a class of every function");
    return {*cfg.window_gamma, inputs, *orders};
  }
  return windows::find_common_window(inputs);
}

}  // namespace hardynil::cli
