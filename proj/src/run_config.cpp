#include "retopt/run_config.hpp"

#include <fstream>
#include <stdexcept>

#include "retopt/errors.hpp"

namespace retopt {

using nlohmann::json;

namespace {

const json& get(const json& obj, const std::string& key, const std::string& section) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError("missing key '" + section + "." + key + "'");
  }
  return *it;
}

double get_number(const json& obj, const std::string& key, const std::string& section) {
  const json& v = get(obj, key, section);
  if (!v.is_number()) throw ConfigError("'" + section + "." + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> get_array(const json& obj, const std::string& key,
                              const std::string& section) {
  const json& v = get(obj, key, section);
  if (!v.is_array()) throw ConfigError("'" + section + "." + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError("'" + section + "." + key + "' must be numeric");
    out.push_back(e.get<double>());
  }
  return out;
}

ExpectedLossFunction parse_loss(const json& doc) {
  const json& lf = get(doc, "loss_function", "");
  const std::string shape = get(lf, "shape", "loss_function").get<std::string>();
  try {
    if (shape == "piecewise_constant") {
      return ExpectedLossFunction::piecewise_constant(
          get_array(lf, "edges", "loss_function"), get_array(lf, "values", "loss_function"));
    }
    if (shape == "piecewise_linear") {
      return ExpectedLossFunction::piecewise_linear(
          get_array(lf, "nodes", "loss_function"), get_array(lf, "values", "loss_function"));
    }
    if (shape == "exponential") {
      return ExpectedLossFunction::exponential(get_number(lf, "a", "loss_function"),
                                               get_number(lf, "b", "loss_function"),
                                               get_number(lf, "x_max", "loss_function"));
    }
    if (shape == "power") {
      return ExpectedLossFunction::truncated_power(
          get_number(lf, "a", "loss_function"), get_number(lf, "p", "loss_function"),
          get_number(lf, "epsilon", "loss_function"), get_number(lf, "x_max", "loss_function"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("loss_function: ") + e.what());
  }
  throw ConfigError("loss_function.shape '" + shape + "' unknown");
}

Retention parse_retention(const json& r) {
  const std::string kind = get(r, "kind", "retention").get<std::string>();
  try {
    if (kind == "zero") return Retention::zero();
    if (kind == "identity") return Retention::identity();
    if (kind == "deductible") {
      return Retention::straight_deductible(get_number(r, "d", "retention"));
    }
    if (kind == "deductible_with_limit") {
      return Retention::deductible_with_limit(get_number(r, "d", "retention"),
                                              get_number(r, "limit", "retention"));
    }
    if (kind == "proportional") {
      return Retention::proportional(get_number(r, "alpha", "retention"));
    }
    if (kind == "stepwise") {
      return Retention::step_wise(get_array(r, "edges", "retention"),
                                  get_array(r, "levels", "retention"));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("retention: ") + e.what());
  }
  throw ConfigError("retention.kind '" + kind + "' unknown");
}

Disutility parse_insured(const json& doc) {
  const json& ins = get(doc, "insured", "");
  if (ins.value("risk_neutral", false)) return Disutility::risk_neutral();
  try {
    return Disutility::exponential(get_number(ins, "rho", "insured"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("insured: ") + e.what());
  }
}

SimConfig parse_sim(const json& s, const ExpectedLossFunction& f) {
  SimConfig cfg;
  cfg.seed = get(s, "seed", "sim").get<std::uint64_t>();
  cfg.years = get(s, "years", "sim").get<std::int64_t>();
  if (cfg.years < 1) throw ConfigError("'sim.years' must be >= 1");
  if (s.contains("cells")) {
    cfg.cell_edges = get_array(s, "cells", "sim");
  } else {
    const int n = s.value("cell_count", 1);
    if (n < 1) throw ConfigError("'sim.cell_count' must be >= 1");
    for (int i = 0; i <= n; ++i) cfg.cell_edges.push_back(f.x_max() * i / n);
  }
  const std::string rule = s.value("severity_rule", std::string("uniform"));
  if (rule == "uniform") {
    cfg.severity_rule = SeverityRule::UniformWithinCell;
  } else if (rule == "midpoint") {
    cfg.severity_rule = SeverityRule::CellMidpoint;
  } else {
    throw ConfigError("'sim.severity_rule' must be 'uniform' or 'midpoint'");
  }
  return cfg;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  const int version = doc.value("schema_version", -1);
  if (version != kSchemaVersion) {
    throw ConfigError("'schema_version' must be " + std::to_string(kSchemaVersion));
  }

  ExpectedLossFunction f = parse_loss(doc);
  Disutility insured = parse_insured(doc);

  const json& terms_obj = get(doc, "terms", "");
  PolicyTerms terms = [&] {
    try {
      return PolicyTerms(get_number(terms_obj, "loading_c", "terms"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("terms: ") + e.what());
    }
  }();

  RunConfig cfg{std::move(f), std::nullopt, insured, terms, std::nullopt, std::nullopt, {}};

  if (doc.contains("retention")) cfg.retention = parse_retention(doc.at("retention"));
  if (doc.contains("sim")) {
    try {
      cfg.sim = parse_sim(doc.at("sim"), cfg.loss_function);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("sim: ") + e.what());
    }
  }
  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    SweepSpec spec;
    spec.parameter = get(sw, "parameter", "sweep").get<std::string>();
    if (spec.parameter != "c" && spec.parameter != "rho" && spec.parameter != "deductible") {
      throw ConfigError("'sweep.parameter' must be one of c, rho, deductible");
    }
    spec.values = get_array(sw, "values", "sweep");
    if (spec.values.empty()) throw ConfigError("'sweep.values' must be non-empty");
    cfg.sweep = std::move(spec);
  }
  if (doc.contains("optimize")) {
    const json& op = doc.at("optimize");
    cfg.optimize.grid_cells = op.value("grid_cells", 512);
    if (cfg.optimize.grid_cells < 1) throw ConfigError("'optimize.grid_cells' must be >= 1");
    cfg.optimize.descent_iterations = op.value("descent_iterations", 500);
    cfg.optimize.descent_step = op.value("descent_step", 0.0);
  }
  return cfg;
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    if (dot == std::string::npos) {
      json value;
      try {
        value = json::parse(raw);
      } catch (const json::parse_error&) {
        value = raw;  // keep bare strings as strings
      }
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

}  // namespace retopt
