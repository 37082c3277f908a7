#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "retopt/coverage.hpp"
#include "retopt/disutility.hpp"
#include "retopt/loss_model.hpp"
#include "retopt/process_sim.hpp"
#include "retopt/valuation.hpp"

namespace retopt {

inline constexpr int kSchemaVersion = 1;

struct SweepSpec {
  std::string parameter;  // one of "c", "rho", "deductible"
  std::vector<double> values;
};

struct OptimizeSpec {
  int grid_cells = 512;
  int descent_iterations = 500;
  double descent_step = 0.0;  // <= 0: default
};

// Parsed CLI run configuration. Module-level invariants are enforced at
// parse time; violations raise ConfigError with the offending key.
struct RunConfig {
  ExpectedLossFunction loss_function;
  std::optional<Retention> retention;
  Disutility insured;
  PolicyTerms terms;
  std::optional<SimConfig> sim;
  std::optional<SweepSpec> sweep;
  OptimizeSpec optimize;
};

RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json load_config_file(const std::string& path);

// "a.b.c=value" overrides applied onto the raw JSON document before parsing;
// the value is parsed as JSON when possible, kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace retopt
