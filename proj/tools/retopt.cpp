#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "retopt/cli_runner.hpp"
#include "retopt/errors.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;
constexpr int kExitIoError = 4;

struct Options {
  std::string config_path;
  std::string output_path = "-";
  std::string levels_path;
  std::vector<std::string> overrides;
};

int run(const std::string& subcommand, const Options& opt) {
  nlohmann::json doc = retopt::load_config_file(opt.config_path);
  for (const auto& assignment : opt.overrides) {
    retopt::apply_override(doc, assignment);
  }
  const retopt::RunConfig cfg = retopt::parse_config(doc);

  std::ostringstream body;
  std::unique_ptr<std::ostringstream> levels;
  if (!opt.levels_path.empty()) levels = std::make_unique<std::ostringstream>();
  retopt::run_subcommand(subcommand, cfg, body, levels.get());

  const auto write_file = [](const std::string& path, const std::string& content) {
    if (path == "-") {
      std::cout << content;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush()) {
      throw std::ios_base::failure("cannot write output file '" + path + "'");
    }
  };
  write_file(opt.output_path, body.str());
  if (levels) write_file(opt.levels_path, levels->str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Insurance policy value and Pareto-optimal retention under a compound "
               "Poisson rare-event loss model"};
  app.require_subcommand(1);

  Options opt;
  std::string chosen;
  const std::pair<const char*, const char*> subcommands[] = {
      {"value", "evaluate premium, certain equivalents and policy value"},
      {"breakeven", "loading at which the policy value crosses zero"},
      {"optimize", "optimal retention by closed form, per-cell search and descent"},
      {"simulate", "seeded Monte Carlo years with analytic cross-checks"},
      {"sweep", "evaluate over a list of c, rho or deductible values"},
  };
  for (const auto& [name, description] : subcommands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("config", opt.config_path, "JSON config file")->required();
    sub->add_option("-o,--output", opt.output_path, "output CSV path ('-' for stdout)");
    sub->add_option("--set", opt.overrides, "config override key.path=value (repeatable)");
    if (std::string(name) == "optimize") {
      sub->add_option("--levels", opt.levels_path, "also write step retention levels CSV");
    }
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run(chosen, opt);
  } catch (const retopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIoError;
  } catch (const retopt::EvaluationError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericError;
  }
}
