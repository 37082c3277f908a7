#pragma once

#include <ostream>
#include <string>

#include "retopt/run_config.hpp"

namespace retopt {

// Formats a double with 17 significant digits (round-trip exact).
std::string format_full(double v);

// Dispatches one subcommand (value | breakeven | optimize | simulate | sweep)
// against a parsed config, writing CSV to out. Optionally dumps the step
// retention levels of the optimize methods to levels_out.
void run_subcommand(const std::string& subcommand, const RunConfig& cfg, std::ostream& out,
                    std::ostream* levels_out = nullptr);

}  // namespace retopt
