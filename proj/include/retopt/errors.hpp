#pragma once

#include <stdexcept>
#include <string>

namespace retopt {

// Invalid run configuration (bad key, missing section, invariant violation at
// parse time). Carries the config path/key in the message.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during evaluation: non-finite integrand, exponent
// overflow, internal cross-check mismatch.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace retopt
