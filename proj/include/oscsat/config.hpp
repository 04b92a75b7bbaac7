#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "oscsat/solver.hpp"

namespace oscsat {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Applies `key = value` lines onto `config`. Blank lines and lines starting
/// with `#` are skipped. Keys: coupling, beta, sigma, dt, sign, max_cycles,
/// samples_per_cycle, restarts, seed, postprocess, postprocess_max_iters,
/// postprocess_subbudget_fraction, anneal.
void apply_config_text(SolverConfig& config, std::string_view text,
                       const std::string& origin = "<config>");
void apply_config_file(SolverConfig& config, const std::string& path);

/// Applies a single key. Throws ConfigError on unknown keys or bad values.
void apply_config_value(SolverConfig& config, std::string_view key, std::string_view value);

/// Every key with its current value, one per line, in the documented order.
[[nodiscard]] std::string config_to_text(const SolverConfig& config);

}  // namespace oscsat
