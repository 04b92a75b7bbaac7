#include "oscsat/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace oscsat {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("bad boolean '" + std::string(value) + "' for '" + std::string(key) + "'");
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void apply_config_value(SolverConfig& config, std::string_view key, std::string_view value) {
  DynamicsParams& d = config.dynamics;
  if (key == "coupling") {
    d.coupling_g = parse_number<double>(key, value);
  } else if (key == "beta") {
    d.steepness_beta = parse_number<double>(key, value);
  } else if (key == "sigma") {
    d.noise_sigma = parse_number<double>(key, value);
  } else if (key == "dt") {
    d.dt = parse_number<double>(key, value);
  } else if (key == "sign") {
    d.sign_convention = parse_number<int>(key, value.starts_with('+') ? value.substr(1) : value);
  } else if (key == "max_cycles") {
    config.max_cycles = parse_number<double>(key, value);
  } else if (key == "samples_per_cycle") {
    config.readout_samples_per_cycle = parse_number<int>(key, value);
  } else if (key == "restarts") {
    config.restarts = parse_number<int>(key, value);
  } else if (key == "seed") {
    config.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "postprocess") {
    config.postprocess = parse_bool(key, value);
  } else if (key == "postprocess_max_iters") {
    config.postprocess_max_iters = parse_number<int>(key, value);
  } else if (key == "postprocess_subbudget_fraction") {
    config.postprocess_subbudget_fraction = parse_number<double>(key, value);
  } else if (key == "anneal") {
    config.anneal = parse_bool(key, value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(SolverConfig& config, std::string_view text, const std::string& origin) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_config_value(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(SolverConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(config, buffer.str(), path);
}

std::string config_to_text(const SolverConfig& c) {
  std::ostringstream out;
  out << "coupling = " << real(c.dynamics.coupling_g) << "\n"
      << "beta = " << real(c.dynamics.steepness_beta) << "\n"
      << "sigma = " << real(c.dynamics.noise_sigma) << "\n"
      << "dt = " << real(c.dynamics.dt) << "\n"
      << "sign = " << c.dynamics.sign_convention << "\n"
      << "max_cycles = " << real(c.max_cycles) << "\n"
      << "samples_per_cycle = " << c.readout_samples_per_cycle << "\n"
      << "restarts = " << c.restarts << "\n"
      << "seed = " << c.seed << "\n"
      << "postprocess = " << (c.postprocess ? "true" : "false") << "\n"
      << "postprocess_max_iters = " << c.postprocess_max_iters << "\n"
      << "postprocess_subbudget_fraction = " << real(c.postprocess_subbudget_fraction) << "\n"
      << "anneal = " << (c.anneal ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace oscsat
