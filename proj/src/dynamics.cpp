#include "oscsat/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace oscsat {

void DynamicsParams::validate() const {
  if (!(dt > 0.0) || dt > 0.1) {
    throw std::invalid_argument("dt must lie in (0, 0.1] cycles, got " + std::to_string(dt));
  }
  if (!(steepness_beta > 0.0)) {
    throw std::invalid_argument("steepness beta must be positive");
  }
  if (coupling_g < 0.0 || noise_sigma < 0.0) {
    throw std::invalid_argument("coupling and noise must be nonnegative");
  }
  if (sign_convention != 1 && sign_convention != -1) {
    throw std::invalid_argument("sign convention must be +1 or -1");
  }
}

namespace {

// 0.5 * (1 + tanh(x)) written as the logistic 1 / (1 + exp(-2x)).
double high_level(double sine, double beta) { return 1.0 / (1.0 + std::exp(-2.0 * beta * sine)); }

Clause distinct_literals(const Clause& clause) {
  Clause out;
  out.reserve(clause.size());
  for (const Literal& lit : clause) {
    if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(lit);
  }
  return out;
}

}  // namespace

double literal_value(double alpha, double t_cycles, bool negated, double beta) {
  const double high = high_level(std::sin(kTwoPi * t_cycles + alpha), beta);
  return negated ? 1.0 - high : high;
}

double clause_value(const Clause& clause, const PhaseState& phases, double beta) {
  double all_low = 1.0;
  for (const Literal& lit : distinct_literals(clause)) {
    all_low *= 1.0 - literal_value(phases.alphas.at(lit.variable - 1), phases.cycles_elapsed,
                                   lit.negated, beta);
  }
  return 1.0 - all_low;
}

Feedback feedback_signal(const CnfFormula& formula, const PhaseState& phases,
                         const DynamicsParams& params) {
  OscillatorNetwork network(formula);
  const double k_sum = network.evaluate(phases, params.steepness_beta);
  return Feedback{params.coupling_g * k_sum, k_sum};
}

PhaseState sde_step(const PhaseState& phases, const CnfFormula& formula,
                    const DynamicsParams& params, std::span<const double> noise_draws) {
  OscillatorNetwork network(formula);
  PhaseState next = phases;
  network.step(next, params, noise_draws);
  return next;
}

double entropy_rate_proxy(double k_sum, std::size_t n_vars, const EntropyParams& params) {
  if (n_vars == 0) throw std::invalid_argument("entropy proxy needs at least one variable");
  // The feedback term sums (1/N)^2 over N resistors, leaving 1/N.
  return params.c_out * k_sum + params.c_fb * k_sum * k_sum / static_cast<double>(n_vars);
}

int or_transition_count(std::span<const double> input_phases, int samples_per_period) {
  if (input_phases.empty()) throw std::invalid_argument("OR gate needs at least one input");
  if (samples_per_period < 1000) {
    throw std::invalid_argument("need at least 1000 samples per period");
  }
  // Sample at bin midpoints so no sample lands exactly on an edge of the
  // aligned waveforms.
  auto output_at = [&](int k) {
    const double carrier = kTwoPi * (static_cast<double>(k) + 0.5) / samples_per_period;
    return std::any_of(input_phases.begin(), input_phases.end(),
                       [&](double phi) { return std::sin(carrier + phi) >= 0.0; });
  };
  int transitions = 0;
  bool previous = output_at(samples_per_period - 1);
  for (int k = 0; k < samples_per_period; ++k) {
    const bool current = output_at(k);
    transitions += current != previous;
    previous = current;
  }
  return transitions;
}

OscillatorNetwork::OscillatorNetwork(const CnfFormula& formula)
    : num_variables_(formula.num_variables()) {
  clause_offsets_.reserve(formula.num_clauses() + 1);
  clause_offsets_.push_back(0);
  for (const Clause& clause : formula.clauses()) {
    for (const Literal& lit : distinct_literals(clause)) {
      literal_codes_.push_back(2 * (lit.variable - 1) + (lit.negated ? 1 : 0));
    }
    clause_offsets_.push_back(literal_codes_.size());
  }
  sines_.resize(num_variables_);
  falsity_.resize(2 * num_variables_);
}

double OscillatorNetwork::evaluate(const PhaseState& phases, double beta) {
  if (phases.alphas.size() != num_variables_) {
    throw std::invalid_argument("phase vector length does not match variable count");
  }
  const double carrier = kTwoPi * phases.cycles_elapsed;
  for (std::size_t j = 0; j < num_variables_; ++j) {
    sines_[j] = std::sin(carrier + phases.alphas[j]);
    const double high = high_level(sines_[j], beta);
    falsity_[2 * j] = 1.0 - high;
    falsity_[2 * j + 1] = high;
  }
  double k_sum = 0.0;
  const std::size_t m = clause_offsets_.size() - 1;
  for (std::size_t i = 0; i < m; ++i) {
    double all_low = 1.0;
    for (std::size_t p = clause_offsets_[i]; p < clause_offsets_[i + 1]; ++p) {
      all_low *= falsity_[literal_codes_[p]];
    }
    k_sum += 1.0 - all_low;
  }
  return k_sum;
}

Feedback OscillatorNetwork::step(PhaseState& phases, const DynamicsParams& params,
                                 std::span<const double> noise_draws) {
  if (noise_draws.size() != num_variables_) {
    throw std::invalid_argument("need one noise draw per oscillator");
  }
  const double k_sum = evaluate(phases, params.steepness_beta);
  const double v_y = params.coupling_g * k_sum;
  const double drift_scale = static_cast<double>(params.sign_convention) * v_y * params.dt;
  const double noise_scale = params.noise_sigma * std::sqrt(params.dt);
  for (std::size_t j = 0; j < num_variables_; ++j) {
    const double next = phases.alphas[j] + drift_scale * sines_[j] + noise_scale * noise_draws[j];
    if (!std::isfinite(next)) {
      throw NonFiniteError("phase of oscillator " + std::to_string(j + 1) +
                           " became non-finite at t = " + std::to_string(phases.cycles_elapsed));
    }
    phases.alphas[j] = next;
  }
  phases.cycles_elapsed += params.dt;
  return Feedback{v_y, k_sum};
}

}  // namespace oscsat
