#pragma once

#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "oscsat/cnf.hpp"

namespace oscsat {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Phase deviations of the N oscillators plus elapsed time. Time is measured
/// in oscillation periods, so the carrier phase at time t is 2*pi*t.
struct PhaseState {
  std::vector<double> alphas;
  double cycles_elapsed = 0.0;
};

struct DynamicsParams {
  /// Product of PPV amplitude and feedback gain; the drift is
  /// sign * coupling * sin(carrier + alpha) * sum(k).
  double coupling_g = 0.0;
  double steepness_beta = 10.0;
  /// Additive white noise, radians per sqrt(cycle).
  double noise_sigma = 0.0;
  double dt = 0.01;
  /// +1 or -1, applied to the drift term.
  int sign_convention = 1;

  static constexpr double omega = kTwoPi;

  /// Throws std::invalid_argument when dt or beta is out of range.
  void validate() const;
};

/// Lumped circuit coefficients of the entropy production estimate.
struct EntropyParams {
  double c_out = 1.0;
  double c_fb = 1.0;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Buffered oscillator output: 0.5 * (1 + tanh(beta * sin(2*pi*t + alpha))),
/// complemented for a negated literal.
[[nodiscard]] double literal_value(double alpha, double t_cycles, bool negated, double beta);

/// Smooth OR: 1 - prod(1 - l) over the distinct literals of the clause.
[[nodiscard]] double clause_value(const Clause& clause, const PhaseState& phases, double beta);

struct Feedback {
  double v_y = 0.0;
  double k_sum = 0.0;
};

/// Global feedback signal: k_sum = sum of clause values, v_y = coupling * k_sum.
[[nodiscard]] Feedback feedback_signal(const CnfFormula& formula, const PhaseState& phases,
                                       const DynamicsParams& params);

/// One Euler-Maruyama step. All oscillators update from the pre-step state.
/// `noise_draws` holds N standard normal samples.
[[nodiscard]] PhaseState sde_step(const PhaseState& phases, const CnfFormula& formula,
                                  const DynamicsParams& params,
                                  std::span<const double> noise_draws);

/// c_out * k_sum + c_fb * k_sum^2 / n_vars.
[[nodiscard]] double entropy_rate_proxy(double k_sum, std::size_t n_vars,
                                        const EntropyParams& params);

/// Counts output transitions over one period of an ideal OR gate driven by
/// 50% duty-cycle square waves with the given phases (radians).
[[nodiscard]] int or_transition_count(std::span<const double> input_phases,
                                      int samples_per_period = 4096);

/// Clause network with literals de-duplicated and flattened, for repeated
/// evaluation inside the integrator. Holds scratch buffers, so one instance
/// must not be shared between threads.
class OscillatorNetwork {
 public:
  explicit OscillatorNetwork(const CnfFormula& formula);

  [[nodiscard]] std::size_t num_variables() const { return num_variables_; }
  [[nodiscard]] std::size_t num_clauses() const { return clause_offsets_.size() - 1; }

  /// Fills the sin(carrier + alpha) cache and returns sum(k).
  double evaluate(const PhaseState& phases, double beta);

  /// In-place Euler-Maruyama step. Throws NonFiniteError on blow-up.
  Feedback step(PhaseState& phases, const DynamicsParams& params,
                std::span<const double> noise_draws);

 private:
  std::size_t num_variables_;
  // 2 * (variable - 1) + negated, indexing falsity_.
  std::vector<std::uint32_t> literal_codes_;
  std::vector<std::size_t> clause_offsets_;
  std::vector<double> sines_;
  // Smooth "literal is false" level for both polarities of every variable.
  std::vector<double> falsity_;
};

}  // namespace oscsat
