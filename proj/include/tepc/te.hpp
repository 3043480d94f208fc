#ifndef TEPC_TE_HPP
#define TEPC_TE_HPP

#include <random>

#include "tepc/channel.hpp"

namespace tepc {

// Trial-and-error moods. Content players mostly replay their benchmark and
// experiment rarely; hopeful/watchful are one-step probation states after an
// unexplained utility change; discontent players search uniformly at random.
enum class Mood { kContent, kHopeful, kWatchful, kDiscontent };

const char* to_string(Mood mood);

// Linear acceptance-shaping functions. g_fn maps a utility improvement to
// the exponent used for adopting an experiment; f_fn maps a realized utility
// to the exponent used for settling out of discontent. Both hit zero at the
// upper end of their domain; probability computations clamp the exponent to
// a small positive floor so acceptance stays strictly below one.
double g_fn(double delta_u);
double f_fn(double u, int num_players);

struct TeParams {
  double epsilon = 0.02;
  int num_players = 1;  // scales f
  double g_slope = -0.2;
  double g_intercept = 0.2;
  double exponent_floor = 1e-6;

  double g(double delta_u) const { return g_slope * delta_u + g_intercept; }
  double f(double u) const { return (g_slope * u + g_intercept) / num_players; }
  // epsilon^g, acceptance of an experiment that improved utility by delta_u.
  double experiment_accept_prob(double delta_u) const;
  // epsilon^f, chance a discontent player settles on what it just played.
  double settle_accept_prob(double u) const;
  void validate() const;
};

struct TeState {
  Mood mood = Mood::kDiscontent;
  Action benchmark_action{};
  double benchmark_utility = 0.0;
  Action last_action{};
  bool experimented_last_step = false;
};

struct SelectedAction {
  Action action;
  bool experimented = false;
};

// Action choice for the current step. Content: benchmark with probability
// 1 - epsilon, otherwise a uniform draw over the other C*Q - 1 actions.
// Hopeful and watchful replay the benchmark. Discontent draws uniformly
// over the full action set.
SelectedAction select_action(const TeState& state, int num_channels, int num_power_levels,
                             const TeParams& params, std::mt19937_64& rng);

// State transition after observing the utility of the action just played.
// The caller must have stored that action in state.last_action and the
// experiment flag in state.experimented_last_step. Exact utility ties carry
// no signal: content stays put, probation states resolve back to content
// with benchmarks kept.
TeState update(TeState state, double realized_utility, const TeParams& params,
               std::mt19937_64& rng);

}  // namespace tepc

#endif
