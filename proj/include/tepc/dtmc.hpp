#ifndef TEPC_DTMC_HPP
#define TEPC_DTMC_HPP

#include <string>
#include <vector>

#include "tepc/channel.hpp"

namespace tepc {

enum class EquilibriumTarget { kNash, kSatisfaction };

std::string to_string(EquilibriumTarget target);

struct DtmcParams {
  int num_players = 2;        // K
  int num_channels = 4;       // C, must exceed K
  int num_power_levels = 6;   // Q
  int satisfying_levels = 1;  // Q_S, drives the satisfaction-target chain
  double epsilon = 0.02;
  // Utility improvement assumed at a repair acceptance; enters the
  // epsilon^(1+g) acceptance exponent. Calibrated default: a repair jumps
  // from a broken benchmark near the bottom of the utility range to a
  // satisfied one near the top.
  double delta_u = 0.8;

  void validate() const;
};

// Reduced chain describing the network around an equilibrium. State 0 is the
// equilibrium; states 1..K form a repair ladder indexed by how many players
// still use a wrong action (each rung fixes one); the last state holds a
// discontent player mid-search. Leaving the equilibrium requires two
// simultaneous experiments that collide, hence the epsilon^2 scale; the
// discontent state redistributes into the ladder in one settling step, with
// the direct equilibrium re-entry carved out of the one-player landing.
struct DtmcModel {
  EquilibriumTarget target = EquilibriumTarget::kNash;
  DtmcParams params;
  std::vector<std::vector<double>> transition;  // row-stochastic
  std::vector<std::string> state_names;

  int num_states() const { return static_cast<int>(transition.size()); }
  int equilibrium_state() const { return 0; }
  int repair_state(int remaining) const { return remaining; }  // 1..K
  int deepest_repair_state() const { return params.num_players; }
  int discontent_state() const { return num_states() - 1; }
};

// Count of grid levels whose interference-free SINR clears the threshold.
int satisfying_level_count(int num_power_levels, double p_max, double noise_power,
                           double sinr_threshold);

// Same count derived from an instance; requires the simplified gain pattern
// (unit direct gains, 1/2 cross gains).
int q_s(const NetworkInstance& instance);

DtmcModel transition_probs(const DtmcParams& params, EquilibriumTarget target);

// Expected first-passage time to the equilibrium state, solved exactly from
// the absorption linear system.
double hitting_time(const DtmcModel& model, int from_state);

struct HittingTimeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Closed-form bracket for the repair time (full ladder traversal).
HittingTimeBounds bounds_T(const DtmcParams& params, EquilibriumTarget target);

// Closed-form long-run fraction of time spent at the equilibrium.
double occupancy(const DtmcParams& params, EquilibriumTarget target);

}  // namespace tepc

#endif
