#ifndef TEPC_GAME_HPP
#define TEPC_GAME_HPP

#include <string>
#include <vector>

#include "tepc/channel.hpp"

namespace tepc {

inline constexpr long long kDefaultEnumerationCap = 10'000'000;

// Everything observable about one joint profile.
struct GameOutcome {
  ActionProfile profile;
  std::vector<double> utilities;
  std::vector<bool> satisfied;
  double welfare = 0.0;
  double total_power = 0.0;
};

// Utility rewards low power and clearing the SINR threshold, normalized to
// [0, 1]: ((p_max - p)/p_max + beta * satisfied) / (1 + beta).
double utility_value(double power, bool satisfied, double p_max, double beta);
double utility(const NetworkInstance& instance, const ActionProfile& profile, int k);
GameOutcome evaluate(const NetworkInstance& instance, const ActionProfile& profile);

// Actions of player k that clear the threshold against the fixed others.
// `others` holds the K-1 remaining players' actions in ascending player
// order with player k removed. May be empty.
std::vector<Action> satisfaction_set(const NetworkInstance& instance,
                                     const std::vector<Action>& others, int k);

// Exhaustive oracles over the joint action space. All of them throw
// InstanceTooLarge when (C*Q)^K exceeds the cap, and return profiles sorted
// by joint index so results are set-like and order-independent.

// Pure Nash equilibria: no unilateral deviation strictly improves the
// deviator. Ties keep a profile in the set.
std::vector<ActionProfile> find_nash(const NetworkInstance& instance,
                                     long long cap = kDefaultEnumerationCap);

// Profiles where every player clears the threshold.
std::vector<ActionProfile> find_satisfaction_equilibria(
    const NetworkInstance& instance, long long cap = kDefaultEnumerationCap);

// Satisfaction equilibria where each player also uses the minimum power
// available inside its satisfaction set against the others. All minimum
// power actions tie regardless of channel.
std::vector<ActionProfile> find_efficient_se(const NetworkInstance& instance,
                                             long long cap = kDefaultEnumerationCap);

struct GlobalSolution {
  int max_satisfiable = 0;      // K*
  double min_total_power = 0.0; // over profiles satisfying K* players
  std::vector<ActionProfile> solutions;
};

// Maximize the number of satisfied players, then minimize total transmit
// power; unsatisfied players are pinned to zero power.
GlobalSolution solve_global(const NetworkInstance& instance,
                            long long cap = kDefaultEnumerationCap);

// True when no proper subset of players can deviate without changing the
// utility of at least one outside player, for every starting profile.
bool check_interdependence(const NetworkInstance& instance,
                           long long cap = kDefaultEnumerationCap);

struct EquilibriumReport {
  std::vector<ActionProfile> nash_profiles;
  std::vector<ActionProfile> satisfaction_profiles;
  std::vector<ActionProfile> efficient_satisfaction_profiles;
  std::vector<ActionProfile> opt_solutions;
  int max_satisfiable = 0;
  double optimal_total_power = 0.0;
};

EquilibriumReport equilibrium_report(const NetworkInstance& instance,
                                     long long cap = kDefaultEnumerationCap);

// JSON rendering with welfare and total power attached to each profile.
std::string report_to_json(const EquilibriumReport& report, const NetworkInstance& instance);

}  // namespace tepc

#endif
