#include "tepc/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "tepc/errors.hpp"

namespace tepc {

namespace {

constexpr double kUtilityTol = 1e-12;
constexpr double kPowerTol = 1e-9;

long long checked_profile_count(const NetworkInstance& instance, long long cap,
                                const char* who) {
  const double size = instance.profile_space_size();
  if (size > static_cast<double>(cap)) {
    throw InstanceTooLarge(std::string(who) + ": joint action space of " +
                           std::to_string(size) + " profiles exceeds cap " +
                           std::to_string(cap));
  }
  return static_cast<long long>(size);
}

// Per-profile evaluation shared by the oracles. Walks every joint index once
// and hands (index, utilities, satisfied, total_power) to the visitor.
template <typename Visitor>
void enumerate_outcomes(const NetworkInstance& instance, long long total, Visitor&& visit) {
  const int num_players = instance.num_players();
  std::vector<double> utilities(num_players);
  std::vector<bool> satisfied(num_players);
  ActionProfile profile(num_players);
  for (long long index = 0; index < total; ++index) {
    long long rest = index;
    for (int k = num_players - 1; k >= 0; --k) {
      profile[k] = instance.action_at(static_cast<int>(rest % instance.action_count()));
      rest /= instance.action_count();
    }
    double total_power = 0.0;
    for (int k = 0; k < num_players; ++k) {
      const bool sat = is_satisfied(instance, profile, k);
      satisfied[k] = sat;
      const double p = instance.power_level(profile[k].power_index);
      utilities[k] = utility_value(p, sat, instance.p_max(), instance.beta());
      total_power += p;
    }
    visit(index, profile, utilities, satisfied, total_power);
  }
}

// others_index strips player k's digit out of the joint index.
long long others_index(long long index, int k, int num_players, int action_count) {
  long long high = index;
  for (int i = num_players - 1; i >= k; --i) high /= action_count;
  long long low = index;
  long long mod = 1;
  for (int i = num_players - 1; i > k; --i) mod *= action_count;
  low %= mod;
  return high * mod + low;
}

std::vector<ActionProfile> profiles_from_indices(const NetworkInstance& instance,
                                                 const std::vector<long long>& indices) {
  std::vector<ActionProfile> profiles;
  profiles.reserve(indices.size());
  for (long long index : indices) profiles.push_back(instance.profile_at(index));
  return profiles;
}

// Best-response utility of every player against every reduced profile.
std::vector<std::vector<double>> best_response_tables(const NetworkInstance& instance,
                                                      long long total) {
  const int num_players = instance.num_players();
  const long long reduced = total / instance.action_count();
  std::vector<std::vector<double>> best(
      num_players, std::vector<double>(reduced, -std::numeric_limits<double>::infinity()));
  enumerate_outcomes(instance, total,
                     [&](long long index, const ActionProfile&, const std::vector<double>& utilities,
                         const std::vector<bool>&, double) {
                       for (int k = 0; k < num_players; ++k) {
                         const long long o =
                             others_index(index, k, num_players, instance.action_count());
                         if (utilities[k] > best[k][o]) best[k][o] = utilities[k];
                       }
                     });
  return best;
}

}  // namespace

double utility_value(double power, bool satisfied, double p_max, double beta) {
  return ((p_max - power) / p_max + beta * (satisfied ? 1.0 : 0.0)) / (1.0 + beta);
}

double utility(const NetworkInstance& instance, const ActionProfile& profile, int k) {
  const double p = instance.power_level(profile[k].power_index);
  return utility_value(p, is_satisfied(instance, profile, k), instance.p_max(), instance.beta());
}

GameOutcome evaluate(const NetworkInstance& instance, const ActionProfile& profile) {
  GameOutcome outcome;
  outcome.profile = profile;
  outcome.utilities.resize(instance.num_players());
  outcome.satisfied.resize(instance.num_players());
  for (int k = 0; k < instance.num_players(); ++k) {
    outcome.satisfied[k] = is_satisfied(instance, profile, k);
    const double p = instance.power_level(profile[k].power_index);
    outcome.utilities[k] = utility_value(p, outcome.satisfied[k], instance.p_max(), instance.beta());
    outcome.welfare += outcome.utilities[k];
    outcome.total_power += p;
  }
  return outcome;
}

std::vector<Action> satisfaction_set(const NetworkInstance& instance,
                                     const std::vector<Action>& others, int k) {
  if (static_cast<int>(others.size()) != instance.num_players() - 1) {
    throw InvalidParameter("satisfaction_set: others must hold K-1 actions");
  }
  ActionProfile profile(instance.num_players());
  int j = 0;
  for (int l = 0; l < instance.num_players(); ++l) {
    if (l != k) profile[l] = others[j++];
  }
  std::vector<Action> result;
  for (int a = 0; a < instance.action_count(); ++a) {
    profile[k] = instance.action_at(a);
    if (is_satisfied(instance, profile, k)) result.push_back(profile[k]);
  }
  return result;
}

std::vector<ActionProfile> find_nash(const NetworkInstance& instance, long long cap) {
  const long long total = checked_profile_count(instance, cap, "find_nash");
  const auto best = best_response_tables(instance, total);
  std::vector<long long> hits;
  enumerate_outcomes(instance, total,
                     [&](long long index, const ActionProfile&, const std::vector<double>& utilities,
                         const std::vector<bool>&, double) {
                       for (int k = 0; k < instance.num_players(); ++k) {
                         const long long o = others_index(index, k, instance.num_players(),
                                                          instance.action_count());
                         if (utilities[k] < best[k][o] - kUtilityTol) return;
                       }
                       hits.push_back(index);
                     });
  return profiles_from_indices(instance, hits);
}

std::vector<ActionProfile> find_satisfaction_equilibria(const NetworkInstance& instance,
                                                        long long cap) {
  const long long total = checked_profile_count(instance, cap, "find_satisfaction_equilibria");
  std::vector<long long> hits;
  enumerate_outcomes(instance, total,
                     [&](long long index, const ActionProfile&, const std::vector<double>&,
                         const std::vector<bool>& satisfied, double) {
                       for (bool sat : satisfied) {
                         if (!sat) return;
                       }
                       hits.push_back(index);
                     });
  return profiles_from_indices(instance, hits);
}

std::vector<ActionProfile> find_efficient_se(const NetworkInstance& instance, long long cap) {
  std::vector<ActionProfile> result;
  for (const ActionProfile& profile : find_satisfaction_equilibria(instance, cap)) {
    bool efficient = true;
    for (int k = 0; k < instance.num_players() && efficient; ++k) {
      std::vector<Action> others;
      others.reserve(instance.num_players() - 1);
      for (int l = 0; l < instance.num_players(); ++l) {
        if (l != k) others.push_back(profile[l]);
      }
      double min_power = std::numeric_limits<double>::infinity();
      for (const Action& a : satisfaction_set(instance, others, k)) {
        min_power = std::min(min_power, instance.power_level(a.power_index));
      }
      if (instance.power_level(profile[k].power_index) > min_power + kPowerTol) {
        efficient = false;
      }
    }
    if (efficient) result.push_back(profile);
  }
  return result;
}

GlobalSolution solve_global(const NetworkInstance& instance, long long cap) {
  const long long total = checked_profile_count(instance, cap, "solve_global");
  GlobalSolution best;
  best.max_satisfiable = -1;
  std::vector<long long> hits;
  enumerate_outcomes(
      instance, total,
      [&](long long index, const ActionProfile& profile, const std::vector<double>&,
          const std::vector<bool>& satisfied, double total_power) {
        int count = 0;
        for (int k = 0; k < instance.num_players(); ++k) {
          if (satisfied[k]) {
            ++count;
          } else if (instance.power_level(profile[k].power_index) != 0.0) {
            return;  // unsatisfied players must sit at zero power
          }
        }
        if (count > best.max_satisfiable ||
            (count == best.max_satisfiable && total_power < best.min_total_power - kPowerTol)) {
          best.max_satisfiable = count;
          best.min_total_power = total_power;
          hits.clear();
          hits.push_back(index);
        } else if (count == best.max_satisfiable &&
                   total_power <= best.min_total_power + kPowerTol) {
          hits.push_back(index);
        }
      });
  best.solutions = profiles_from_indices(instance, hits);
  return best;
}

bool check_interdependence(const NetworkInstance& instance, long long cap) {
  const int num_players = instance.num_players();
  if (num_players == 1) return true;
  const double total = instance.profile_space_size();
  double work = 0.0;
  for (int mask = 1; mask < (1 << num_players) - 1; ++mask) {
    double deviations = 1.0;
    for (int k = 0; k < num_players; ++k) {
      if (mask & (1 << k)) deviations *= instance.action_count();
    }
    work += total * deviations;
  }
  if (work > static_cast<double>(cap)) {
    throw InstanceTooLarge("check_interdependence: subset scan of " + std::to_string(work) +
                           " evaluations exceeds cap " + std::to_string(cap));
  }

  const long long total_ll = static_cast<long long>(total);
  std::vector<int> inside, outside;
  for (int mask = 1; mask < (1 << num_players) - 1; ++mask) {
    inside.clear();
    outside.clear();
    for (int k = 0; k < num_players; ++k) {
      if (mask & (1 << k)) {
        inside.push_back(k);
      } else {
        outside.push_back(k);
      }
    }
    long long subset_space = 1;
    for (std::size_t i = 0; i < inside.size(); ++i) subset_space *= instance.action_count();

    for (long long index = 0; index < total_ll; ++index) {
      ActionProfile profile = instance.profile_at(index);
      std::vector<double> base;
      base.reserve(outside.size());
      for (int i : outside) base.push_back(utility(instance, profile, i));

      bool affected = false;
      ActionProfile deviated = profile;
      for (long long d = 0; d < subset_space && !affected; ++d) {
        long long rest = d;
        bool same = true;
        for (std::size_t j = 0; j < inside.size(); ++j) {
          const int a = static_cast<int>(rest % instance.action_count());
          rest /= instance.action_count();
          deviated[inside[j]] = instance.action_at(a);
          same = same && (deviated[inside[j]] == profile[inside[j]]);
        }
        if (same) continue;
        for (std::size_t i = 0; i < outside.size(); ++i) {
          if (std::abs(utility(instance, deviated, outside[i]) - base[i]) > kUtilityTol) {
            affected = true;
            break;
          }
        }
      }
      if (!affected) return false;
    }
  }
  return true;
}

EquilibriumReport equilibrium_report(const NetworkInstance& instance, long long cap) {
  EquilibriumReport report;
  report.nash_profiles = find_nash(instance, cap);
  report.satisfaction_profiles = find_satisfaction_equilibria(instance, cap);
  report.efficient_satisfaction_profiles = find_efficient_se(instance, cap);
  GlobalSolution global = solve_global(instance, cap);
  report.opt_solutions = std::move(global.solutions);
  report.max_satisfiable = global.max_satisfiable;
  report.optimal_total_power = global.min_total_power;
  return report;
}

namespace {

nlohmann::json profiles_to_json(const std::vector<ActionProfile>& profiles,
                                const NetworkInstance& instance) {
  nlohmann::json list = nlohmann::json::array();
  for (const ActionProfile& profile : profiles) {
    const GameOutcome outcome = evaluate(instance, profile);
    nlohmann::json actions = nlohmann::json::array();
    for (const Action& a : profile) actions.push_back({a.channel, a.power_index});
    list.push_back({{"profile", actions},
                    {"welfare", outcome.welfare},
                    {"total_power", outcome.total_power}});
  }
  return list;
}

}  // namespace

std::string report_to_json(const EquilibriumReport& report, const NetworkInstance& instance) {
  nlohmann::json j;
  j["max_satisfiable"] = report.max_satisfiable;
  j["optimal_total_power"] = report.optimal_total_power;
  j["nash"] = profiles_to_json(report.nash_profiles, instance);
  j["satisfaction"] = profiles_to_json(report.satisfaction_profiles, instance);
  j["efficient_satisfaction"] =
      profiles_to_json(report.efficient_satisfaction_profiles, instance);
  j["global_optima"] = profiles_to_json(report.opt_solutions, instance);
  return j.dump(2);
}

}  // namespace tepc
