#include "tepc/te.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tepc/errors.hpp"

namespace tepc {

const char* to_string(Mood mood) {
  switch (mood) {
    case Mood::kContent: return "C";
    case Mood::kHopeful: return "C+";
    case Mood::kWatchful: return "C-";
    case Mood::kDiscontent: return "D";
  }
  return "?";
}

double g_fn(double delta_u) {
  if (!(delta_u >= 0.0 && delta_u <= 1.0)) {
    throw std::domain_error("g_fn: delta_u must lie in [0, 1]");
  }
  return -0.2 * delta_u + 0.2;
}

double f_fn(double u, int num_players) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("f_fn: u must lie in [0, 1]");
  if (num_players < 1) throw std::domain_error("f_fn: num_players must be >= 1");
  return (-0.2 * u + 0.2) / num_players;
}

double TeParams::experiment_accept_prob(double delta_u) const {
  return std::pow(epsilon, std::max(g(delta_u), exponent_floor));
}

double TeParams::settle_accept_prob(double u) const {
  return std::pow(epsilon, std::max(f(u), exponent_floor));
}

void TeParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("TeParams: epsilon must lie in (0, 1)");
  }
  if (num_players < 1) throw InvalidParameter("TeParams: num_players must be >= 1");
  if (!(exponent_floor > 0.0)) throw InvalidParameter("TeParams: exponent_floor must be positive");
}

SelectedAction select_action(const TeState& state, int num_channels, int num_power_levels,
                             const TeParams& params, std::mt19937_64& rng) {
  const int action_count = num_channels * num_power_levels;
  auto action_at = [num_power_levels](int index) {
    return Action{index / num_power_levels, index % num_power_levels};
  };
  switch (state.mood) {
    case Mood::kContent: {
      std::bernoulli_distribution experiment(params.epsilon);
      if (!experiment(rng)) return {state.benchmark_action, false};
      const int bench =
          state.benchmark_action.channel * num_power_levels + state.benchmark_action.power_index;
      std::uniform_int_distribution<int> pick(0, action_count - 2);
      int index = pick(rng);
      if (index >= bench) ++index;
      return {action_at(index), true};
    }
    case Mood::kHopeful:
    case Mood::kWatchful:
      return {state.benchmark_action, false};
    case Mood::kDiscontent: {
      std::uniform_int_distribution<int> pick(0, action_count - 1);
      return {action_at(pick(rng)), false};
    }
  }
  return {state.benchmark_action, false};
}

TeState update(TeState state, double realized_utility, const TeParams& params,
               std::mt19937_64& rng) {
  if (!(realized_utility >= 0.0 && realized_utility <= 1.0)) {
    throw std::domain_error("update: realized utility must lie in [0, 1]");
  }
  const double u = realized_utility;
  const double bench = state.benchmark_utility;
  switch (state.mood) {
    case Mood::kContent:
      if (state.experimented_last_step) {
        if (u > bench) {
          std::bernoulli_distribution adopt(params.experiment_accept_prob(u - bench));
          if (adopt(rng)) {
            state.benchmark_action = state.last_action;
            state.benchmark_utility = u;
          }
        }
        // losses and ties leave the state untouched
      } else {
        if (u > bench) {
          state.mood = Mood::kHopeful;
        } else if (u < bench) {
          state.mood = Mood::kWatchful;
        }
      }
      break;
    case Mood::kHopeful:
      if (u > bench) {
        state.mood = Mood::kContent;
        state.benchmark_utility = u;
      } else if (u < bench) {
        state.mood = Mood::kWatchful;
      } else {
        state.mood = Mood::kContent;
      }
      break;
    case Mood::kWatchful:
      if (u < bench) {
        state.mood = Mood::kDiscontent;
      } else if (u > bench) {
        state.mood = Mood::kHopeful;
      } else {
        state.mood = Mood::kContent;
      }
      break;
    case Mood::kDiscontent: {
      std::bernoulli_distribution settle(params.settle_accept_prob(u));
      if (settle(rng)) {
        state.mood = Mood::kContent;
        state.benchmark_action = state.last_action;
        state.benchmark_utility = u;
      }
      break;
    }
  }
  return state;
}

}  // namespace tepc
