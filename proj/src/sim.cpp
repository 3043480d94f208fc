#include "tepc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>

#include "tepc/errors.hpp"

namespace tepc {

// defined in channel.cpp
std::map<std::string, std::string> parse_flat_config(std::istream& in);

void ExperimentConfig::validate() const {
  if (num_players < 1) throw InvalidParameter("ExperimentConfig: num_players must be >= 1");
  if (num_channels < 1) throw InvalidParameter("ExperimentConfig: num_channels must be >= 1");
  if (num_power_levels < 2) throw InvalidParameter("ExperimentConfig: num_power_levels must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("ExperimentConfig: epsilon must lie in (0, 1)");
  }
  if (iterations < 1) throw InvalidParameter("ExperimentConfig: iterations must be >= 1");
  if (trials < 1) throw InvalidParameter("ExperimentConfig: trials must be >= 1");
}

ExperimentConfig load_experiment_config(std::istream& in) {
  auto values = parse_flat_config(in);
  ExperimentConfig config;
  auto take_int = [&](const std::string& key, auto& field) {
    if (values.count(key)) field = std::stoll(values[key]);
  };
  auto take_double = [&](const std::string& key, double& field) {
    if (values.count(key)) field = std::stod(values[key]);
  };
  long long k = config.num_players, c = config.num_channels, q = config.num_power_levels;
  long long trials = config.trials, seed = config.seed;
  take_int("K", k);
  take_int("C", c);
  take_int("Q", q);
  config.num_players = static_cast<int>(k);
  config.num_channels = static_cast<int>(c);
  config.num_power_levels = static_cast<int>(q);
  take_double("p_max", config.p_max);
  take_double("noise", config.noise);
  take_double("gamma", config.gamma);
  take_double("beta", config.beta);
  take_double("eps", config.epsilon);
  take_int("iters", config.iterations);
  take_int("trials", trials);
  config.trials = static_cast<int>(trials);
  take_int("seed", seed);
  config.seed = static_cast<std::uint64_t>(seed);
  if (values.count("channel")) {
    const std::string& channel = values["channel"];
    if (channel == "simplified") {
      config.channel = ChannelKind::kSimplified;
    } else if (channel == "rayleigh") {
      config.channel = ChannelKind::kRayleigh;
    } else {
      throw InvalidParameter("experiment config: unknown channel '" + channel + "'");
    }
  }
  if (values.count("target")) {
    const std::string& target = values["target"];
    if (target == "ne") {
      config.target = EquilibriumTarget::kNash;
    } else if (target == "se") {
      config.target = EquilibriumTarget::kSatisfaction;
    } else {
      throw InvalidParameter("experiment config: unknown target '" + target + "'");
    }
  }
  config.validate();
  return config;
}

NetworkInstance instance_from_config(const ExperimentConfig& config, std::uint64_t trial_seed) {
  if (config.channel == ChannelKind::kRayleigh) {
    return sample_rayleigh_instance(config.num_players, config.num_channels,
                                    config.num_power_levels, config.p_max, config.noise,
                                    config.gamma, config.resolved_beta(), trial_seed);
  }
  return make_simplified_instance(config.num_players, config.num_channels,
                                  config.num_power_levels, config.p_max, config.noise,
                                  config.gamma, config.resolved_beta());
}

EquilibriumOracle build_equilibrium_oracle(const NetworkInstance& instance, long long cap) {
  EquilibriumOracle oracle;
  const double space = instance.profile_space_size();
  if (space > static_cast<double>(cap)) {
    std::cerr << "warning: joint action space (" << space << " profiles) exceeds the "
              << "enumeration cap; at-Nash flags degrade to all-satisfied\n";
    return oracle;
  }
  oracle.profile_count = static_cast<long long>(space);

  const GlobalSolution global = solve_global(instance, cap);
  oracle.max_satisfiable = global.max_satisfiable;
  oracle.optimal_total_power = global.min_total_power;
  oracle.optimum_known = true;

  oracle.nash_mask.assign(oracle.profile_count, false);
  for (const ActionProfile& profile : find_nash(instance, cap)) {
    const long long key = instance.profile_index(profile);
    oracle.nash_mask[key] = true;
    oracle.nash_keys.push_back(key);
    const double welfare = evaluate(instance, profile).welfare;
    oracle.nash_welfare.push_back(welfare);
    oracle.max_nash_welfare = std::max(oracle.max_nash_welfare, welfare);
  }
  oracle.exact_nash = true;
  return oracle;
}

TrialRecord run_trial(const NetworkInstance& instance, const TeParams& params,
                      long long iterations, std::uint64_t seed,
                      const EquilibriumOracle& oracle, const TrialOptions& options) {
  if (iterations < 1) throw InvalidParameter("run_trial: iterations must be >= 1");
  params.validate();
  const int num_players = instance.num_players();
  const int C = instance.num_channels();
  const int Q = instance.num_power_levels();

  std::mt19937_64 rng(seed);
  std::vector<TeState> states(num_players);
  {
    std::uniform_int_distribution<int> pick(0, instance.action_count() - 1);
    for (TeState& state : states) {
      state.mood = Mood::kDiscontent;
      state.benchmark_action = instance.action_at(pick(rng));
      state.benchmark_utility = 0.0;
      state.last_action = state.benchmark_action;
    }
  }

  TrialRecord record;
  record.iterations = iterations;
  record.nash_visit_counts.assign(oracle.nash_keys.size(), 0);
  if (options.keep_iteration_stream) {
    record.profile_keys.reserve(iterations);
    record.total_power.reserve(iterations);
    record.satisfied_count.reserve(iterations);
    record.at_nash.reserve(iterations);
    record.at_satisfaction.reserve(iterations);
  }
  if (options.keep_curves) {
    record.frac_satisfied_curve.reserve(iterations);
    record.power_ratio_curve.reserve(iterations);
  }
  if (options.trace) {
    *options.trace << "iteration,player,mood,channel,power_index,utility,benchmark_utility\n";
  }

  ActionProfile profile(num_players);
  std::vector<double> utilities(num_players);
  long long nash_count = 0;
  long long satisfaction_count = 0;
  long long nash_window_end = -1;

  for (long long n = 0; n < iterations; ++n) {
    for (int k = 0; k < num_players; ++k) {
      const SelectedAction chosen = select_action(states[k], C, Q, params, rng);
      profile[k] = chosen.action;
      states[k].last_action = chosen.action;
      states[k].experimented_last_step = chosen.experimented;
    }

    int satisfied = 0;
    double power_sum = 0.0;
    for (int k = 0; k < num_players; ++k) {
      const bool sat = is_satisfied(instance, profile, k);
      satisfied += sat ? 1 : 0;
      const double p = instance.power_level(profile[k].power_index);
      power_sum += p;
      utilities[k] = utility_value(p, sat, instance.p_max(), instance.beta());
    }
    const bool all_satisfied = satisfied == num_players;

    bool at_nash;
    if (oracle.exact_nash) {
      const long long key = instance.profile_index(profile);
      at_nash = oracle.nash_mask[key];
      if (at_nash) {
        if (record.first_nash_iteration < 0) {
          record.first_nash_iteration = n;
          if (options.nash_visit_window >= 0) {
            nash_window_end = n + options.nash_visit_window;
          }
        }
        if (nash_window_end < 0 || n < nash_window_end) {
          const auto it =
              std::lower_bound(oracle.nash_keys.begin(), oracle.nash_keys.end(), key);
          record.nash_visit_counts[it - oracle.nash_keys.begin()] += 1;
        }
      }
    } else {
      at_nash = all_satisfied;
      if (at_nash && record.first_nash_iteration < 0) record.first_nash_iteration = n;
    }
    nash_count += at_nash ? 1 : 0;
    satisfaction_count += all_satisfied ? 1 : 0;
    if (all_satisfied && record.first_satisfaction_iteration < 0) {
      record.first_satisfaction_iteration = n;
    }
    if (all_satisfied && oracle.optimum_known && record.first_optimal_iteration < 0 &&
        std::abs(power_sum - oracle.optimal_total_power) < 1e-9) {
      record.first_optimal_iteration = n;
    }

    if (options.keep_iteration_stream) {
      record.profile_keys.push_back(instance.profile_index(profile));
      record.total_power.push_back(power_sum);
      record.satisfied_count.push_back(satisfied);
      record.at_nash.push_back(at_nash);
      record.at_satisfaction.push_back(all_satisfied);
    }
    if (options.keep_curves) {
      record.frac_satisfied_curve.push_back(static_cast<double>(satisfied) / num_players);
      const bool ratio_defined = oracle.optimum_known && oracle.optimal_total_power > 0.0;
      record.power_ratio_curve.push_back(
          ratio_defined ? power_sum / oracle.optimal_total_power
                        : std::numeric_limits<double>::quiet_NaN());
    }
    if (options.trace) {
      for (int k = 0; k < num_players; ++k) {
        *options.trace << n << ',' << k << ',' << to_string(states[k].mood) << ','
                       << profile[k].channel << ',' << profile[k].power_index << ','
                       << utilities[k] << ',' << states[k].benchmark_utility << "\n";
      }
    }

    for (int k = 0; k < num_players; ++k) {
      states[k] = update(states[k], utilities[k], params, rng);
    }
  }

  record.fraction_at_nash = static_cast<double>(nash_count) / iterations;
  record.fraction_at_satisfaction = static_cast<double>(satisfaction_count) / iterations;
  return record;
}

namespace {

TeParams te_params_for(const ExperimentConfig& config) {
  TeParams params;
  params.epsilon = config.epsilon;
  params.num_players = config.num_players;
  return params;
}

struct PooledRun {
  double occupancy = 0.0;
  double mean_first_passage = std::numeric_limits<double>::quiet_NaN();
  int passage_hits = 0;
};

PooledRun pooled_run(const ExperimentConfig& config) {
  config.validate();
  const TeParams params = te_params_for(config);
  long long at_target = 0;
  long long total = 0;
  double passage_sum = 0.0;
  int passage_hits = 0;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(t);
    const NetworkInstance instance = instance_from_config(config, trial_seed);
    const EquilibriumOracle oracle = build_equilibrium_oracle(instance, config.enumeration_cap);
    const TrialRecord record = run_trial(instance, params, config.iterations, trial_seed, oracle);
    const bool nash = config.target == EquilibriumTarget::kNash;
    const double fraction = nash ? record.fraction_at_nash : record.fraction_at_satisfaction;
    at_target += static_cast<long long>(fraction * config.iterations + 0.5);
    total += config.iterations;
    const long long first =
        nash ? record.first_nash_iteration : record.first_satisfaction_iteration;
    if (first >= 0) {
      passage_sum += static_cast<double>(first);
      ++passage_hits;
    }
  }
  PooledRun result;
  result.occupancy = static_cast<double>(at_target) / total;
  if (passage_hits > 0) result.mean_first_passage = passage_sum / passage_hits;
  result.passage_hits = passage_hits;
  return result;
}

DtmcParams dtmc_params_for(const ExperimentConfig& config) {
  DtmcParams params;
  params.num_players = config.num_players;
  params.num_channels = config.num_channels;
  params.num_power_levels = config.num_power_levels;
  params.satisfying_levels = satisfying_level_count(config.num_power_levels, config.p_max,
                                                    config.noise, config.gamma);
  params.epsilon = config.epsilon;
  return params;
}

}  // namespace

double estimate_occupancy(const ExperimentConfig& config) {
  return pooled_run(config).occupancy;
}

SweepResult sweep(const std::vector<ExperimentConfig>& configs) {
  SweepResult result;
  for (const ExperimentConfig& config : configs) {
    const PooledRun run = pooled_run(config);

    OccupancyRow occ;
    occ.num_players = config.num_players;
    occ.num_channels = config.num_channels;
    occ.num_power_levels = config.num_power_levels;
    occ.epsilon = config.epsilon;
    occ.channel = to_string(config.channel);
    occ.target = to_string(config.target);
    occ.sim_occupancy = run.occupancy;

    PassageRow passage;
    passage.num_players = config.num_players;
    passage.num_channels = config.num_channels;
    passage.num_power_levels = config.num_power_levels;
    passage.epsilon = config.epsilon;
    passage.target = to_string(config.target);
    passage.sim_mean = run.mean_first_passage;

    try {
      const DtmcParams params = dtmc_params_for(config);
      occ.dtmc_occupancy = occupancy(params, config.target);
      const DtmcModel model = transition_probs(params, config.target);
      passage.dtmc_exact = hitting_time(model, model.deepest_repair_state());
      const HittingTimeBounds bounds = bounds_T(params, config.target);
      passage.bound_lo = bounds.lower;
      passage.bound_hi = bounds.upper;
    } catch (const InvalidParameter&) {
      // chain predictions undefined (e.g. C <= K); report NaN columns
      occ.dtmc_occupancy = std::numeric_limits<double>::quiet_NaN();
      passage.dtmc_exact = std::numeric_limits<double>::quiet_NaN();
      passage.bound_lo = std::numeric_limits<double>::quiet_NaN();
      passage.bound_hi = std::numeric_limits<double>::quiet_NaN();
    }

    result.occupancy.push_back(std::move(occ));
    result.passage.push_back(std::move(passage));
  }
  return result;
}

Fig5Curves fig5_protocol(const ExperimentConfig& config) {
  config.validate();
  const TeParams params = te_params_for(config);
  Fig5Curves curves;
  curves.mean_frac_satisfied.assign(config.iterations, 0.0);
  curves.mean_power_ratio.assign(config.iterations, 0.0);
  TrialOptions options;
  options.keep_curves = true;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed = config.seed + static_cast<std::uint64_t>(t);
    const NetworkInstance instance = instance_from_config(config, trial_seed);
    const EquilibriumOracle oracle = build_equilibrium_oracle(instance, config.enumeration_cap);
    const TrialRecord record =
        run_trial(instance, params, config.iterations, trial_seed, oracle, options);
    for (long long n = 0; n < config.iterations; ++n) {
      curves.mean_frac_satisfied[n] += record.frac_satisfied_curve[n];
      curves.mean_power_ratio[n] += record.power_ratio_curve[n];
    }
  }
  for (long long n = 0; n < config.iterations; ++n) {
    curves.mean_frac_satisfied[n] /= config.trials;
    curves.mean_power_ratio[n] /= config.trials;
  }
  return curves;
}

void write_occupancy_csv(const std::vector<OccupancyRow>& rows, std::ostream& out) {
  out << "K,C,Q,eps,channel,target,sim_occupancy,dtmc_occupancy\n";
  out.precision(10);
  for (const OccupancyRow& row : rows) {
    out << row.num_players << ',' << row.num_channels << ',' << row.num_power_levels << ','
        << row.epsilon << ',' << row.channel << ',' << row.target << ',' << row.sim_occupancy
        << ',' << row.dtmc_occupancy << "\n";
  }
}

void write_passage_csv(const std::vector<PassageRow>& rows, std::ostream& out) {
  out << "K,C,Q,eps,target,sim_mean,dtmc_exact,bound_lo,bound_hi\n";
  out.precision(10);
  for (const PassageRow& row : rows) {
    out << row.num_players << ',' << row.num_channels << ',' << row.num_power_levels << ','
        << row.epsilon << ',' << row.target << ',' << row.sim_mean << ',' << row.dtmc_exact
        << ',' << row.bound_lo << ',' << row.bound_hi << "\n";
  }
}

void write_curves_csv(const Fig5Curves& curves, std::ostream& out) {
  out << "iteration,mean_frac_satisfied,mean_power_ratio\n";
  out.precision(10);
  for (std::size_t n = 0; n < curves.mean_frac_satisfied.size(); ++n) {
    out << n << ',' << curves.mean_frac_satisfied[n] << ',' << curves.mean_power_ratio[n]
        << "\n";
  }
}

}  // namespace tepc
