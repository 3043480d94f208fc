#ifndef TEPC_SIM_HPP
#define TEPC_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tepc/channel.hpp"
#include "tepc/dtmc.hpp"
#include "tepc/game.hpp"
#include "tepc/te.hpp"

namespace tepc {

struct ExperimentConfig {
  int num_players = 2;
  int num_channels = 3;
  int num_power_levels = 6;
  double p_max = kDefaultPMax;
  double noise = kDefaultNoise;
  double gamma = kDefaultSinrThreshold;
  double beta = 0.0;  // 0 means num_players + 1
  ChannelKind channel = ChannelKind::kSimplified;
  std::uint64_t seed = 1;
  double epsilon = 0.02;
  long long iterations = 1'000'000;
  int trials = 1;
  EquilibriumTarget target = EquilibriumTarget::kNash;
  long long enumeration_cap = kDefaultEnumerationCap;
  bool record_curves = false;
  std::string output_dir;

  double resolved_beta() const { return beta > 0.0 ? beta : num_players + 1.0; }
  void validate() const;
};

// Same flat key=value format as instance configs plus the experiment keys
// eps, iters, trials and target.
ExperimentConfig load_experiment_config(std::istream& in);

// Instance for one trial. Simplified channels are identical across trials;
// Rayleigh draws a fresh block-fading realization per trial seed.
NetworkInstance instance_from_config(const ExperimentConfig& config, std::uint64_t trial_seed);

// Oracle data precomputed per instance so per-iteration flags are table
// lookups. When the joint space exceeds the cap the Nash set is dropped and
// the at-Nash flag degrades to all-satisfied (a warning is emitted once).
struct EquilibriumOracle {
  bool exact_nash = false;
  long long profile_count = 0;
  std::vector<bool> nash_mask;          // indexed by joint profile index
  std::vector<long long> nash_keys;     // sorted joint indices
  std::vector<double> nash_welfare;     // aligned with nash_keys
  double max_nash_welfare = 0.0;
  int max_satisfiable = 0;
  double optimal_total_power = 0.0;
  bool optimum_known = false;
};

EquilibriumOracle build_equilibrium_oracle(const NetworkInstance& instance,
                                           long long cap = kDefaultEnumerationCap);

struct TrialOptions {
  bool keep_iteration_stream = false;
  bool keep_curves = false;
  // Stop counting Nash visits this many iterations after the first one
  // (negative: count through the whole trial).
  long long nash_visit_window = -1;
  std::ostream* trace = nullptr;  // per-iteration player state CSV
};

struct TrialRecord {
  long long iterations = 0;
  long long first_nash_iteration = -1;
  long long first_satisfaction_iteration = -1;
  long long first_optimal_iteration = -1;
  double fraction_at_nash = 0.0;
  double fraction_at_satisfaction = 0.0;
  std::vector<long long> nash_visit_counts;  // aligned with oracle nash_keys

  // Per-iteration stream, filled only when requested.
  std::vector<long long> profile_keys;
  std::vector<double> total_power;
  std::vector<int> satisfied_count;
  std::vector<bool> at_nash;
  std::vector<bool> at_satisfaction;

  // Per-iteration curves, filled only when requested. Power ratio is NaN
  // when the optimal power is zero or unknown.
  std::vector<double> frac_satisfied_curve;
  std::vector<double> power_ratio_curve;
};

// One synchronous run: every iteration all players pick an action, observe
// their utility and advance their mood machine. Deterministic in the seed.
TrialRecord run_trial(const NetworkInstance& instance, const TeParams& params,
                      long long iterations, std::uint64_t seed,
                      const EquilibriumOracle& oracle, const TrialOptions& options = {});

// Pooled fraction of iterations at the target equilibrium across all trials.
double estimate_occupancy(const ExperimentConfig& config);

struct OccupancyRow {
  int num_players, num_channels, num_power_levels;
  double epsilon;
  std::string channel;
  std::string target;
  double sim_occupancy = 0.0;
  double dtmc_occupancy = 0.0;
};

struct PassageRow {
  int num_players, num_channels, num_power_levels;
  double epsilon;
  std::string target;
  double sim_mean = 0.0;  // mean first passage over trials that reached it
  double dtmc_exact = 0.0;
  double bound_lo = 0.0;
  double bound_hi = 0.0;
};

struct SweepResult {
  std::vector<OccupancyRow> occupancy;
  std::vector<PassageRow> passage;
};

// One occupancy row and one passage row per config, pairing simulation
// estimates with the chain predictions at matching parameters.
SweepResult sweep(const std::vector<ExperimentConfig>& configs);

struct Fig5Curves {
  std::vector<double> mean_frac_satisfied;
  std::vector<double> mean_power_ratio;
};

// Trial-averaged satisfaction and power-ratio trajectories.
Fig5Curves fig5_protocol(const ExperimentConfig& config);

void write_occupancy_csv(const std::vector<OccupancyRow>& rows, std::ostream& out);
void write_passage_csv(const std::vector<PassageRow>& rows, std::ostream& out);
void write_curves_csv(const Fig5Curves& curves, std::ostream& out);

}  // namespace tepc

#endif
