// Command-line front end: instance generation, equilibrium oracles, chain
// analysis, Monte-Carlo simulation and joining the two result sets.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tepc/channel.hpp"
#include "tepc/dtmc.hpp"
#include "tepc/errors.hpp"
#include "tepc/game.hpp"
#include "tepc/sim.hpp"

namespace {

using namespace tepc;

struct InstanceArgs {
  int K = 2, C = 3, Q = 6;
  double p_max = kDefaultPMax, noise = kDefaultNoise, gamma = kDefaultSinrThreshold;
  double beta = 0.0;
  std::string channel = "simplified";
  std::uint64_t seed = 1;
};

NetworkInstance build_instance(const InstanceArgs& args) {
  const double beta = args.beta > 0.0 ? args.beta : args.K + 1.0;
  if (args.channel == "rayleigh") {
    return sample_rayleigh_instance(args.K, args.C, args.Q, args.p_max, args.noise, args.gamma,
                                    beta, args.seed);
  }
  if (args.channel == "simplified") {
    return make_simplified_instance(args.K, args.C, args.Q, args.p_max, args.noise, args.gamma,
                                    beta);
  }
  throw InvalidParameter("unknown channel '" + args.channel + "'");
}

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--K", args.K, "number of transmitter-receiver pairs");
  cmd->add_option("--C", args.C, "number of sub-bands");
  cmd->add_option("--Q", args.Q, "number of power levels");
  cmd->add_option("--pmax", args.p_max, "maximum transmit power (linear)");
  cmd->add_option("--noise", args.noise, "noise power (linear)");
  cmd->add_option("--gamma", args.gamma, "SINR threshold (linear)");
  cmd->add_option("--beta", args.beta, "utility weight (default K+1)");
  cmd->add_option("--channel", args.channel, "simplified or rayleigh");
  cmd->add_option("--seed", args.seed, "gain seed for rayleigh channels");
}

std::ostream& open_or_stdout(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  return file;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  return load_experiment_config(in);
}

int run_instance(const InstanceArgs& args, const std::string& out_path,
                 const std::string& gains_path) {
  const NetworkInstance instance = build_instance(args);
  std::ofstream file;
  save_instance_config(instance, open_or_stdout(out_path, file));
  if (!gains_path.empty()) {
    std::ofstream gains(gains_path);
    if (!gains) throw std::runtime_error("cannot open gains file " + gains_path);
    write_gains_csv(instance, gains);
  }
  return 0;
}

int run_oracle(const std::string& config_path, long long cap, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config file " + config_path);
  const NetworkInstance instance = load_instance_config(in);
  const EquilibriumReport report = equilibrium_report(instance, cap);
  std::ofstream file;
  open_or_stdout(out_path, file) << report_to_json(report, instance) << "\n";
  return 0;
}

int run_analyze(const std::vector<int>& Ks, const std::vector<int>& Cs,
                const std::vector<int>& Qs, const std::vector<double>& epss,
                const std::vector<double>& dus, double gamma, double p_max, double noise,
                const std::string& target_name, const std::string& out_path) {
  const EquilibriumTarget target =
      target_name == "se" ? EquilibriumTarget::kSatisfaction : EquilibriumTarget::kNash;
  std::ofstream file;
  std::ostream& out = open_or_stdout(out_path, file);
  out << "K,C,Q,q_s,eps,du,target,p_eq_d,p_d_eq,t_lower,t_upper,t_exact,occupancy\n";
  out.precision(10);
  for (int K : Ks) {
    for (int C : Cs) {
      for (int Q : Qs) {
        for (double eps : epss) {
          for (double du : dus) {
            DtmcParams params;
            params.num_players = K;
            params.num_channels = C;
            params.num_power_levels = Q;
            params.satisfying_levels = satisfying_level_count(Q, p_max, noise, gamma);
            params.epsilon = eps;
            params.delta_u = du;
            const DtmcModel model = transition_probs(params, target);
            const HittingTimeBounds bounds = bounds_T(params, target);
            const int eq = model.equilibrium_state();
            const int dis = model.discontent_state();
            out << K << ',' << C << ',' << Q << ',' << params.satisfying_levels << ',' << eps
                << ',' << du << ',' << to_string(target) << ','
                << model.transition[eq][dis] << ',' << model.transition[dis][eq] << ','
                << bounds.lower << ',' << bounds.upper << ','
                << hitting_time(model, model.deepest_repair_state()) << ','
                << occupancy(params, target) << "\n";
          }
        }
      }
    }
  }
  return 0;
}

int run_simulate(const std::string& config_path, int trials_override, long long iters_override,
                 std::uint64_t seed_override, bool has_seed, const std::string& out_dir,
                 const std::vector<int>& q_override, const std::vector<double>& eps_override,
                 bool curves, const std::string& trace_path) {
  ExperimentConfig base = load_config_file(config_path);
  if (trials_override > 0) base.trials = trials_override;
  if (iters_override > 0) base.iterations = iters_override;
  if (has_seed) base.seed = seed_override;

  std::vector<ExperimentConfig> configs;
  const std::vector<int> qs = q_override.empty()
                                  ? std::vector<int>{base.num_power_levels}
                                  : q_override;
  const std::vector<double> epss =
      eps_override.empty() ? std::vector<double>{base.epsilon} : eps_override;
  for (int q : qs) {
    for (double eps : epss) {
      ExperimentConfig config = base;
      config.num_power_levels = q;
      config.epsilon = eps;
      configs.push_back(config);
    }
  }

  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw std::runtime_error("cannot open trace file " + trace_path);
    TrialOptions options;
    options.trace = &trace;
    const NetworkInstance instance = instance_from_config(configs.front(), configs.front().seed);
    const EquilibriumOracle oracle =
        build_equilibrium_oracle(instance, configs.front().enumeration_cap);
    TeParams params;
    params.epsilon = configs.front().epsilon;
    params.num_players = configs.front().num_players;
    run_trial(instance, params, configs.front().iterations, configs.front().seed, oracle,
              options);
  }

  const SweepResult result = sweep(configs);
  std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "occupancy.csv");
    write_occupancy_csv(result.occupancy, out);
  }
  {
    std::ofstream out(dir / "passage.csv");
    write_passage_csv(result.passage, out);
  }
  if (curves) {
    std::ofstream out(dir / "curves.csv");
    write_curves_csv(fig5_protocol(configs.front()), out);
  }
  std::cout << "wrote " << (dir / "occupancy.csv").string() << ", "
            << (dir / "passage.csv").string();
  if (curves) std::cout << ", " << (dir / "curves.csv").string();
  std::cout << "\n";
  return 0;
}

// Joins simulate and analyze CSVs on (K, C, Q, eps, target).
int run_compare(const std::string& sim_path, const std::string& analyze_path,
                const std::string& out_path) {
  auto read_csv = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      rows.push_back(std::move(cells));
    }
    return rows;
  };
  auto column_index = [](const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    throw std::runtime_error("missing column " + name);
  };

  const auto sim_rows = read_csv(sim_path);
  const auto analyze_rows = read_csv(analyze_path);
  if (sim_rows.empty() || analyze_rows.empty()) throw std::runtime_error("empty input CSV");

  const auto& sh = sim_rows.front();
  const auto& ah = analyze_rows.front();
  const int s_keys[5] = {column_index(sh, "K"), column_index(sh, "C"), column_index(sh, "Q"),
                         column_index(sh, "eps"), column_index(sh, "target")};
  const int a_keys[5] = {column_index(ah, "K"), column_index(ah, "C"), column_index(ah, "Q"),
                         column_index(ah, "eps"), column_index(ah, "target")};
  const int s_occ = column_index(sh, "sim_occupancy");
  const int a_occ = column_index(ah, "occupancy");

  std::map<std::string, const std::vector<std::string>*> analyze_by_key;
  for (std::size_t r = 1; r < analyze_rows.size(); ++r) {
    std::string key;
    for (int i : a_keys) key += analyze_rows[r][i] + "|";
    analyze_by_key[key] = &analyze_rows[r];
  }

  std::ofstream file;
  std::ostream& out = open_or_stdout(out_path, file);
  out << "K,C,Q,eps,target,sim_occupancy,dtmc_occupancy,abs_diff\n";
  for (std::size_t r = 1; r < sim_rows.size(); ++r) {
    std::string key;
    for (int i : s_keys) key += sim_rows[r][i] + "|";
    const auto it = analyze_by_key.find(key);
    if (it == analyze_by_key.end()) continue;
    const double sim_occ = std::stod(sim_rows[r][s_occ]);
    const double dtmc_occ = std::stod((*it->second)[a_occ]);
    for (int i = 0; i < 5; ++i) out << sim_rows[r][s_keys[i]] << ',';
    out << sim_occ << ',' << dtmc_occ << ',' << std::abs(sim_occ - dtmc_occ) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trial-and-error power allocation toolkit"};
  app.require_subcommand(1);

  InstanceArgs instance_args;
  std::string instance_out, gains_out;
  CLI::App* instance_cmd = app.add_subcommand("instance", "generate an instance config");
  add_instance_options(instance_cmd, instance_args);
  instance_cmd->add_option("--out", instance_out, "config output path (default stdout)");
  instance_cmd->add_option("--gains-csv", gains_out, "optional gain tensor CSV dump");

  std::string oracle_config, oracle_out;
  long long oracle_cap = kDefaultEnumerationCap;
  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "exhaustive equilibrium report for an instance");
  oracle_cmd->add_option("--config", oracle_config, "instance config file")->required();
  oracle_cmd->add_option("--cap", oracle_cap, "enumeration cap (profiles)");
  oracle_cmd->add_option("--out", oracle_out, "JSON output path (default stdout)");

  std::vector<int> an_K{3}, an_C{4}, an_Q{6};
  std::vector<double> an_eps{0.02}, an_du{0.8};
  double an_gamma = kDefaultSinrThreshold, an_pmax = kDefaultPMax, an_noise = kDefaultNoise;
  std::string an_target = "ne", an_out;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "chain predictions as CSV rows");
  analyze_cmd->add_option("--K", an_K, "players (repeatable)");
  analyze_cmd->add_option("--C", an_C, "sub-bands (repeatable)");
  analyze_cmd->add_option("--Q", an_Q, "power levels (repeatable)");
  analyze_cmd->add_option("--eps", an_eps, "experimentation rates (repeatable)");
  analyze_cmd->add_option("--du", an_du, "assumed repair improvement (repeatable)");
  analyze_cmd->add_option("--gamma", an_gamma, "SINR threshold");
  analyze_cmd->add_option("--pmax", an_pmax, "maximum power");
  analyze_cmd->add_option("--noise", an_noise, "noise power");
  analyze_cmd->add_option("--target", an_target, "ne or se");
  analyze_cmd->add_option("--out", an_out, "CSV output path (default stdout)");

  std::string sim_config, sim_out_dir, sim_trace;
  int sim_trials = 0;
  long long sim_iters = 0;
  std::uint64_t sim_seed = 0;
  std::vector<int> sim_Q;
  std::vector<double> sim_eps;
  bool sim_curves = false;
  CLI::App* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo trial runner");
  simulate_cmd->add_option("--config", sim_config, "experiment config file")->required();
  simulate_cmd->add_option("--trials", sim_trials, "override trial count");
  simulate_cmd->add_option("--iters", sim_iters, "override iterations per trial");
  CLI::Option* seed_opt = simulate_cmd->add_option("--seed", sim_seed, "override master seed");
  simulate_cmd->add_option("--out", sim_out_dir, "output directory (default .)");
  simulate_cmd->add_option("--Q", sim_Q, "sweep power level counts (repeatable)");
  simulate_cmd->add_option("--eps", sim_eps, "sweep experimentation rates (repeatable)");
  simulate_cmd->add_flag("--curves", sim_curves, "also write per-iteration curves.csv");
  simulate_cmd->add_option("--trace", sim_trace, "per-iteration state trace CSV (first config)");

  std::string cmp_sim, cmp_analyze, cmp_out;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "join simulate and analyze CSVs on param keys");
  compare_cmd->add_option("--sim", cmp_sim, "occupancy.csv from simulate")->required();
  compare_cmd->add_option("--analyze", cmp_analyze, "CSV from analyze")->required();
  compare_cmd->add_option("--out", cmp_out, "joined CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (instance_cmd->parsed()) return run_instance(instance_args, instance_out, gains_out);
    if (oracle_cmd->parsed()) return run_oracle(oracle_config, oracle_cap, oracle_out);
    if (analyze_cmd->parsed()) {
      return run_analyze(an_K, an_C, an_Q, an_eps, an_du, an_gamma, an_pmax, an_noise,
                         an_target, an_out);
    }
    if (simulate_cmd->parsed()) {
      return run_simulate(sim_config, sim_trials, sim_iters, sim_seed, seed_opt->count() > 0,
                          sim_out_dir, sim_Q, sim_eps, sim_curves, sim_trace);
    }
    if (compare_cmd->parsed()) return run_compare(cmp_sim, cmp_analyze, cmp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
