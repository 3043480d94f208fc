#include "tepc/channel.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "tepc/errors.hpp"

namespace tepc {

std::vector<double> power_grid(int num_levels, double p_max) {
  if (num_levels < 2) throw InvalidParameter("power_grid: need at least 2 levels");
  if (!(p_max > 0.0)) throw InvalidParameter("power_grid: p_max must be positive");
  std::vector<double> grid(num_levels);
  for (int q = 0; q < num_levels; ++q) {
    grid[q] = static_cast<double>(q) * p_max / (num_levels - 1);
  }
  grid.front() = 0.0;
  grid.back() = p_max;
  return grid;
}

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::kSimplified: return "simplified";
    case ChannelKind::kRayleigh: return "rayleigh";
    case ChannelKind::kCustom: return "custom";
  }
  return "custom";
}

NetworkInstance::NetworkInstance(int num_players, int num_channels, int num_power_levels,
                                 double p_max, double noise_power, double sinr_threshold,
                                 double beta, std::vector<double> gains,
                                 ChannelKind kind, std::uint64_t seed)
    : num_players_(num_players),
      num_channels_(num_channels),
      num_power_levels_(num_power_levels),
      p_max_(p_max),
      noise_power_(noise_power),
      sinr_threshold_(sinr_threshold),
      beta_(beta),
      grid_(power_grid(num_power_levels, p_max)),
      gains_(std::move(gains)),
      kind_(kind),
      seed_(seed) {
  if (num_players_ < 1) throw InvalidParameter("NetworkInstance: num_players must be >= 1");
  if (num_channels_ < 1) throw InvalidParameter("NetworkInstance: num_channels must be >= 1");
  if (!(noise_power_ > 0.0)) throw InvalidParameter("NetworkInstance: noise_power must be positive");
  if (!(sinr_threshold_ > 0.0)) throw InvalidParameter("NetworkInstance: sinr_threshold must be positive");
  if (!(beta_ > 0.0)) throw InvalidParameter("NetworkInstance: beta must be positive");
  const std::size_t expected =
      static_cast<std::size_t>(num_players_) * num_players_ * num_channels_;
  if (gains_.size() != expected) {
    throw InvalidParameter("NetworkInstance: gains tensor must have shape K x K x C");
  }
  for (double g : gains_) {
    if (!(g >= 0.0)) throw InvalidParameter("NetworkInstance: gains must be nonnegative");
  }
  for (int k = 0; k < num_players_; ++k) {
    for (int b = 0; b < num_channels_; ++b) {
      if (!(gain(k, k, b) > 0.0)) {
        throw InvalidParameter("NetworkInstance: direct gains must be positive");
      }
    }
  }
}

double NetworkInstance::profile_space_size() const {
  return std::pow(static_cast<double>(action_count()), num_players_);
}

long long NetworkInstance::profile_index(const ActionProfile& profile) const {
  long long index = 0;
  for (int k = 0; k < num_players_; ++k) {
    index = index * action_count() + action_index(profile[k]);
  }
  return index;
}

ActionProfile NetworkInstance::profile_at(long long index) const {
  ActionProfile profile(num_players_);
  for (int k = num_players_ - 1; k >= 0; --k) {
    profile[k] = action_at(static_cast<int>(index % action_count()));
    index /= action_count();
  }
  return profile;
}

double sinr(const NetworkInstance& instance, const ActionProfile& profile, int k) {
  const Action& own = profile[k];
  const double p_own = instance.power_level(own.power_index);
  if (p_own == 0.0) return 0.0;
  double denom = instance.noise_power();
  for (int l = 0; l < instance.num_players(); ++l) {
    if (l == k) continue;
    const Action& other = profile[l];
    if (other.channel == own.channel) {
      denom += instance.power_level(other.power_index) * instance.gain(k, l, other.channel);
    }
  }
  return p_own * instance.gain(k, k, own.channel) / denom;
}

bool is_satisfied(const NetworkInstance& instance, const ActionProfile& profile, int k) {
  return sinr(instance, profile, k) >= instance.sinr_threshold();
}

NetworkInstance make_simplified_instance(int num_players, int num_channels,
                                         int num_power_levels, double p_max,
                                         double noise_power, double sinr_threshold,
                                         double beta) {
  if (num_players < 1) throw InvalidParameter("make_simplified_instance: num_players must be >= 1");
  if (num_channels < 1) throw InvalidParameter("make_simplified_instance: num_channels must be >= 1");
  std::vector<double> gains(
      static_cast<std::size_t>(num_players) * num_players * num_channels);
  std::size_t i = 0;
  for (int rx = 0; rx < num_players; ++rx) {
    for (int tx = 0; tx < num_players; ++tx) {
      for (int b = 0; b < num_channels; ++b) {
        gains[i++] = (rx == tx) ? 1.0 : 0.5;
      }
    }
  }
  return NetworkInstance(num_players, num_channels, num_power_levels, p_max, noise_power,
                         sinr_threshold, beta, std::move(gains), ChannelKind::kSimplified);
}

NetworkInstance sample_rayleigh_instance(int num_players, int num_channels,
                                         int num_power_levels, double p_max,
                                         double noise_power, double sinr_threshold,
                                         double beta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> unit_mean(1.0);
  std::vector<double> gains(
      static_cast<std::size_t>(num_players) * num_players * num_channels);
  for (double& g : gains) g = unit_mean(rng);
  return NetworkInstance(num_players, num_channels, num_power_levels, p_max, noise_power,
                         sinr_threshold, beta, std::move(gains), ChannelKind::kRayleigh, seed);
}

void save_instance_config(const NetworkInstance& instance, std::ostream& out) {
  if (instance.channel_kind() == ChannelKind::kCustom) {
    throw InvalidParameter("save_instance_config: custom gains cannot be expressed as a config");
  }
  out << "K = " << instance.num_players() << "\n";
  out << "C = " << instance.num_channels() << "\n";
  out << "Q = " << instance.num_power_levels() << "\n";
  out.precision(17);
  out << "p_max = " << instance.p_max() << "\n";
  out << "noise = " << instance.noise_power() << "\n";
  out << "gamma = " << instance.sinr_threshold() << "\n";
  out << "beta = " << instance.beta() << "\n";
  out << "channel = " << to_string(instance.channel_kind()) << "\n";
  out << "seed = " << instance.seed() << "\n";
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::map<std::string, std::string> parse_flat_config(std::istream& in);

// Shared by instance and experiment configs: `key = value` lines, blank lines
// and '#' comments ignored.
std::map<std::string, std::string> parse_flat_config(std::istream& in) {
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": empty key or value");
    }
    values[key] = value;
  }
  return values;
}

NetworkInstance load_instance_config(std::istream& in) {
  auto values = parse_flat_config(in);
  auto take = [&](const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) throw InvalidParameter("instance config: missing key '" + key + "'");
    return it->second;
  };
  const int num_players = std::stoi(take("K"));
  const int num_channels = std::stoi(take("C"));
  const int num_power_levels = std::stoi(take("Q"));
  const double p_max = values.count("p_max") ? std::stod(values["p_max"]) : kDefaultPMax;
  const double noise = values.count("noise") ? std::stod(values["noise"]) : kDefaultNoise;
  const double gamma = values.count("gamma") ? std::stod(values["gamma"]) : kDefaultSinrThreshold;
  const double beta = values.count("beta") ? std::stod(values["beta"]) : num_players + 1.0;
  const std::string channel = values.count("channel") ? values["channel"] : "simplified";
  const std::uint64_t seed = values.count("seed") ? std::stoull(values["seed"]) : 1;
  if (channel == "simplified") {
    return make_simplified_instance(num_players, num_channels, num_power_levels, p_max, noise,
                                    gamma, beta);
  }
  if (channel == "rayleigh") {
    return sample_rayleigh_instance(num_players, num_channels, num_power_levels, p_max, noise,
                                    gamma, beta, seed);
  }
  throw InvalidParameter("instance config: unknown channel '" + channel + "'");
}

void write_gains_csv(const NetworkInstance& instance, std::ostream& out) {
  out << "rx,tx,channel,gain\n";
  out.precision(17);
  for (int rx = 0; rx < instance.num_players(); ++rx) {
    for (int tx = 0; tx < instance.num_players(); ++tx) {
      for (int b = 0; b < instance.num_channels(); ++b) {
        out << rx << ',' << tx << ',' << b << ',' << instance.gain(rx, tx, b) << "\n";
      }
    }
  }
}

}  // namespace tepc
