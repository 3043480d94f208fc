#ifndef TEPC_CHANNEL_HPP
#define TEPC_CHANNEL_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tepc {

// One transmitter's choice: a sub-band and an index into the power grid.
struct Action {
  int channel = 0;
  int power_index = 0;
  friend bool operator==(const Action&, const Action&) = default;
};

// Joint choice of all K players, indexed by player.
using ActionProfile = std::vector<Action>;

// Q uniformly spaced power levels from 0 to p_max inclusive.
std::vector<double> power_grid(int num_levels, double p_max);

enum class ChannelKind { kSimplified, kRayleigh, kCustom };

std::string to_string(ChannelKind kind);

// Experiment defaults for parameters the scenario leaves open. They are
// config-exposed everywhere; these values are calibrated so that a handful
// of power levels clear the SINR threshold on a free channel.
inline constexpr double kDefaultPMax = 10.0;
inline constexpr double kDefaultNoise = 1.0;
inline constexpr double kDefaultSinrThreshold = 6.0;

// Static radio environment: channel power gains, noise, SINR threshold and
// the discrete action grid. Immutable after construction, safe to share
// across concurrent trials.
class NetworkInstance {
 public:
  // gains is a flattened K x K x C tensor: gains[(rx*K + tx)*C + band] is the
  // power gain from transmitter tx to receiver rx on that band.
  NetworkInstance(int num_players, int num_channels, int num_power_levels,
                  double p_max, double noise_power, double sinr_threshold,
                  double beta, std::vector<double> gains,
                  ChannelKind kind = ChannelKind::kCustom, std::uint64_t seed = 0);

  int num_players() const { return num_players_; }
  int num_channels() const { return num_channels_; }
  int num_power_levels() const { return num_power_levels_; }
  double p_max() const { return p_max_; }
  double noise_power() const { return noise_power_; }
  double sinr_threshold() const { return sinr_threshold_; }
  double beta() const { return beta_; }
  ChannelKind channel_kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }

  double gain(int rx, int tx, int band) const {
    return gains_[(static_cast<std::size_t>(rx) * num_players_ + tx) * num_channels_ + band];
  }
  const std::vector<double>& grid() const { return grid_; }
  double power_level(int index) const { return grid_[index]; }

  // Per-player action space C*Q; actions are indexed channel-major.
  int action_count() const { return num_channels_ * num_power_levels_; }
  int action_index(const Action& a) const { return a.channel * num_power_levels_ + a.power_index; }
  Action action_at(int index) const {
    return Action{index / num_power_levels_, index % num_power_levels_};
  }

  // Number of joint profiles (C*Q)^K, as a double so huge spaces do not
  // overflow before they can be compared against an enumeration cap.
  double profile_space_size() const;
  // Joint index with player 0 as the most significant digit. Only valid when
  // profile_space_size() fits in a long long.
  long long profile_index(const ActionProfile& profile) const;
  ActionProfile profile_at(long long index) const;

 private:
  int num_players_;
  int num_channels_;
  int num_power_levels_;
  double p_max_;
  double noise_power_;
  double sinr_threshold_;
  double beta_;
  std::vector<double> grid_;
  std::vector<double> gains_;
  ChannelKind kind_;
  std::uint64_t seed_;
};

// Received SINR of player k under the joint profile: own power times direct
// gain over noise plus co-channel interference. Zero when the player
// transmits at zero power.
double sinr(const NetworkInstance& instance, const ActionProfile& profile, int k);

// Satisfaction uses the non-strict threshold sinr >= gamma throughout.
bool is_satisfied(const NetworkInstance& instance, const ActionProfile& profile, int k);

// Unit direct gains, 1/2 cross gains, identical on every sub-band.
NetworkInstance make_simplified_instance(int num_players, int num_channels,
                                         int num_power_levels, double p_max,
                                         double noise_power, double sinr_threshold,
                                         double beta);

// Every gain drawn i.i.d. exponential with mean 1 (squared magnitude of a
// unit-variance complex circular Gaussian). Block fading: the draw is fixed
// for the whole run and fully determined by the seed.
NetworkInstance sample_rayleigh_instance(int num_players, int num_channels,
                                         int num_power_levels, double p_max,
                                         double noise_power, double sinr_threshold,
                                         double beta, std::uint64_t seed);

// Flat key=value config. Rayleigh gains are not stored; they are regenerated
// from the seed on load. Custom-gain instances cannot round-trip through a
// config and are rejected.
void save_instance_config(const NetworkInstance& instance, std::ostream& out);
NetworkInstance load_instance_config(std::istream& in);

// CSV dump of the gain tensor, columns: rx, tx, channel, gain.
void write_gains_csv(const NetworkInstance& instance, std::ostream& out);

}  // namespace tepc

#endif
