#include "tepc/dtmc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "tepc/errors.hpp"
#include "tepc/te.hpp"

namespace tepc {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_probability(double value, const char* label) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidParameter(std::string("transition_probs: ") + label + " = " +
                           std::to_string(value) + " falls outside [0, 1]");
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

std::string to_string(EquilibriumTarget target) {
  return target == EquilibriumTarget::kNash ? "ne" : "se";
}

void DtmcParams::validate() const {
  if (num_players < 1) throw InvalidParameter("DtmcParams: num_players must be >= 1");
  if (num_channels <= num_players) {
    throw InvalidParameter("DtmcParams: num_channels must exceed num_players");
  }
  if (num_power_levels < 2) throw InvalidParameter("DtmcParams: num_power_levels must be >= 2");
  if (satisfying_levels < 0 || satisfying_levels >= num_power_levels) {
    throw InvalidParameter("DtmcParams: satisfying_levels must lie in [0, Q)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidParameter("DtmcParams: epsilon must lie in (0, 1)");
  }
  if (!(delta_u >= 0.0 && delta_u <= 1.0)) {
    throw InvalidParameter("DtmcParams: delta_u must lie in [0, 1]");
  }
}

int satisfying_level_count(int num_power_levels, double p_max, double noise_power,
                           double sinr_threshold) {
  int count = 0;
  for (double p : power_grid(num_power_levels, p_max)) {
    if (p / noise_power >= sinr_threshold) ++count;
  }
  return count;
}

int q_s(const NetworkInstance& instance) {
  for (int rx = 0; rx < instance.num_players(); ++rx) {
    for (int tx = 0; tx < instance.num_players(); ++tx) {
      for (int b = 0; b < instance.num_channels(); ++b) {
        const double expected = (rx == tx) ? 1.0 : 0.5;
        if (instance.gain(rx, tx, b) != expected) {
          throw ModelMismatch("q_s: instance does not follow the simplified gain pattern");
        }
      }
    }
  }
  return satisfying_level_count(instance.num_power_levels(), instance.p_max(),
                                instance.noise_power(), instance.sinr_threshold());
}

DtmcModel transition_probs(const DtmcParams& params, EquilibriumTarget target) {
  params.validate();
  const int K = params.num_players;
  const int C = params.num_channels;
  const int Q = params.num_power_levels;
  const double eps = params.epsilon;
  const double accept_exponent = 1.0 + g_fn(params.delta_u);
  const double eps_repair = std::pow(eps, accept_exponent);

  DtmcModel model;
  model.target = target;
  model.params = params;
  const int n = K + 2;
  model.transition.assign(n, std::vector<double>(n, 0.0));
  model.state_names.resize(n);
  model.state_names[0] = "Eq";
  for (int j = 1; j <= K; ++j) model.state_names[j] = "R" + std::to_string(j);
  model.state_names[n - 1] = "D";

  const int eq = 0;
  const int dis = n - 1;

  // Equilibrium breaks when two experimenting players collide.
  const double p_eq_d = K * (K - 1) * (K - 1) * eps * eps / (C * C) *
                        ((Q - 1.0) / Q) * ((Q - 1.0) / Q);
  check_probability(p_eq_d, "P(Eq,D)");
  model.transition[eq][dis] = p_eq_d;
  model.transition[eq][eq] = 1.0 - p_eq_d;

  // Repair ladder: with j players still wrong, one of them must experiment
  // onto a channel not held by a correct player and have the improvement
  // accepted; the Nash target additionally needs the single right power
  // level, the satisfaction target any of the Q_S clearing levels.
  for (int j = 1; j <= K; ++j) {
    double rung = j * (C - K + j) * eps_repair / (static_cast<double>(C) * Q);
    if (target == EquilibriumTarget::kSatisfaction) rung *= params.satisfying_levels;
    check_probability(rung, ("P(R" + std::to_string(j) + ",next)").c_str());
    model.transition[model.repair_state(j)][j - 1] = rung;  // j-1 == 0 is Eq
    model.transition[model.repair_state(j)][model.repair_state(j)] = 1.0 - rung;
  }

  // Discontent settling cascade: the searcher lands on a free channel with
  // probability (C-K+k)/C at stage k, each earlier stage having displaced
  // one more player; stage k leaves k players to repair.
  std::vector<double> cascade(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    cascade[k] = (C - K + k) / std::pow(static_cast<double>(C), k) * factorial(K - 1) /
                 factorial(K - k);
    check_probability(cascade[k], ("P(D,R" + std::to_string(k) + ")").c_str());
  }
  const double p_d_eq = (target == EquilibriumTarget::kNash)
                            ? (C - K + 1.0) / (static_cast<double>(C) * Q)
                            : (C - K + 1.0) / C;
  check_probability(p_d_eq, "P(D,Eq)");
  if (p_d_eq > cascade[1] + kRowSumTol) {
    throw InvalidParameter("transition_probs: P(D,Eq) exceeds the one-player landing mass");
  }
  model.transition[dis][eq] = p_d_eq;
  model.transition[dis][model.repair_state(1)] = std::max(cascade[1] - p_d_eq, 0.0);
  for (int k = 2; k <= K; ++k) model.transition[dis][model.repair_state(k)] = cascade[k];
  double row = 0.0;
  for (double v : model.transition[dis]) row += v;
  model.transition[dis][dis] = std::max(1.0 - row, 0.0);

  for (int s = 0; s < n; ++s) {
    double sum = 0.0;
    for (double v : model.transition[s]) sum += v;
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw InvalidParameter("transition_probs: row " + model.state_names[s] +
                             " sums to " + std::to_string(sum));
    }
  }
  return model;
}

double hitting_time(const DtmcModel& model, int from_state) {
  const int n = model.num_states();
  if (from_state < 0 || from_state >= n) {
    throw InvalidParameter("hitting_time: from_state out of range");
  }
  const int eq = model.equilibrium_state();
  if (from_state == eq) return 0.0;

  // Expected absorption times t solve (I - T) t = 1 over transient states.
  const int m = n - 1;
  Eigen::MatrixXd system(m, m);
  Eigen::VectorXd ones(m);
  auto transient_index = [eq](int state) { return state < eq ? state : state - 1; };
  for (int s = 0; s < n; ++s) {
    if (s == eq) continue;
    const int row = transient_index(s);
    ones(row) = 1.0;
    for (int t = 0; t < n; ++t) {
      if (t == eq) continue;
      const int col = transient_index(t);
      system(row, col) = (s == t ? 1.0 : 0.0) - model.transition[s][t];
    }
  }
  Eigen::VectorXd times = system.colPivHouseholderQr().solve(ones);
  if ((system * times - ones).norm() > 1e-6 * ones.norm()) {
    throw std::runtime_error("hitting_time: equilibrium unreachable from some state");
  }
  const double result = times(transient_index(from_state));
  if (!std::isfinite(result) || result <= 0.0) {
    throw std::runtime_error("hitting_time: equilibrium unreachable from the start state");
  }
  return result;
}

HittingTimeBounds bounds_T(const DtmcParams& params, EquilibriumTarget target) {
  params.validate();
  const int K = params.num_players;
  const int C = params.num_channels;
  const int Q = params.num_power_levels;
  double scale = C * Q / (std::pow(params.epsilon, 1.0 + g_fn(params.delta_u)) * (C - K));
  if (target == EquilibriumTarget::kSatisfaction) {
    if (params.satisfying_levels < 1) {
      throw InvalidParameter("bounds_T: satisfaction target needs satisfying_levels >= 1");
    }
    scale /= params.satisfying_levels;
  }
  HittingTimeBounds bounds;
  bounds.lower = scale * (std::numbers::egamma + std::log(K * (C - K) / static_cast<double>(C)));
  bounds.upper = scale * (1.0 + std::log(K * (C - K + 1.0) / (C + 1.0)));
  return bounds;
}

double occupancy(const DtmcParams& params, EquilibriumTarget target) {
  params.validate();
  const int K = params.num_players;
  const int C = params.num_channels;
  const int Q = params.num_power_levels;
  const double eps = params.epsilon;

  const double p_eq_d = K * (K - 1) * (K - 1) * eps * eps / (C * C) *
                        ((Q - 1.0) / Q) * ((Q - 1.0) / Q);
  const double p_d_eq = (target == EquilibriumTarget::kNash)
                            ? (C - K + 1.0) / (static_cast<double>(C) * Q)
                            : (C - K + 1.0) / C;

  double repair_scale;
  if (target == EquilibriumTarget::kNash) {
    repair_scale = C * Q / (std::pow(eps, 1.0 + g_fn(params.delta_u)) * (C - K));
  } else {
    if (params.satisfying_levels < 1) {
      throw InvalidParameter("occupancy: satisfaction target needs satisfying_levels >= 1");
    }
    repair_scale = C * Q / (eps * (C - K) * static_cast<double>(params.satisfying_levels));
  }

  double cascade_sum = 0.0;
  double excursion = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double landing = (C - K + k) / std::pow(static_cast<double>(C), k) *
                           factorial(K - 1) / factorial(K - k);
    const double repair_time =
        repair_scale * (std::numbers::egamma + std::log(K * (C - k + 1.0) / (C + 1.0)));
    excursion += landing * repair_time;
    cascade_sum += landing;
  }
  const double p_d_d = 1.0 - p_d_eq - cascade_sum;
  excursion += p_d_eq / ((1.0 - p_d_d) * (1.0 - p_d_d));
  return 1.0 / (1.0 + p_eq_d * excursion);
}

}  // namespace tepc
