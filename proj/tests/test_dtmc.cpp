#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "tepc/channel.hpp"
#include "tepc/dtmc.hpp"
#include "tepc/errors.hpp"

using namespace tepc;

namespace {

DtmcParams make_params(int K, int C, int Q, double eps, double du = 0.0, int qs = 1) {
  DtmcParams params;
  params.num_players = K;
  params.num_channels = C;
  params.num_power_levels = Q;
  params.satisfying_levels = qs;
  params.epsilon = eps;
  params.delta_u = du;
  return params;
}

// Independent route to the expected hitting times: geometric dwell on each
// ladder rung plus the mixture over discontent landings. Used to cross-check
// the linear-system solver.
double ladder_time_oracle(const DtmcModel& model, int from_state) {
  const int K = model.params.num_players;
  std::vector<double> ladder(K + 1, 0.0);
  for (int j = 1; j <= K; ++j) {
    const double rung = model.transition[model.repair_state(j)][j - 1];
    ladder[j] = ladder[j - 1] + 1.0 / rung;
  }
  if (from_state == model.equilibrium_state()) return 0.0;
  if (from_state == model.discontent_state()) {
    const int dis = model.discontent_state();
    double expected = 1.0;
    for (int j = 1; j <= K; ++j) {
      expected += model.transition[dis][model.repair_state(j)] * ladder[j];
    }
    return expected / (1.0 - model.transition[dis][dis]);
  }
  return ladder[from_state];
}

}  // namespace

TEST_CASE("satisfying level count follows the grid") {
  CHECK(satisfying_level_count(6, 10.0, 1.0, 3.0) == 4);   // {4,6,8,10}
  CHECK(satisfying_level_count(6, 10.0, 1.0, 1e6) == 0);
  CHECK(satisfying_level_count(6, 10.0, 1.0, 1e-9) == 5);  // everything but zero
  CHECK(satisfying_level_count(8, 10.0, 1.0, 6.0) == 3);
  CHECK(satisfying_level_count(10, 10.0, 1.0, 6.0) == 4);
}

TEST_CASE("q_s requires the simplified gain pattern") {
  auto simplified = make_simplified_instance(3, 4, 6, 10.0, 1.0, 3.0, 4.0);
  CHECK(q_s(simplified) == 4);
  auto rayleigh = sample_rayleigh_instance(3, 4, 6, 10.0, 1.0, 3.0, 4.0, 1);
  CHECK_THROWS_AS(q_s(rayleigh), ModelMismatch);
}

TEST_CASE("q_s boundary cases") {
  auto too_high = make_simplified_instance(2, 3, 6, 10.0, 1.0, 11.0, 3.0);
  CHECK(q_s(too_high) == 0);
  auto tiny_threshold = make_simplified_instance(2, 3, 6, 10.0, 1.0, 1e-9, 3.0);
  CHECK(q_s(tiny_threshold) == 5);
}

TEST_CASE("transition probabilities match hand-substituted values") {
  const auto model = transition_probs(make_params(4, 5, 8, 0.02), EquilibriumTarget::kNash);
  const int eq = model.equilibrium_state();
  const int dis = model.discontent_state();
  CHECK(model.transition[dis][eq] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(model.transition[eq][dis] == doctest::Approx(4.41e-4).epsilon(1e-9));
}

TEST_CASE("equilibrium becomes absorbing as epsilon vanishes") {
  double previous = 1.0;
  for (double eps : {0.05, 0.02, 0.005, 0.0005}) {
    const auto model = transition_probs(make_params(3, 4, 6, eps), EquilibriumTarget::kNash);
    const double leave = model.transition[model.equilibrium_state()][model.discontent_state()];
    CHECK(leave < previous);
    previous = leave;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("rows are stochastic across the parameter grid") {
  for (int K : {2, 3, 4}) {
    for (int C : {4, 5, 6}) {
      if (C <= K) continue;
      for (int Q : {6, 8, 10}) {
        for (double eps : {0.01, 0.02}) {
          for (auto target : {EquilibriumTarget::kNash, EquilibriumTarget::kSatisfaction}) {
            const int qs = satisfying_level_count(Q, 10.0, 1.0, 6.0);
            const auto model = transition_probs(make_params(K, C, Q, eps, 0.0, qs), target);
            for (int s = 0; s < model.num_states(); ++s) {
              double sum = 0.0;
              for (double v : model.transition[s]) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                sum += v;
              }
              CHECK(std::abs(sum - 1.0) <= 1e-12);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("invalid parameters are rejected with the offending quantity") {
  CHECK_THROWS_AS(transition_probs(make_params(4, 4, 6, 0.02), EquilibriumTarget::kNash),
                  InvalidParameter);  // C must exceed K
  CHECK_THROWS_AS(transition_probs(make_params(2, 4, 6, 1.2), EquilibriumTarget::kNash),
                  InvalidParameter);  // epsilon out of range
  // large epsilon pushes P(Eq,D) above one
  CHECK_THROWS_WITH_AS(transition_probs(make_params(5, 6, 8, 0.99), EquilibriumTarget::kNash),
                       doctest::Contains("P(Eq,D)"), InvalidParameter);
}

TEST_CASE("hitting time of a two-state chain is geometric") {
  DtmcModel model;
  model.params = make_params(1, 2, 2, 0.02);
  model.target = EquilibriumTarget::kNash;
  const double p = 0.125;
  model.transition = {{1.0, 0.0}, {p, 1.0 - p}};
  model.state_names = {"Eq", "X"};
  CHECK(hitting_time(model, 1) == doctest::Approx(1.0 / p).epsilon(1e-12));
}

TEST_CASE("hitting time matches the ladder recursion oracle") {
  for (int K : {2, 3, 4}) {
    for (int C : {4, 5, 6}) {
      if (C <= K) continue;
      for (int Q : {6, 8, 10}) {
        for (double eps : {0.01, 0.02}) {
          const int qs = satisfying_level_count(Q, 10.0, 1.0, 6.0);
          for (auto target : {EquilibriumTarget::kNash, EquilibriumTarget::kSatisfaction}) {
            const auto model = transition_probs(make_params(K, C, Q, eps, 0.0, qs), target);
            for (int state = 0; state < model.num_states(); ++state) {
              CHECK(hitting_time(model, state) ==
                    doctest::Approx(ladder_time_oracle(model, state)).epsilon(1e-9));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("hitting time frozen example sits inside the closed-form bracket") {
  const auto params = make_params(3, 4, 6, 0.02, 0.0);
  const auto model = transition_probs(params, EquilibriumTarget::kNash);
  const double from_deepest = hitting_time(model, model.deepest_repair_state());
  const double from_discontent = hitting_time(model, model.discontent_state());
  CHECK(from_deepest == doctest::Approx(1968.0517330979).epsilon(1e-10));
  CHECK(from_discontent == doctest::Approx(1449.7047479748433).epsilon(1e-10));
  const auto bounds = bounds_T(params, EquilibriumTarget::kNash);
  CHECK(bounds.lower <= from_deepest);
  CHECK(from_deepest <= bounds.upper);
  CHECK(bounds.lower <= from_discontent);
  CHECK(from_discontent <= bounds.upper);
}

TEST_CASE("hitting time grows strictly with the grid size") {
  double previous = 0.0;
  for (int Q = 6; Q <= 10; ++Q) {
    const auto model = transition_probs(make_params(3, 4, Q, 0.02), EquilibriumTarget::kNash);
    const double t = hitting_time(model, model.deepest_repair_state());
    CHECK(t > previous);
    previous = t;
  }
}

TEST_CASE("hitting time reports an unreachable equilibrium") {
  // zero satisfying levels freeze the satisfaction ladder
  const auto model =
      transition_probs(make_params(3, 4, 6, 0.02, 0.0, 0), EquilibriumTarget::kSatisfaction);
  CHECK_THROWS(hitting_time(model, model.deepest_repair_state()));
}

TEST_CASE("bounds frozen example and ordering") {
  const auto params = make_params(3, 4, 6, 0.02, 0.0);
  const auto bounds = bounds_T(params, EquilibriumTarget::kNash);
  CHECK(bounds.lower == doctest::Approx(759.7561178810606).epsilon(1e-10));
  CHECK(bounds.upper == doctest::Approx(3102.4933185697996).epsilon(1e-10));
}

TEST_CASE("lower bound stays below the upper bound on the grid") {
  for (int K : {2, 3, 4}) {
    for (int C : {4, 5, 6}) {
      if (C <= K) continue;
      for (int Q : {6, 8, 10}) {
        for (double eps : {0.01, 0.02, 0.05}) {
          const auto bounds = bounds_T(make_params(K, C, Q, eps), EquilibriumTarget::kNash);
          CHECK(bounds.lower < bounds.upper);
        }
      }
    }
  }
}

TEST_CASE("satisfaction bounds collapse onto the Nash bounds when Q_S equals Q... scaled") {
  // the satisfaction forms divide the scale by Q_S
  const auto ne = bounds_T(make_params(3, 5, 8, 0.02, 0.0), EquilibriumTarget::kNash);
  const auto se1 = bounds_T(make_params(3, 5, 8, 0.02, 0.0, 1), EquilibriumTarget::kSatisfaction);
  CHECK(se1.lower == doctest::Approx(ne.lower));
  CHECK(se1.upper == doctest::Approx(ne.upper));
  const auto se4 = bounds_T(make_params(3, 5, 8, 0.02, 0.0, 4), EquilibriumTarget::kSatisfaction);
  CHECK(se4.lower == doctest::Approx(ne.lower / 4.0));
  CHECK(se4.upper == doctest::Approx(ne.upper / 4.0));
}

TEST_CASE("bounds reject degenerate channel counts") {
  CHECK_THROWS_AS(bounds_T(make_params(4, 4, 6, 0.02), EquilibriumTarget::kNash),
                  InvalidParameter);
  CHECK_THROWS_AS(bounds_T(make_params(3, 4, 6, 0.02, 0.0, 0), EquilibriumTarget::kSatisfaction),
                  InvalidParameter);
}

TEST_CASE("occupancy tends to one as epsilon vanishes") {
  CHECK(occupancy(make_params(3, 4, 6, 1e-4), EquilibriumTarget::kNash) > 0.99);
  CHECK(occupancy(make_params(3, 4, 6, 1e-6), EquilibriumTarget::kNash) > 0.999);
}

TEST_CASE("occupancy frozen values at the calibrated default improvement") {
  CHECK(occupancy(make_params(4, 5, 8, 0.02, 0.8), EquilibriumTarget::kNash) ==
        doctest::Approx(0.3834703603850442).epsilon(1e-12));
  CHECK(occupancy(make_params(3, 4, 6, 0.02, 0.8), EquilibriumTarget::kNash) ==
        doctest::Approx(0.7310827035784001).epsilon(1e-12));
  CHECK(occupancy(make_params(4, 5, 8, 0.02, 0.8, 3), EquilibriumTarget::kSatisfaction) ==
        doctest::Approx(0.6856941693140625).epsilon(1e-12));
}

TEST_CASE("occupancy decreases with epsilon") {
  double previous = 1.0;
  for (double eps : {0.01, 0.02, 0.05}) {
    const double occ = occupancy(make_params(3, 4, 6, eps, 0.8), EquilibriumTarget::kNash);
    CHECK(occ < previous);
    CHECK(occ > 0.0);
    CHECK(occ <= 1.0);
    previous = occ;
  }
}
