#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "tepc/te.hpp"

using namespace tepc;

namespace {

TeParams params_for(double epsilon, int num_players) {
  TeParams params;
  params.epsilon = epsilon;
  params.num_players = num_players;
  return params;
}

TeState content_state(Action bench, double bench_utility) {
  TeState state;
  state.mood = Mood::kContent;
  state.benchmark_action = bench;
  state.benchmark_utility = bench_utility;
  state.last_action = bench;
  return state;
}

}  // namespace

TEST_CASE("g_fn linear values and domain") {
  CHECK(g_fn(0.0) == doctest::Approx(0.2));
  CHECK(g_fn(0.5) == doctest::Approx(0.1));
  CHECK(g_fn(1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(g_fn(-0.1), std::domain_error);
  CHECK_THROWS_AS(g_fn(1.1), std::domain_error);
}

TEST_CASE("f_fn linear values and domain") {
  CHECK(f_fn(0.0, 4) == doctest::Approx(0.05));
  CHECK(f_fn(1.0, 4) == doctest::Approx(0.0));
  CHECK(f_fn(0.5, 2) == doctest::Approx(0.05));
  CHECK_THROWS_AS(f_fn(-0.1, 4), std::domain_error);
  CHECK_THROWS_AS(f_fn(2.0, 4), std::domain_error);
  CHECK_THROWS_AS(f_fn(0.5, 0), std::domain_error);
}

TEST_CASE("g_fn and f_fn respect their bands away from the right endpoint") {
  for (int i = 0; i < 1000; ++i) {
    const double x = i / 1000.0;
    const double g = g_fn(x);
    CHECK(g > 0.0);
    CHECK(g < 0.5);
    for (int players : {1, 2, 4, 8}) {
      const double f = f_fn(x, players);
      CHECK(f > 0.0);
      CHECK(f < 0.5 / players);
    }
  }
}

TEST_CASE("acceptance exponents are floored to stay below one") {
  const auto params = params_for(0.02, 4);
  CHECK(params.experiment_accept_prob(1.0) < 1.0);
  CHECK(params.experiment_accept_prob(1.0) ==
        doctest::Approx(std::pow(0.02, 1e-6)));
  CHECK(params.settle_accept_prob(1.0) < 1.0);
}

TEST_CASE("discontent settle probability matches the frozen value") {
  // eps = 0.02, u = 0.5, K = 4: f = 0.025 and 0.02^0.025 = 0.9068297...
  const auto params = params_for(0.02, 4);
  CHECK(params.settle_accept_prob(0.5) == doctest::Approx(0.9068297301185538).epsilon(1e-9));
}

TEST_CASE("experiment acceptance rises with the improvement") {
  const auto params = params_for(0.02, 3);
  double previous = 0.0;
  for (double du = 0.0; du <= 1.0; du += 0.05) {
    const double p = params.experiment_accept_prob(du);
    CHECK(p > previous);
    previous = p;
  }
}

TEST_CASE("content player with zero epsilon always replays the benchmark") {
  auto params = params_for(0.02, 2);
  params.epsilon = 1e-12;  // epsilon = 0 is degenerate; arbitrarily small works
  std::mt19937_64 rng(1);
  const auto state = content_state({1, 2}, 0.5);
  for (int i = 0; i < 200; ++i) {
    const auto chosen = select_action(state, 3, 4, params, rng);
    CHECK(chosen.action == state.benchmark_action);
    CHECK_FALSE(chosen.experimented);
  }
}

TEST_CASE("content experiments avoid the benchmark and spread uniformly") {
  auto params = params_for(0.999999, 2);  // nearly always experiment
  std::mt19937_64 rng(2);
  const Action bench{1, 1};
  const auto state = content_state(bench, 0.5);
  std::map<int, int> counts;
  const int draws = 110000;
  int experiments = 0;
  for (int i = 0; i < draws; ++i) {
    const auto chosen = select_action(state, 3, 4, params, rng);
    if (!chosen.experimented) continue;
    ++experiments;
    CHECK_FALSE(chosen.action == bench);
    counts[chosen.action.channel * 4 + chosen.action.power_index] += 1;
  }
  CHECK(counts.size() == 11);  // all actions except the benchmark
  const double expected = static_cast<double>(experiments) / 11.0;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / 11.0));
  for (const auto& [action, count] : counts) {
    CHECK(std::abs(count - expected) < 4.0 * sigma);
  }
}

TEST_CASE("hopeful and watchful replay the benchmark without experimenting") {
  const auto params = params_for(0.5, 2);
  std::mt19937_64 rng(3);
  for (Mood mood : {Mood::kHopeful, Mood::kWatchful}) {
    TeState state = content_state({2, 3}, 0.4);
    state.mood = mood;
    for (int i = 0; i < 100; ++i) {
      const auto chosen = select_action(state, 3, 4, params, rng);
      CHECK(chosen.action == state.benchmark_action);
      CHECK_FALSE(chosen.experimented);
    }
  }
}

TEST_CASE("discontent search covers the full action set uniformly") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(4);
  TeState state;
  state.mood = Mood::kDiscontent;
  state.benchmark_action = {0, 0};
  std::map<int, int> counts;
  const int action_count = 3 * 4;
  const int draws = 120000;
  for (int i = 0; i < draws; ++i) {
    const auto chosen = select_action(state, 3, 4, params, rng);
    CHECK_FALSE(chosen.experimented);
    counts[chosen.action.channel * 4 + chosen.action.power_index] += 1;
  }
  CHECK(counts.size() == static_cast<std::size_t>(action_count));
  const double expected = static_cast<double>(draws) / action_count;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / action_count));
  for (const auto& [action, count] : counts) {
    CHECK(std::abs(count - expected) < 4.0 * sigma);
  }
}

TEST_CASE("content experiment with a loss leaves the state unchanged") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(5);
  TeState state = content_state({0, 1}, 0.8);
  state.last_action = {1, 2};
  state.experimented_last_step = true;
  const TeState next = update(state, 0.3, params, rng);
  CHECK(next.mood == Mood::kContent);
  CHECK(next.benchmark_action == state.benchmark_action);
  CHECK(next.benchmark_utility == state.benchmark_utility);
}

TEST_CASE("content experiment tie keeps the old benchmark") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(6);
  TeState state = content_state({0, 1}, 0.8);
  state.last_action = {1, 2};
  state.experimented_last_step = true;
  for (int i = 0; i < 100; ++i) {
    const TeState next = update(state, 0.8, params, rng);
    CHECK(next.benchmark_action == state.benchmark_action);
    CHECK(next.benchmark_utility == 0.8);
  }
}

TEST_CASE("content experiment gain adopts at the shaped rate") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(7);
  TeState state = content_state({0, 1}, 0.3);
  state.last_action = {1, 2};
  state.experimented_last_step = true;
  const double gain = 0.4;
  int adopted = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const TeState next = update(state, state.benchmark_utility + gain, params, rng);
    if (next.benchmark_action == state.last_action) {
      ++adopted;
      CHECK(next.benchmark_utility == doctest::Approx(0.7));
      CHECK(next.mood == Mood::kContent);
    }
  }
  const double expected = params.experiment_accept_prob(gain);
  const double sigma = std::sqrt(expected * (1.0 - expected) / draws);
  CHECK(std::abs(static_cast<double>(adopted) / draws - expected) < 4.0 * sigma);
}

TEST_CASE("unexplained changes move content to the probation moods") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(8);
  TeState state = content_state({0, 1}, 0.5);
  state.experimented_last_step = false;

  const TeState up = update(state, 0.7, params, rng);
  CHECK(up.mood == Mood::kHopeful);
  CHECK(up.benchmark_utility == 0.5);

  const TeState down = update(state, 0.2, params, rng);
  CHECK(down.mood == Mood::kWatchful);
  CHECK(down.benchmark_utility == 0.5);

  const TeState flat = update(state, 0.5, params, rng);
  CHECK(flat.mood == Mood::kContent);
}

TEST_CASE("hopeful resolves as specified") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(9);
  TeState state = content_state({0, 1}, 0.5);
  state.mood = Mood::kHopeful;

  const TeState confirmed = update(state, 0.7, params, rng);
  CHECK(confirmed.mood == Mood::kContent);
  CHECK(confirmed.benchmark_utility == 0.7);
  CHECK(confirmed.benchmark_action == state.benchmark_action);

  const TeState reversed = update(state, 0.3, params, rng);
  CHECK(reversed.mood == Mood::kWatchful);
  CHECK(reversed.benchmark_utility == 0.5);

  const TeState tie = update(state, 0.5, params, rng);
  CHECK(tie.mood == Mood::kContent);
  CHECK(tie.benchmark_utility == 0.5);
}

TEST_CASE("watchful resolves as specified and benchmarks never move") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(10);
  TeState state = content_state({0, 1}, 0.5);
  state.mood = Mood::kWatchful;

  const TeState second_loss = update(state, 0.3, params, rng);
  CHECK(second_loss.mood == Mood::kDiscontent);
  CHECK(second_loss.benchmark_action == state.benchmark_action);
  CHECK(second_loss.benchmark_utility == 0.5);

  const TeState rebound = update(state, 0.7, params, rng);
  CHECK(rebound.mood == Mood::kHopeful);
  CHECK(rebound.benchmark_utility == 0.5);

  const TeState tie = update(state, 0.5, params, rng);
  CHECK(tie.mood == Mood::kContent);
}

TEST_CASE("discontent settles on the action it just played") {
  const auto params = params_for(0.02, 4);
  std::mt19937_64 rng(11);
  TeState state;
  state.mood = Mood::kDiscontent;
  state.benchmark_action = {0, 0};
  state.benchmark_utility = 0.1;
  state.last_action = {2, 3};
  int settled = 0;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) {
    const TeState next = update(state, 0.5, params, rng);
    if (next.mood == Mood::kContent) {
      ++settled;
      CHECK(next.benchmark_action == state.last_action);
      CHECK(next.benchmark_utility == 0.5);
    } else {
      CHECK(next.mood == Mood::kDiscontent);
      CHECK(next.benchmark_action == state.benchmark_action);
    }
  }
  const double expected = 0.9068297301185538;  // 0.02^f(0.5), f over 4 players
  const double sigma = std::sqrt(expected * (1.0 - expected) / draws);
  CHECK(std::abs(static_cast<double>(settled) / draws - expected) < 4.0 * sigma);
}

TEST_CASE("content and hopeful never fall straight to discontent") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    TeState state = content_state({0, 1}, unit(rng));
    state.experimented_last_step = i % 2 == 0;
    state.last_action = {1, 0};
    const TeState from_content = update(state, unit(rng), params, rng);
    CHECK(from_content.mood != Mood::kDiscontent);
    state.mood = Mood::kHopeful;
    state.experimented_last_step = false;
    const TeState from_hopeful = update(state, unit(rng), params, rng);
    CHECK(from_hopeful.mood != Mood::kDiscontent);
  }
}

TEST_CASE("update rejects out-of-range utilities") {
  const auto params = params_for(0.02, 2);
  std::mt19937_64 rng(13);
  TeState state = content_state({0, 0}, 0.5);
  CHECK_THROWS_AS(update(state, -0.01, params, rng), std::domain_error);
  CHECK_THROWS_AS(update(state, 1.01, params, rng), std::domain_error);
}

TEST_CASE("benchmark utility never decreases against a frozen environment") {
  // Fixed utility per action; the player only re-benchmarks upward.
  const auto params = params_for(0.05, 1);
  std::mt19937_64 rng(14);
  const int channels = 2, levels = 5;
  std::vector<double> payoff(channels * levels);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& p : payoff) p = unit(rng);

  TeState state;
  state.mood = Mood::kDiscontent;
  state.benchmark_action = {0, 0};
  double last_bench = 0.0;
  bool was_content = false;
  for (int n = 0; n < 20000; ++n) {
    const auto chosen = select_action(state, channels, levels, params, rng);
    state.last_action = chosen.action;
    state.experimented_last_step = chosen.experimented;
    const double u = payoff[chosen.action.channel * levels + chosen.action.power_index];
    state = update(state, u, params, rng);
    if (was_content && state.mood == Mood::kContent) {
      CHECK(state.benchmark_utility >= last_bench);
    }
    was_content = state.mood == Mood::kContent;
    last_bench = state.benchmark_utility;
    // frozen environment: an unexplained change is impossible
    CHECK(state.mood != Mood::kWatchful);
    CHECK(state.mood != Mood::kHopeful);
  }
  // the player ends benchmarked on the best action
  const double best = *std::max_element(payoff.begin(), payoff.end());
  CHECK(state.benchmark_utility == doctest::Approx(best));
}

TEST_CASE("selection and update are deterministic given the seed") {
  const auto params = params_for(0.1, 2);
  auto trace = [&](std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::mt19937_64 env(seed + 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TeState state;
    state.mood = Mood::kDiscontent;
    state.benchmark_action = {0, 0};
    std::vector<int> visited;
    for (int n = 0; n < 500; ++n) {
      const auto chosen = select_action(state, 3, 4, params, rng);
      state.last_action = chosen.action;
      state.experimented_last_step = chosen.experimented;
      state = update(state, unit(env), params, rng);
      visited.push_back(chosen.action.channel * 4 + chosen.action.power_index);
    }
    return visited;
  };
  CHECK(trace(77) == trace(77));
  CHECK(trace(77) != trace(78));
}
