#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "supersix/optimizer.hpp"
#include "supersix/simulator.hpp"

using namespace supersix;

namespace {

const OptimalSolution& optimal13() {
  static const OptimalSolution sol = solve_optimal(13, Method::Policy);
  return sol;
}

MatchConfig match(int total, std::uint64_t games, std::uint64_t seed) {
  MatchConfig c;
  c.start_total = total;
  c.strategy_a = optimal13().strategy;
  c.strategy_b = optimal13().strategy;
  c.games = games;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(Simulator, TwoSticksFirstMoverAlwaysWins) {
  const MatchResult r = simulate(match(2, 10, 3));
  EXPECT_EQ(r.wins_a, 10U);
  EXPECT_EQ(r.estimate, 1.0);
  EXPECT_EQ(r.std_error, 0.0);
}

TEST(Simulator, Deterministic) {
  const MatchResult a = simulate(match(6, 100000, 42));
  const MatchResult b = simulate(match(6, 100000, 42));
  EXPECT_EQ(a.wins_a, b.wins_a);
  SimulationOptions threaded;
  threaded.threads = 3;
  EXPECT_EQ(simulate(match(6, 100000, 42), threaded).wins_a, a.wins_a);
  EXPECT_NE(simulate(match(6, 100000, 43)).wins_a, a.wins_a);
}

TEST(Simulator, RejectsBadConfigs) {
  EXPECT_THROW(simulate(match(7, 10, 1)), InvalidArgument);
  EXPECT_THROW(simulate(match(0, 10, 1)), InvalidArgument);
  EXPECT_THROW(simulate(match(4, 0, 1)), InvalidArgument);
  SimulationOptions capped;
  capped.cap = 10;
  EXPECT_THROW(simulate(match(12, 10, 1), capped), CapExceeded);
  MatchConfig short_strategy = match(8, 10, 1);
  short_strategy.strategy_b = FullStrategy::uniform(6, Action::Continue);
  EXPECT_THROW(simulate(short_strategy), MissingLevel);
}

// Start states and random mid-game states agree with the exact optimal
// values within 4 standard errors.
TEST(Simulator, AgreesWithExactValues) {
  std::mt19937_64 pick{99};
  for (int t = 4; t <= 8; ++t) {
    if (t % 2 == 0) {
      const MatchResult r = simulate(match(t, 1000000, static_cast<std::uint64_t>(t)));
      const double exact = to_double(optimal13().table.value({0, t / 2, t / 2}));
      EXPECT_LT(std::fabs(r.estimate - exact), 4 * r.std_error) << "start total " << t;
    }

    const auto states = enumerate_states(t);
    std::uniform_int_distribution<std::size_t> which(0, states.size() - 1);
    for (int i = 0; i < 3; ++i) {
      const GameState s = states[which(pick)];
      const MatchResult m = simulate_from(s, optimal13().strategy, 1000000, 1000 + static_cast<std::uint64_t>(i));
      const double v = to_double(optimal13().table.value(s));
      if (v == 1.0) {
        EXPECT_EQ(m.wins_a, m.games);
      } else {
        EXPECT_LT(std::fabs(m.estimate - v), 4 * m.std_error) << to_string(s);
      }
    }
  }
}

TEST(Simulator, RollFrequenciesMatchLid) {
  RollCounts counts;
  SimulationOptions opt;
  opt.counts = &counts;
  simulate(match(12, 200000, 5), opt);
  for (int lid = 0; lid <= kMaxLid; ++lid) {
    const double n = static_cast<double>(counts.rolls_at(lid));
    ASSERT_GT(n, 1000) << lid;
    const double expected[3] = {1.0 / 6, (5.0 - lid) / 6, lid / 6.0};
    for (int e = 0; e < 3; ++e) {
      const double p = expected[e];
      const double seen = static_cast<double>(counts.counts[static_cast<std::size_t>(lid)][static_cast<std::size_t>(e)]);
      const double sigma = std::sqrt(n * p * (1 - p));
      EXPECT_LE(std::fabs(seen - n * p), 4 * sigma + 1e-9) << "lid " << lid << " event " << e;
    }
  }
}

TEST(Simulator, OptimalBeatsAllContinue) {
  MatchConfig opt = match(12, 400000, 11);
  MatchConfig naive = opt;
  naive.strategy_a = FullStrategy::uniform(13, Action::Continue);
  const MatchResult a = simulate(opt);
  const MatchResult b = simulate(naive);
  EXPECT_GE(a.estimate, b.estimate - 3 * std::hypot(a.std_error, b.std_error));
}

TEST(Simulator, SuboptimalStrategyLoses) {
  MatchConfig opt = match(8, 400000, 17);
  MatchConfig worse = opt;
  FullStrategy s = opt.strategy_a;
  s.set_level(Strategy{8, Action::Stop});
  worse.strategy_a = s;
  const MatchResult a = simulate(opt);
  const MatchResult b = simulate(worse);
  EXPECT_LT(b.estimate, a.estimate);
}
