#include <gtest/gtest.h>

#include <random>
#include <string>

#include "oracle.hpp"
#include "supersix/level_system.hpp"
#include "supersix/optimizer.hpp"

using namespace supersix;

namespace {

Rational q(long n, long d) { return make_rational(n, d); }

oracle::Policy policy_of(const FullStrategy& full) {
  return [&full](int j, int k, int l) { return full.action_for({j, k, l}) == Action::Continue; };
}

// Row/column restriction of a level system to `states`.
struct Block {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
};

Block sub_block(const LevelSystem<Rational>& sys, const std::vector<GameState>& states) {
  Block out;
  for (const GameState& r : states) {
    std::vector<Rational> row;
    for (const GameState& c : states) row.push_back(sys.at(state_index(r), state_index(c)));
    out.a.push_back(row);
    out.b.push_back(sys.rhs[state_index(r)]);
    // Nothing outside the block.
    Rational outside{0};
    for (std::size_t c = 0; c < sys.dimension(); ++c) {
      bool in = false;
      for (const GameState& s : states) in = in || state_index(s) == c;
      if (!in) outside += abs(sys.at(state_index(r), c));
    }
    EXPECT_EQ(outside, 0) << to_string(r);
  }
  return out;
}

}  // namespace

TEST(ExactValues, FourSticks) {
  const ValueTable table = evaluate(FullStrategy::uniform(4, Action::Continue), 4);
  EXPECT_EQ(to_string(table.value({0, 2, 2})), "36/41");
  EXPECT_EQ(to_string(table.value({1, 1, 2})), "35/41");
  EXPECT_EQ(to_string(table.value({2, 1, 1})), "88/123");
  EXPECT_EQ(table.value({0, 1, 3}), 1);

  // (1/2/1): 1/6 of arriving at (1/1/1), which wins unless the single
  // occupied face comes up, plus 4/6 of arriving at (2/1/1).
  const Rational p111 = q(5, 6);
  const Rational pc = q(1, 6) * p111 + q(4, 6) * q(88, 123);
  EXPECT_EQ(table.value({1, 1, 1}), p111);
  EXPECT_EQ(table.value({1, 2, 1}), pc);
  EXPECT_EQ(to_string(pc), "101/164");
}

TEST(ExactValues, FourStickCoupledBlock) {
  ValueTable lower = evaluate(FullStrategy{}, 3);
  const auto sys = build_level_system<Rational>(4, Strategy{4}, lower);
  const Block blk = sub_block(sys, {{0, 2, 2}, {1, 1, 2}});
  EXPECT_EQ(blk.a[0][0], 6);
  EXPECT_EQ(blk.a[0][1], -5);
  EXPECT_EQ(blk.a[1][0], 1);
  EXPECT_EQ(blk.a[1][1], 6);
  EXPECT_EQ(blk.b[0], 1);
  EXPECT_EQ(blk.b[1], 6);
}

TEST(ExactValues, FiveStickCoupledBlock) {
  const ValueTable lower = evaluate(FullStrategy::uniform(4, Action::Continue), 4);
  const auto sys = build_level_system<Rational>(5, Strategy{5}, lower);
  const std::vector<GameState> states{{0, 3, 2}, {1, 2, 2}, {2, 1, 2}, {0, 2, 3}, {1, 1, 3}};
  const Block blk = sub_block(sys, states);
  const long expected[5][5] = {{6, -5, 0, 0, 0}, {0, 6, -4, 1, 0}, {0, 2, 6, 0, 0}, {0, 0, 0, 6, -5}, {1, 0, 0, 0, 6}};
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) EXPECT_EQ(blk.a[r][c], expected[r][c]) << r << "," << c;
  }
  EXPECT_EQ(blk.b[0], q(36, 41));
  EXPECT_EQ(blk.b[1], q(76, 41));
  EXPECT_EQ(blk.b[2], 6);
  EXPECT_EQ(blk.b[3], 1);
  EXPECT_EQ(blk.b[4], 6);

  const std::vector<Rational> v = solve_level(sys);
  const long num[5] = {45324, 43164, 49531, 57624, 56365};
  for (int i = 0; i < 5; ++i) EXPECT_EQ(v[state_index(states[i])], q(num[i], 63919)) << to_string(states[i]);
}

TEST(ExactValues, PublishedDecimals) {
  struct Cell {
    int lid, k, l;
    const char* shown;
  };
  // Published three-place values under optimal play.
  const std::vector<Cell> cells{
      {0, 3, 1, "0.657"}, {0, 2, 2, "0.878"}, {0, 1, 3, "1.000"}, {1, 2, 1, "0.616"}, {1, 1, 2, "0.853"},
      {2, 1, 1, "0.715"}, {0, 4, 1, "0.453"}, {0, 3, 2, "0.709"}, {0, 2, 3, "0.902"}, {0, 1, 4, "1"},
      {1, 3, 1, "0.413"}, {1, 2, 2, "0.675"}, {1, 1, 3, "0.882"}, {2, 2, 1, "0.465"}, {2, 1, 2, "0.775"},
      {3, 1, 1, "0.613"}, {0, 5, 1, "0.293"}, {0, 4, 2, "0.541"}, {0, 3, 3, "0.767"}, {0, 2, 4, "0.925"},
      {0, 1, 5, "1"},     {1, 4, 1, "0.261"}, {1, 3, 2, "0.507"}, {1, 2, 3, "0.740"}, {1, 1, 4, "0.910"},
      {2, 3, 1, "0.288"}, {2, 2, 2, "0.573"}, {2, 1, 3, "0.831"}, {3, 2, 1, "0.361"}, {3, 1, 2, "0.714"},
      {4, 1, 1, "0.524"}, {0, 6, 1, "0.190"}, {0, 5, 2, "0.401"}, {0, 4, 3, "0.627"}, {0, 3, 4, "0.819"},
      {0, 2, 5, "0.944"}, {0, 1, 6, "1.000"}, {1, 5, 1, "0.169"}, {1, 4, 2, "0.373"}, {1, 3, 3, "0.599"},
      {1, 2, 4, "0.798"}, {1, 1, 5, "0.933"}, {2, 4, 1, "0.188"}, {2, 3, 2, "0.419"}, {2, 2, 3, "0.668"},
      {2, 1, 4, "0.876"}, {3, 3, 1, "0.236"}, {3, 2, 2, "0.512"}, {3, 1, 3, "0.790"}, {4, 2, 1, "0.319"},
      {4, 1, 2, "0.658"}, {5, 1, 1, "0.451"}};
  const ValueTable table = solve_optimal(7, Method::Policy).table;
  int exact_matches = 0;
  for (const Cell& c : cells) {
    const Rational v = table.value({c.lid, c.k, c.l});
    const double shown = std::stod(c.shown);
    EXPECT_NEAR(std::stod(to_decimal(v, 3)), shown, 1e-3 + 1e-12) << c.lid << "/" << c.k << "/" << c.l;
    if (std::stod(to_decimal(v, 3)) == shown) ++exact_matches;
  }
  // Only 35/41 = 0.8537 is printed truncated rather than rounded.
  EXPECT_EQ(exact_matches, static_cast<int>(cells.size()) - 1);
}

TEST(LevelSystem, AgreesWithIndependentOracle) {
  std::vector<FullStrategy> strategies{FullStrategy::uniform(12, Action::Continue),
                                       FullStrategy::uniform(12, Action::Stop), solve_optimal(12, Method::Policy).strategy};
  std::mt19937_64 rng{5};
  std::bernoulli_distribution coin;
  for (int r = 0; r < 3; ++r) {
    FullStrategy f;
    for (int t = 4; t <= 12; ++t) {
      std::vector<Action> bits(decision_point_count(t));
      for (auto& b : bits) b = coin(rng) ? Action::Continue : Action::Stop;
      f.set_level(Strategy{t, bits});
    }
    strategies.push_back(f);
  }
  for (const FullStrategy& f : strategies) {
    const ValueTable table = evaluate(f, 12);
    const auto ref = oracle::values(12, policy_of(f));
    for (const auto& [key, v] : ref) {
      const auto [j, k, l] = key;
      EXPECT_NEAR(to_double(table.value({j, k, l})), static_cast<double>(v), 1e-12) << j << "/" << k << "/" << l;
    }
  }
}

TEST(LevelSystem, ExactEquationsHoldToFifteen) {
  const FullStrategy f = solve_optimal(15, Method::Policy).strategy;
  const ValueTable table = evaluate(f, 15);
  const auto policy = policy_of(f);
  auto lookup = [&](int j, int k, int l) { return table.value({j, k, l}); };
  for (int t = 2; t <= 15; ++t) {
    const auto sys = build_level_system<Rational>(t, t >= 4 ? &f.level(t) : nullptr, table);
    for (const Rational& r : residuals(sys, table.level(t))) EXPECT_EQ(r, 0);
    for (const GameState& s : enumerate_states(t)) {
      const Rational& v = table.value(s);
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 1);
      EXPECT_EQ(oracle::equation_rhs(s.lid, s.mover, s.opponent, lookup, policy), v) << to_string(s);
    }
  }
}

TEST(LevelSystem, FloatingPointSolveMatchesExact) {
  const FullStrategy f = solve_optimal(15, Method::Policy).strategy;
  const ValueTable exact = evaluate<Rational>(f, 15);
  const BasicValueTable<double> fast = evaluate<double>(f, 15);
  for (int t = 2; t <= 15; ++t) {
    for (std::size_t i = 0; i < state_count(t); ++i) {
      EXPECT_NEAR(fast.level(t)[i], to_double(exact.level(t)[i]), 1e-9);
    }
  }
}

TEST(LevelSystem, ArrivalExpressions) {
  const Strategy s = parse_strategy("1111/1111/111/00/0", 7);
  EXPECT_EQ(to_string(arrival_value_expr({2, 1, 4}, s)), "P(2/1/4)");
  EXPECT_EQ(to_string(arrival_value_expr({4, 1, 2}, s)), "1 - P(4/2/1)");
  EXPECT_EQ(to_string(arrival_value_expr({0, 3, 4}, s)), "P(0/3/4)");
  EXPECT_THROW(arrival_value_expr({0, 3, 3}, s), InvalidArgument);
}

TEST(LevelSystem, Preconditions) {
  ValueTable empty;
  EXPECT_THROW(build_level_system<Rational>(3, nullptr, empty), MissingLevel);
  const ValueTable lower = evaluate(FullStrategy{}, 3);
  EXPECT_THROW(build_level_system<Rational>(4, nullptr, lower), InvalidArgument);
  EXPECT_THROW(build_level_system<Rational>(4, Strategy{5}, lower), InvalidArgument);
  EXPECT_THROW(evaluate(FullStrategy::uniform(5, Action::Continue), 6), MissingLevel);
  EXPECT_THROW(solve_dense<Rational>({Rational{0}}, {Rational{1}}), SingularSystem);
}

TEST(ValueTable, ArrivalValueFollowsStrategy) {
  const FullStrategy f = solve_optimal(7, Method::Policy).strategy;
  const ValueTable t = evaluate(f, 7);
  EXPECT_EQ(t.arrival_value({4, 1, 2}), 1 - t.value({4, 2, 1}));
  EXPECT_EQ(t.arrival_value({2, 1, 4}), t.value({2, 1, 4}));
  EXPECT_EQ(t.prefix(5).max_total(), 5);
  EXPECT_THROW(t.level(8), MissingLevel);
}
