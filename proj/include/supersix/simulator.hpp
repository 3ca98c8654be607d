#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/game.hpp"

namespace supersix {

enum class Player : std::uint8_t { A, B };

struct MatchConfig {
  int start_total = 4;  // even; each player starts with half
  FullStrategy strategy_a;
  FullStrategy strategy_b;
  std::uint64_t games = 1;
  std::uint64_t seed = 0;
};

struct MatchResult {
  std::uint64_t wins_a = 0;
  std::uint64_t games = 0;
  double estimate = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / games)
};

inline MatchResult make_result(std::uint64_t wins, std::uint64_t games) {
  MatchResult r;
  r.wins_a = wins;
  r.games = games;
  if (games > 0) {
    r.estimate = static_cast<double>(wins) / static_cast<double>(games);
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(games));
  }
  return r;
}

inline void validate(const MatchConfig& c, int cap) {
  if (c.start_total % 2 != 0) {
    throw InvalidArgument("start total " + std::to_string(c.start_total) + " cannot be split evenly");
  }
  if (c.start_total < 2) throw InvalidArgument("start total must be at least 2");
  if (c.start_total > cap) {
    throw CapExceeded("start total " + std::to_string(c.start_total) + " exceeds the cap of " + std::to_string(cap));
  }
  if (c.games < 1) throw InvalidArgument("at least one game is required");
  if (!c.strategy_a.covers(c.start_total) || !c.strategy_b.covers(c.start_total)) {
    throw MissingLevel("both strategies must cover every level up to the start total");
  }
}

// Roll outcomes seen per lid count, indexed [lid][RollKind].
struct RollCounts {
  std::array<std::array<std::uint64_t, 3>, kMaxLid + 1> counts{};

  std::uint64_t rolls_at(int lid) const {
    const auto& c = counts[static_cast<std::size_t>(lid)];
    return c[0] + c[1] + c[2];
  }
  RollCounts& operator+=(const RollCounts& o) {
    for (std::size_t j = 0; j < counts.size(); ++j) {
      for (std::size_t e = 0; e < 3; ++e) counts[j][e] += o.counts[j][e];
    }
    return *this;
  }
};

// Plays one game from `start` (the mover's view) with the physical lid: the
// die face names a hole, faces 1..5 are holes and 6 is the centre. The
// first `start.lid` holes are taken as occupied. Returns true if the player
// to move at `start` wins.
template <typename Rng>
bool play_from(const GameState& start, const FullStrategy& mover_strategy, const FullStrategy& other_strategy,
               Rng& rng, RollCounts* counts = nullptr) {
  validate(start);
  std::array<bool, kMaxLid> hole{};
  for (int i = 0; i < start.lid; ++i) hole[static_cast<std::size_t>(i)] = true;
  int lid = start.lid;
  std::array<int, 2> hand{start.mover, start.opponent};
  const std::array<const FullStrategy*, 2> strategy{&mover_strategy, &other_strategy};
  int turn = 0;
  std::uniform_int_distribution<int> die(1, kDieFaces);

  for (;;) {
    const int face = die(rng);
    int& mine = hand[static_cast<std::size_t>(turn)];
    const int theirs = hand[static_cast<std::size_t>(1 - turn)];
    RollKind kind;
    if (face == kDieFaces) {
      kind = RollKind::Six;
    } else if (!hole[static_cast<std::size_t>(face - 1)]) {
      kind = RollKind::Free;
    } else {
      kind = RollKind::Occupied;
    }
    if (counts != nullptr) ++counts->counts[static_cast<std::size_t>(lid)][static_cast<std::size_t>(kind)];

    if (kind == RollKind::Occupied) {
      hole[static_cast<std::size_t>(face - 1)] = false;
      --lid;
      ++mine;
      turn = 1 - turn;
      continue;
    }
    if (kind == RollKind::Free) {
      hole[static_cast<std::size_t>(face - 1)] = true;
      ++lid;
    }
    --mine;
    if (mine == 0) return turn == 0;
    const GameState here{lid, mine, theirs};
    if (strategy[static_cast<std::size_t>(turn)]->action_for(here) == Action::Stop) turn = 1 - turn;
  }
}

// One game from the even split; A moves first.
template <typename Rng>
Player play_game(const MatchConfig& config, Rng& rng, RollCounts* counts = nullptr) {
  const int half = config.start_total / 2;
  return play_from({0, half, half}, config.strategy_a, config.strategy_b, rng, counts) ? Player::A : Player::B;
}

namespace detail {

// splitmix64 finaliser; spreads one user seed into independent batch seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t kBatchGames = 1U << 16;

// Runs `games` split into fixed-size batches, batch b seeded from
// mix_seed(seed + b). The batch layout does not depend on the thread count,
// so the result is a pure function of the arguments.
template <typename PlayOne>
std::pair<std::uint64_t, RollCounts> run_batches(std::uint64_t games, std::uint64_t seed, unsigned threads,
                                                 const PlayOne& play_one) {
  const std::uint64_t batches = (games + kBatchGames - 1) / kBatchGames;
  std::vector<std::uint64_t> wins(batches, 0);
  std::vector<RollCounts> counts(batches);

  auto run = [&](std::uint64_t b) {
    std::mt19937_64 rng{mix_seed(seed + b)};
    const std::uint64_t n = std::min(kBatchGames, games - b * kBatchGames);
    std::uint64_t w = 0;
    for (std::uint64_t g = 0; g < n; ++g) w += play_one(rng, &counts[b]) ? 1 : 0;
    wins[b] = w;
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, batches));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < batches; ++b) run(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < batches; b += threads) run(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  std::uint64_t total_wins = 0;
  RollCounts total_counts;
  for (std::uint64_t b = 0; b < batches; ++b) {
    total_wins += wins[b];
    total_counts += counts[b];
  }
  return {total_wins, total_counts};
}

}  // namespace detail

struct SimulationOptions {
  int cap = 15;
  unsigned threads = 0;  // 0 = hardware concurrency
  RollCounts* counts = nullptr;
};

inline MatchResult simulate(const MatchConfig& config, const SimulationOptions& options = {}) {
  validate(config, options.cap);
  auto [wins, counts] = detail::run_batches(config.games, config.seed, options.threads,
                                            [&](std::mt19937_64& rng, RollCounts* c) {
                                              return play_game(config, rng, c) == Player::A;
                                            });
  if (options.counts != nullptr) *options.counts += counts;
  return make_result(wins, config.games);
}

// Mid-game estimate: how often the player to move at `start` wins when both
// sides follow `strategy`.
inline MatchResult simulate_from(const GameState& start, const FullStrategy& strategy, std::uint64_t games,
                                 std::uint64_t seed, const SimulationOptions& options = {}) {
  validate(start);
  if (start.total() > options.cap) throw CapExceeded("start state exceeds the cap");
  if (!strategy.covers(start.total())) throw MissingLevel("strategy must cover the start state's level");
  if (games < 1) throw InvalidArgument("at least one game is required");
  auto [wins, counts] = detail::run_batches(games, seed, options.threads, [&](std::mt19937_64& rng, RollCounts* c) {
    return play_from(start, strategy, strategy, rng, c);
  });
  if (options.counts != nullptr) *options.counts += counts;
  return make_result(wins, games);
}

}  // namespace supersix
