#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/game.hpp"
#include "supersix/rational.hpp"
#include "supersix/value_table.hpp"

namespace supersix {

// Value of arriving at a same-level situation, as a term in that level's
// system: either the unknown P(state) or 1 - P(state).
struct ArrivalExpr {
  enum class Kind : std::uint8_t { Unknown, OneMinusUnknown };

  Kind kind;
  GameState state;

  bool operator==(const ArrivalExpr&) const = default;
};

inline std::string to_string(const ArrivalExpr& e) {
  const std::string p = "P" + to_string(e.state);
  return e.kind == ArrivalExpr::Kind::Unknown ? p : "1 - " + p;
}

inline ArrivalExpr arrival_value_expr(const GameState& arrival, const Strategy& level_strategy) {
  validate(arrival);
  if (arrival.total() != level_strategy.total()) {
    throw InvalidArgument("arrival " + to_string(arrival) + " is not at the strategy's level " +
                          std::to_string(level_strategy.total()));
  }
  if (level_strategy.action_for(arrival) == Action::Continue) {
    return {ArrivalExpr::Kind::Unknown, arrival};
  }
  return {ArrivalExpr::Kind::OneMinusUnknown, arrival.mirror()};
}

// Square system for one level, every row scaled by the die's six faces so
// that all matrix coefficients are integers:
//   6 P(s) - sum(coefficients) = constants.
template <typename T>
struct LevelSystem {
  int total = 2;
  std::vector<GameState> unknowns;
  std::vector<T> matrix;  // row-major, dimension() x dimension()
  std::vector<T> rhs;

  std::size_t dimension() const noexcept { return unknowns.size(); }
  T& at(std::size_t row, std::size_t col) { return matrix[row * dimension() + col]; }
  const T& at(std::size_t row, std::size_t col) const { return matrix[row * dimension() + col]; }
};

// `level_strategy` may be null only for totals below 4.
template <typename T>
LevelSystem<T> build_level_system(int total, const Strategy* level_strategy, const BasicValueTable<T>& lower) {
  using Traits = ScalarTraits<T>;
  if (total < 2) throw InvalidArgument("a game needs at least 2 sticks");
  if (total >= kMinDecisionTotal) {
    if (level_strategy == nullptr) throw InvalidArgument("a strategy is required from 4 sticks");
    if (level_strategy->total() != total) throw InvalidArgument("strategy level does not match total");
  }
  if (total > 2 && !lower.has_level(total - 1)) {
    throw MissingLevel("level " + std::to_string(total - 1) + " must be solved before level " +
                       std::to_string(total));
  }

  LevelSystem<T> sys;
  sys.total = total;
  sys.unknowns = enumerate_states(total);
  const std::size_t n = sys.unknowns.size();
  sys.matrix.assign(n * n, Traits::from_int(0));
  sys.rhs.assign(n, Traits::from_int(0));

  for (std::size_t row = 0; row < n; ++row) {
    const GameState& s = sys.unknowns[row];
    sys.at(row, row) += Traits::from_int(kDieFaces);
    for (const Transition& tr : transitions(s)) {
      const long weight = tr.event.sixths;
      switch (tr.outcome) {
        case OutcomeKind::Impossible:
          break;
        case OutcomeKind::Win:
          sys.rhs[row] += Traits::from_int(weight);
          break;
        case OutcomeKind::Arrival:
          if (tr.event.kind == RollKind::Six) {
            // One stick fewer: the arrival belongs to the solved level below.
            sys.rhs[row] += Traits::from_int(weight) * lower.arrival_value(tr.state);
          } else {
            const ArrivalExpr e = level_strategy != nullptr
                                      ? arrival_value_expr(tr.state, *level_strategy)
                                      : ArrivalExpr{ArrivalExpr::Kind::Unknown, tr.state};
            const std::size_t col = state_index(e.state);
            if (e.kind == ArrivalExpr::Kind::Unknown) {
              sys.at(row, col) -= Traits::from_int(weight);
            } else {
              sys.rhs[row] += Traits::from_int(weight);
              sys.at(row, col) += Traits::from_int(weight);
            }
          }
          break;
        case OutcomeKind::Handover:
          sys.rhs[row] += Traits::from_int(weight);
          sys.at(row, state_index(tr.state)) += Traits::from_int(weight);
          break;
      }
    }
  }
  return sys;
}

template <typename T>
LevelSystem<T> build_level_system(int total, const Strategy& level_strategy, const BasicValueTable<T>& lower) {
  return build_level_system<T>(total, &level_strategy, lower);
}

// Gaussian elimination. Exact scalars take the first nonzero pivot in the
// column; floating point uses partial pivoting by magnitude.
template <typename T>
std::vector<T> solve_dense(std::vector<T> a, std::vector<T> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw InvalidArgument("matrix is not square");
  auto at = [&](std::size_t r, std::size_t c) -> T& { return a[r * n + c]; };

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_floating_point_v<T>) {
      T best = 0;
      for (std::size_t r = col; r < n; ++r) {
        if (std::abs(at(r, col)) > best) {
          best = std::abs(at(r, col));
          pivot = r;
        }
      }
    } else {
      for (std::size_t r = col; r < n; ++r) {
        if (sgn(at(r, col)) != 0) {
          pivot = r;
          break;
        }
      }
    }
    if (pivot == n) throw SingularSystem("no nonzero pivot in column " + std::to_string(col));
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(at(col, c), at(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if constexpr (std::is_floating_point_v<T>) {
        if (at(r, col) == 0) continue;
      } else {
        if (sgn(at(r, col)) == 0) continue;
      }
      const T factor = at(r, col) / at(col, col);
      for (std::size_t c = col + 1; c < n; ++c) at(r, c) -= factor * at(col, c);
      b[r] -= factor * b[col];
      at(r, col) = T{0};
    }
  }

  std::vector<T> x(n);
  for (std::size_t i = n; i-- > 0;) {
    T acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= at(i, c) * x[c];
    x[i] = acc / at(i, i);
  }
  return x;
}

template <typename T>
std::vector<T> solve_level(const LevelSystem<T>& system) {
  return solve_dense<T>(system.matrix, system.rhs);
}

// A x - b, row by row.
template <typename T>
std::vector<T> residuals(const LevelSystem<T>& system, const std::vector<T>& x) {
  const std::size_t n = system.dimension();
  std::vector<T> r(n);
  for (std::size_t row = 0; row < n; ++row) {
    T acc = -system.rhs[row];
    for (std::size_t col = 0; col < n; ++col) acc += system.at(row, col) * x[col];
    r[row] = acc;
  }
  return r;
}

// Solves one level on top of `table` and appends it.
template <typename T>
void extend(BasicValueTable<T>& table, int total, const Strategy* level_strategy) {
  auto values = solve_level(build_level_system<T>(total, level_strategy, table));
  table.append_level(total, std::move(values), level_strategy);
}

// Values of every state at every level 2..max_total under `full`. Levels are
// solved bottom-up: a six always removes a stick, so level t only reads
// levels <= t.
template <typename T = Rational>
BasicValueTable<T> evaluate(const FullStrategy& full, int max_total) {
  if (max_total < 2) throw InvalidArgument("a game needs at least 2 sticks");
  if (!full.covers(max_total)) {
    throw MissingLevel("strategy does not cover every level up to " + std::to_string(max_total));
  }
  BasicValueTable<T> table;
  for (int t = 2; t <= max_total; ++t) {
    extend(table, t, t >= kMinDecisionTotal ? &full.level(t) : nullptr);
  }
  return table;
}

// Level values under `level_strategy`, reusing solved lower levels.
template <typename T>
std::vector<T> evaluate_level(int total, const Strategy& level_strategy, const BasicValueTable<T>& lower) {
  return solve_level(build_level_system<T>(total, &level_strategy, lower));
}

}  // namespace supersix
