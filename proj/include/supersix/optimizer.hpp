#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/game.hpp"
#include "supersix/level_system.hpp"
#include "supersix/rational.hpp"
#include "supersix/value_table.hpp"

namespace supersix {

struct OptimizerConfig {
  int max_total = 15;
  // Largest number of free decision points a dominance check may enumerate.
  int dominance_free_cap = 20;
  int exhaustive_cap = 8;
  int policy_iteration_cap = 64;
  // Floating-point comparisons closer than this are redone exactly.
  double exact_recheck_margin = 1e-9;
  // Keep exact per-completion value pairs in dominance reports.
  bool record_pairs = false;
};

enum class Method : std::uint8_t { Exhaustive, Staged, Policy };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Exhaustive: return "exhaustive";
    case Method::Staged: return "staged";
    case Method::Policy: return "policy";
  }
  return "?";
}

inline Method parse_method(std::string_view text) {
  if (text == "exhaustive") return Method::Exhaustive;
  if (text == "staged") return Method::Staged;
  if (text == "policy") return Method::Policy;
  throw InvalidArgument("unknown method '" + std::string{text} + "' (expected exhaustive, staged or policy)");
}

enum class Verdict : std::uint8_t { ContinueDominates, StopDominates, Mixed };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ContinueDominates: return "continue-dominates";
    case Verdict::StopDominates: return "stop-dominates";
    case Verdict::Mixed: return "mixed";
  }
  return "?";
}

// Value of the player who has just arrived at `point`, if they take `action`.
template <typename T>
T decision_value(const std::vector<T>& level_values, const GameState& point, Action action) {
  if (action == Action::Continue) return level_values[state_index(point)];
  return ScalarTraits<T>::from_int(1) - level_values[state_index(point.mirror())];
}

struct CompletionPair {
  std::vector<Action> completion;  // one action per free point, in order
  Rational value_continue;
  Rational value_stop;
};

struct DominanceReport {
  GameState point;
  Verdict verdict = Verdict::Mixed;
  std::size_t completions = 0;
  std::size_t continue_wins = 0;
  std::size_t stop_wins = 0;
  std::size_t ties = 0;
  std::size_t exact_rechecks = 0;
  // value_continue - value_stop over all completions.
  double min_margin = std::numeric_limits<double>::infinity();
  double max_margin = -std::numeric_limits<double>::infinity();
  std::vector<CompletionPair> pairs;  // filled when OptimizerConfig::record_pairs

  void finish() {
    if (continue_wins == completions) {
      verdict = Verdict::ContinueDominates;
    } else if (stop_wins == completions) {
      verdict = Verdict::StopDominates;
    } else {
      verdict = Verdict::Mixed;
    }
  }
};

// Solves one level under many strategies on top of a fixed exact lower table.
class LevelEvaluator {
 public:
  LevelEvaluator(int total, const ValueTable& lower)
      : total_(total), lower_(lower.prefix(total - 1)), lower_fast_(lower_.convert<double>()) {
    if (total < kMinDecisionTotal) throw InvalidArgument("no decisions below 4 sticks");
  }

  int total() const noexcept { return total_; }
  const ValueTable& lower() const noexcept { return lower_; }

  std::vector<double> fast(const Strategy& s) const { return evaluate_level<double>(total_, s, lower_fast_); }
  std::vector<Rational> exact(const Strategy& s) const { return evaluate_level<Rational>(total_, s, lower_); }

 private:
  int total_;
  ValueTable lower_;
  BasicValueTable<double> lower_fast_;
};

namespace detail {

inline Strategy assign(Strategy s, std::span<const GameState> points, std::uint64_t mask) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    s.set(points[i], ((mask >> i) & 1U) != 0 ? Action::Continue : Action::Stop);
  }
  return s;
}

inline std::vector<Action> mask_actions(std::size_t count, std::uint64_t mask) {
  std::vector<Action> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = ((mask >> i) & 1U) != 0 ? Action::Continue : Action::Stop;
  return out;
}

inline void check_free_cap(std::size_t free, const OptimizerConfig& config) {
  if (free > static_cast<std::size_t>(config.dominance_free_cap)) {
    throw CapExceeded("dominance check over " + std::to_string(free) + " free points exceeds the cap of " +
                      std::to_string(config.dominance_free_cap));
  }
}

inline bool contains(std::span<const GameState> points, const GameState& s) {
  return std::find(points.begin(), points.end(), s) != points.end();
}

// Records one comparison. `with_continue` / `with_stop` are the two complete
// strategies, used only when an exact re-evaluation is needed.
inline void record(DominanceReport& report, const LevelEvaluator& ev, double fast_continue, double fast_stop,
                   const Strategy& with_continue, const Strategy& with_stop, std::uint64_t completion,
                   std::size_t free_count, const OptimizerConfig& config) {
  const double margin = fast_continue - fast_stop;
  int sign = margin > 0 ? 1 : (margin < 0 ? -1 : 0);
  const bool close = std::abs(margin) <= config.exact_recheck_margin;
  if (close || config.record_pairs) {
    const Rational vc = decision_value(ev.exact(with_continue), report.point, Action::Continue);
    const Rational vs = decision_value(ev.exact(with_stop), report.point, Action::Stop);
    if (close) {
      ++report.exact_rechecks;
      const int c = cmp(vc, vs);
      sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
    }
    if (config.record_pairs) report.pairs.push_back({mask_actions(free_count, completion), vc, vs});
  }
  ++report.completions;
  if (sign > 0) {
    ++report.continue_wins;
  } else if (sign < 0) {
    ++report.stop_wins;
  } else {
    ++report.ties;
  }
  report.min_margin = std::min(report.min_margin, margin);
  report.max_margin = std::max(report.max_margin, margin);
}

// Every target is also free: one solve per assignment of `free`, shared by
// all targets.
inline std::vector<DominanceReport> shared_sweep(const LevelEvaluator& ev, const Strategy& context,
                                                 std::span<const GameState> targets,
                                                 std::span<const GameState> free, const OptimizerConfig& config) {
  check_free_cap(free.size() - 1, config);
  const std::size_t n_masks = std::size_t{1} << free.size();
  const std::size_t n_targets = targets.size();
  std::vector<std::size_t> bit_of(n_targets);
  for (std::size_t t = 0; t < n_targets; ++t) {
    bit_of[t] = static_cast<std::size_t>(std::find(free.begin(), free.end(), targets[t]) - free.begin());
  }

  // resolved[m * n_targets + t]: value at target t under assignment m.
  std::vector<double> resolved(n_masks * n_targets);
  for (std::uint64_t m = 0; m < n_masks; ++m) {
    const Strategy s = assign(context, free, m);
    const std::vector<double> v = ev.fast(s);
    for (std::size_t t = 0; t < n_targets; ++t) {
      resolved[m * n_targets + t] = decision_value(v, targets[t], s.action_for(targets[t]));
    }
  }

  std::vector<DominanceReport> reports(n_targets);
  for (std::size_t t = 0; t < n_targets; ++t) {
    DominanceReport& r = reports[t];
    r.point = targets[t];
    const std::uint64_t bit = std::uint64_t{1} << bit_of[t];
    for (std::uint64_t m = 0; m < n_masks; ++m) {
      if ((m & bit) != 0) continue;
      const std::uint64_t on = m | bit;
      // Index of the completion over the free points other than the target.
      const std::uint64_t completion = (m & (bit - 1)) | ((m >> 1) & ~(bit - 1));
      record(r, ev, resolved[on * n_targets + t], resolved[m * n_targets + t], assign(context, free, on),
             assign(context, free, m), completion, free.size() - 1, config);
    }
    r.finish();
  }
  return reports;
}

// Targets and free points are disjoint: per assignment of `free`, one solve
// with the targets at their context action plus one per flipped target.
inline std::vector<DominanceReport> flip_sweep(const LevelEvaluator& ev, const Strategy& context,
                                               std::span<const GameState> targets,
                                               std::span<const GameState> free, const OptimizerConfig& config) {
  check_free_cap(free.size(), config);
  const std::size_t n_masks = std::size_t{1} << free.size();
  std::vector<DominanceReport> reports(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) reports[t].point = targets[t];

  for (std::uint64_t m = 0; m < n_masks; ++m) {
    const Strategy base = assign(context, free, m);
    const std::vector<double> v_base = ev.fast(base);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const GameState& p = targets[t];
      const Action a = base.action_for(p);
      const Strategy flipped = base.with(p, flip(a));
      const std::vector<double> v_flip = ev.fast(flipped);
      const double on_base = decision_value(v_base, p, a);
      const double on_flip = decision_value(v_flip, p, flip(a));
      if (a == Action::Continue) {
        record(reports[t], ev, on_base, on_flip, base, flipped, m, free.size(), config);
      } else {
        record(reports[t], ev, on_flip, on_base, flipped, base, m, free.size(), config);
      }
    }
  }
  for (DominanceReport& r : reports) r.finish();
  return reports;
}

}  // namespace detail

// Compares continue against stop at each target over every assignment of the
// free points (a target's own bit is never part of its completions). Bits
// outside targets and free points come from `context`.
inline std::vector<DominanceReport> dominance_reports(const LevelEvaluator& ev, const Strategy& context,
                                                      std::span<const GameState> targets,
                                                      std::span<const GameState> free,
                                                      const OptimizerConfig& config = {}) {
  if (context.total() != ev.total()) throw InvalidArgument("context strategy is at the wrong level");
  for (const GameState& p : targets) {
    if (!is_decision_point(p) || p.total() != ev.total()) {
      throw InvalidArgument(to_string(p) + " is not a decision point at level " + std::to_string(ev.total()));
    }
  }
  const bool all_free = std::all_of(targets.begin(), targets.end(),
                                    [&](const GameState& p) { return detail::contains(free, p); });
  if (all_free && !targets.empty()) return detail::shared_sweep(ev, context, targets, free, config);
  const bool none_free = std::none_of(targets.begin(), targets.end(),
                                      [&](const GameState& p) { return detail::contains(free, p); });
  if (none_free) return detail::flip_sweep(ev, context, targets, free, config);

  std::vector<DominanceReport> out;
  for (const GameState& p : targets) {
    std::vector<GameState> others;
    for (const GameState& f : free) {
      if (f != p) others.push_back(f);
    }
    const GameState single[] = {p};
    out.push_back(detail::flip_sweep(ev, context, single, others, config).front());
  }
  return out;
}

// `point` must not be among `free_points`.
inline DominanceReport dominance_at(const GameState& point, const LevelEvaluator& ev, const Strategy& context,
                                    std::span<const GameState> free_points, const OptimizerConfig& config = {}) {
  if (detail::contains(free_points, point)) {
    throw InvalidArgument(to_string(point) + " cannot be among its own free points");
  }
  const GameState single[] = {point};
  return dominance_reports(ev, context, single, free_points, config).front();
}

inline DominanceReport dominance_at(const GameState& point, int total, const ValueTable& lower,
                                    std::span<const GameState> free_points, const Strategy& context,
                                    const OptimizerConfig& config = {}) {
  return dominance_at(point, LevelEvaluator{total, lower}, context, free_points, config);
}

// ---------------------------------------------------------------------------
// Per-level optimizers

struct LevelOutcome {
  Strategy strategy;
  Method method = Method::Staged;
  std::vector<DominanceReport> reports;
  std::vector<std::string> notes;
  int iterations = 0;  // policy iteration only
};

inline LevelOutcome staged_level(int total, const ValueTable& lower, const OptimizerConfig& config = {});

// Every bit set to its dominating action over all completions of the other
// points. Falls back to the staged procedure when any verdict is mixed.
inline LevelOutcome exhaustive_level(int total, const ValueTable& lower, const OptimizerConfig& config = {}) {
  if (total > config.exhaustive_cap) {
    throw ExhaustiveCapExceeded("exhaustive optimisation is capped at " + std::to_string(config.exhaustive_cap) +
                                " sticks, got " + std::to_string(total));
  }
  const LevelEvaluator ev{total, lower};
  const std::vector<GameState> points = decision_points(total);
  LevelOutcome out{Strategy{total}, Method::Exhaustive, {}, {}, 0};
  out.reports = dominance_reports(ev, out.strategy, points, points, config);

  bool mixed = false;
  for (const DominanceReport& r : out.reports) {
    if (r.verdict == Verdict::Mixed) {
      mixed = true;
      out.notes.push_back("mixed verdict at " + to_string(r.point) + ": continue better in " +
                          std::to_string(r.continue_wins) + ", stop in " + std::to_string(r.stop_wins) + " of " +
                          std::to_string(r.completions));
    } else {
      out.strategy.set(r.point, r.verdict == Verdict::ContinueDominates ? Action::Continue : Action::Stop);
    }
  }
  if (!mixed) return out;
  if (total < 7) {
    throw StageAssumptionViolated("no dominating action at every decision point for total " + std::to_string(total));
  }
  LevelOutcome staged = staged_level(total, lower, config);
  staged.method = Method::Exhaustive;
  staged.notes.insert(staged.notes.begin(), out.notes.begin(), out.notes.end());
  staged.notes.insert(staged.notes.begin(), "exhaustive search failed over to the staged procedure");
  return staged;
}

// Lids 1-2 continue and lids 4-5 stop are first verified to dominate; the
// lid-3 bits are then settled one at a time (mover hand ascending), each over
// all completions of the lid-3 bits not yet settled.
inline LevelOutcome staged_level(int total, const ValueTable& lower, const OptimizerConfig& config) {
  if (total < 7) throw InvalidArgument("the staged procedure applies from 7 sticks, got " + std::to_string(total));
  const LevelEvaluator ev{total, lower};
  const std::vector<GameState> points = decision_points(total);

  std::vector<GameState> settled;
  std::vector<GameState> lid3;
  Strategy context{total};
  for (const GameState& p : points) {
    if (p.lid == 3) {
      lid3.push_back(p);
    } else {
      settled.push_back(p);
      context.set(p, p.lid <= 2 ? Action::Continue : Action::Stop);
    }
  }

  LevelOutcome out{context, Method::Staged, {}, {}, 0};

  // Stage 1. With every other point free when that is affordable; otherwise
  // the undecided lid-3 group is free and the other settled bits are held.
  std::vector<DominanceReport> stage1;
  if (points.size() - 1 <= static_cast<std::size_t>(config.dominance_free_cap)) {
    stage1 = dominance_reports(ev, context, settled, points, config);
  } else {
    stage1 = dominance_reports(ev, context, settled, lid3, config);
    out.notes.push_back("stage 1 completions range over the lid-3 group only");
  }
  for (const DominanceReport& r : stage1) {
    const Verdict expected = r.point.lid <= 2 ? Verdict::ContinueDominates : Verdict::StopDominates;
    if (r.verdict != expected) {
      throw StageAssumptionViolated("at " + to_string(r.point) + " expected " + std::string{to_string(expected)} +
                                    " but found " + std::string{to_string(r.verdict)} + " (continue " +
                                    std::to_string(r.continue_wins) + ", stop " + std::to_string(r.stop_wins) +
                                    ", ties " + std::to_string(r.ties) + " of " + std::to_string(r.completions) +
                                    ")");
    }
  }
  out.reports = std::move(stage1);

  // Stage 2.
  for (std::size_t i = 0; i < lid3.size(); ++i) {
    const std::span<const GameState> later{lid3.data() + i + 1, lid3.size() - i - 1};
    DominanceReport r = dominance_at(lid3[i], ev, out.strategy, later, config);
    Action a;
    if (r.verdict == Verdict::ContinueDominates) {
      a = Action::Continue;
    } else if (r.verdict == Verdict::StopDominates) {
      a = Action::Stop;
    } else {
      a = r.continue_wins >= r.stop_wins ? Action::Continue : Action::Stop;
      out.notes.push_back("mixed verdict at " + to_string(r.point) + " settled by majority (continue " +
                          std::to_string(r.continue_wins) + ", stop " + std::to_string(r.stop_wins) + ")");
    }
    out.strategy.set(lid3[i], a);
    out.reports.push_back(std::move(r));
  }
  return out;
}

// Exact policy iteration on the symmetric game: both players share the
// strategy, and each bit moves to whichever of P(point) and
// 1 - P(mirror(point)) is strictly larger. Ties keep the current bit.
inline LevelOutcome policy_iteration_level(int total, const ValueTable& lower, Strategy initial,
                                           const OptimizerConfig& config = {}) {
  if (initial.total() != total) throw InvalidArgument("initial strategy is at the wrong level");
  const LevelEvaluator ev{total, lower};
  const std::vector<GameState> points = decision_points(total);
  LevelOutcome out{std::move(initial), Method::Policy, {}, {}, 0};
  std::vector<std::string> visited{format_strategy(out.strategy)};

  for (int it = 0; it < config.policy_iteration_cap; ++it) {
    const std::vector<Rational> v = ev.exact(out.strategy);
    Strategy next = out.strategy;
    for (const GameState& p : points) {
      const int c = cmp(decision_value(v, p, Action::Continue), decision_value(v, p, Action::Stop));
      if (c > 0) {
        next.set(p, Action::Continue);
      } else if (c < 0) {
        next.set(p, Action::Stop);
      } else {
        out.notes.push_back("tie at " + to_string(p) + " in iteration " + std::to_string(it));
      }
    }
    out.iterations = it + 1;
    if (next == out.strategy) return out;
    out.strategy = std::move(next);
    visited.push_back(format_strategy(out.strategy));
  }
  throw NonConvergence("policy iteration did not converge within " + std::to_string(config.policy_iteration_cap) +
                           " iterations at total " + std::to_string(total),
                       std::move(visited));
}

inline Strategy exhaustive_optimal_level(int total, const ValueTable& lower, const OptimizerConfig& config = {}) {
  return exhaustive_level(total, lower, config).strategy;
}

inline Strategy staged_optimal_level(int total, const ValueTable& lower, const OptimizerConfig& config = {}) {
  return staged_level(total, lower, config).strategy;
}

inline Strategy policy_iteration_optimal_level(int total, const ValueTable& lower, const Strategy& initial,
                                               const OptimizerConfig& config = {}) {
  return policy_iteration_level(total, lower, initial, config).strategy;
}

// ---------------------------------------------------------------------------
// All levels

struct OptimalSolution {
  FullStrategy strategy;
  ValueTable table;  // exact values under `strategy`, levels 2..max_total
  std::vector<LevelOutcome> levels;
};

inline void check_total_cap(int max_total, const OptimizerConfig& config) {
  if (max_total > config.max_total) {
    throw CapExceeded("total " + std::to_string(max_total) + " exceeds the cap of " +
                      std::to_string(config.max_total));
  }
}

inline LevelOutcome optimize_level(int total, const ValueTable& lower, Method method, const OptimizerConfig& config) {
  switch (method) {
    case Method::Exhaustive:
      return exhaustive_level(total, lower, config);
    case Method::Staged:
      if (total < 7) {
        LevelOutcome o = exhaustive_level(total, lower, config);
        o.method = Method::Staged;
        return o;
      }
      return staged_level(total, lower, config);
    case Method::Policy:
      return policy_iteration_level(total, lower, Strategy{total}, config);
  }
  throw InvalidArgument("unknown method");
}

// Levels are optimised bottom-up, each on top of the optimal lower levels;
// play never moves to a larger total, so this is exact.
inline OptimalSolution solve_optimal(int max_total, Method method = Method::Staged,
                                     const OptimizerConfig& config = {}) {
  if (max_total < 2) throw InvalidArgument("a game needs at least 2 sticks");
  check_total_cap(max_total, config);
  OptimalSolution out;
  for (int t = 2; t <= std::min(max_total, kMinDecisionTotal - 1); ++t) extend(out.table, t, nullptr);
  for (int t = kMinDecisionTotal; t <= max_total; ++t) {
    LevelOutcome level = optimize_level(t, out.table, method, config);
    out.strategy.set_level(level.strategy);
    extend(out.table, t, &level.strategy);
    out.levels.push_back(std::move(level));
  }
  return out;
}

inline FullStrategy optimal_full(int max_total, Method method = Method::Staged, const OptimizerConfig& config = {}) {
  if (max_total < kMinDecisionTotal) throw InvalidArgument("optimal strategies exist from 4 sticks");
  return solve_optimal(max_total, method, config).strategy;
}

// ---------------------------------------------------------------------------
// Continue-minus-stop gaps at lid 3

struct GapRecord {
  int total;
  GameState state;  // (3/k/l)
  Rational gap;     // P_continue - P_stop; negative means stopping is better
};

// Every lid-3 decision point with total in [min_total, max_total], each bit
// evaluated both ways with all other bits at their optimal values.
inline std::vector<GapRecord> gap_table(const OptimalSolution& optimal, int min_total, int max_total) {
  if (min_total > max_total) throw InvalidArgument("min-total exceeds max-total");
  if (max_total > optimal.table.max_total()) throw MissingLevel("optimal solution does not reach max-total");
  std::vector<GapRecord> out;
  for (int t = std::max(min_total, 5); t <= max_total; ++t) {
    const LevelEvaluator ev{t, optimal.table};
    const Strategy& best = optimal.strategy.level(t);
    const std::vector<Rational>& v_best = optimal.table.level(t);
    for (const GameState& p : decision_points(t)) {
      if (p.lid != 3) continue;
      const Action a = best.action_for(p);
      const std::vector<Rational> v_flip = ev.exact(best.with(p, flip(a)));
      const std::vector<Rational>& v_cont = a == Action::Continue ? v_best : v_flip;
      const std::vector<Rational>& v_stop = a == Action::Continue ? v_flip : v_best;
      out.push_back({t, p,
                     Rational{decision_value(v_cont, p, Action::Continue) - decision_value(v_stop, p, Action::Stop)}});
    }
  }
  return out;
}

inline std::vector<GapRecord> gap_table(int min_total, int max_total, const OptimizerConfig& config = {}) {
  if (min_total < 2) throw InvalidArgument("min-total must be at least 2");
  check_total_cap(max_total, config);
  if (max_total < 5) return {};
  return gap_table(solve_optimal(max_total, Method::Staged, config), min_total, max_total);
}

}  // namespace supersix
