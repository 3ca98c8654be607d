#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "supersix/errors.hpp"
#include "supersix/export.hpp"
#include "supersix/game.hpp"
#include "supersix/level_system.hpp"
#include "supersix/optimizer.hpp"
#include "supersix/rational.hpp"
#include "supersix/tracker.hpp"
#include "supersix/value_table.hpp"

namespace supersix {

enum class AdviceAction : std::uint8_t { Continue, Stop, ForcedContinue };

inline std::string_view to_string(AdviceAction a) {
  switch (a) {
    case AdviceAction::Continue: return "continue";
    case AdviceAction::Stop: return "stop";
    case AdviceAction::ForcedContinue: return "forced-continue";
  }
  return "?";
}

// What to do on arriving at `state` after placing a stick.
struct Advice {
  GameState state;
  AdviceAction action = AdviceAction::ForcedContinue;
  Rational p_continue;              // optimal value of `state`
  std::optional<Rational> p_stop;   // 1 - optimal value of the mirror; absent when stopping is not a choice
  Rational p_win;
  bool tie = false;
};

// Read-only lookups over an optimal table. Construction does all the work.
class Advisor {
 public:
  explicit Advisor(ValueTable optimal) : table_(std::move(optimal)) {
    if (table_.max_total() < 2) throw InvalidArgument("empty table");
  }

  // Solves every level up to `cap`.
  static Advisor solve(int cap, Method method = Method::Staged, const OptimizerConfig& config = {}) {
    OptimizerConfig c = config;
    c.max_total = std::max(c.max_total, cap);
    if (cap < kMinDecisionTotal) return Advisor{evaluate<Rational>(FullStrategy{}, cap)};
    return Advisor{solve_optimal(cap, method, c).table};
  }

  // Loads a table exported as JSON and checks every value against an exact
  // re-evaluation of the strategies it carries.
  static Advisor preload(std::string_view json_text) {
    ValueTable table = parse_table_json_text(json_text);
    const ValueTable check = evaluate<Rational>(table.strategies(), table.max_total());
    for (int t = 2; t <= table.max_total(); ++t) {
      if (check.level(t) != table.level(t)) {
        throw InvalidArgument("preloaded level " + std::to_string(t) + " does not match its strategy");
      }
    }
    return Advisor{std::move(table)};
  }

  int cap() const noexcept { return table_.max_total(); }
  const ValueTable& table() const noexcept { return table_; }

  Advice advice(const GameState& s) const {
    validate(s);
    if (s.total() < 2 || s.lid > max_lid_at(s.total())) throw InvalidState("invalid game state " + to_string(s));
    if (s.total() > cap()) {
      throw CapExceeded("total " + std::to_string(s.total()) + " is above the precomputed cap of " +
                        std::to_string(cap()));
    }
    Advice a;
    a.state = s;
    a.p_continue = table_.value(s);
    if (s.total() < kMinDecisionTotal || !is_decision_point(s)) {
      a.action = AdviceAction::ForcedContinue;
      a.p_win = a.p_continue;
      return a;
    }
    a.p_stop = Rational{1 - table_.value(s.mirror())};
    a.tie = a.p_continue == *a.p_stop;
    a.action = a.p_continue >= *a.p_stop ? AdviceAction::Continue : AdviceAction::Stop;
    a.p_win = a.action == AdviceAction::Continue ? a.p_continue : *a.p_stop;
    return a;
  }

  void require_level(int total) const {
    if (total < 2 || total > cap()) {
      throw MissingLevel("no table for total " + std::to_string(total) + " (available 2.." + std::to_string(cap()) +
                         ")");
    }
  }

  Json level(int total) const {
    require_level(total);
    return level_json(table_, total);
  }

  Json optimal(int total) const {
    require_level(total);
    if (total < kMinDecisionTotal) throw MissingLevel("strategies exist from 4 sticks");
    return Json{{"max_total", total}, {"strategies", strategies_json(table_.strategies(), total)}};
  }

 private:
  ValueTable table_;
};

inline Json advice_json(const Advice& a) {
  Json out;
  out["state"] = state_json(a.state);
  out["total"] = a.state.total();
  out["action"] = to_string(a.action);
  out["decision"] = a.action != AdviceAction::ForcedContinue;
  out["tie"] = a.tie;
  out["p_continue"] = fraction_json(a.p_continue);
  out["p_stop"] = a.p_stop ? fraction_json(*a.p_stop) : Json(nullptr);
  out["p_win"] = fraction_json(a.p_win);
  return out;
}

inline Json tracker_state_json(const TrackerState& s) {
  Json out;
  out["state"] = state_json(s.state);
  out["to_move"] = s.a_to_move ? "A" : "B";
  out["may_stop"] = s.may_stop;
  out["winner"] = s.a_won ? Json(*s.a_won ? "A" : "B") : Json(nullptr);
  return out;
}

// Shared replay vectors: each sequence starts from an even split with A to
// move and lists the state after every event.
inline Json tracker_fixture_json(std::size_t count, std::uint64_t seed, int max_total = 15) {
  Json seqs = Json::array();
  for (const TrackerSequence& seq : random_tracker_sequences(count, seed, max_total)) {
    Json events = Json::array();
    Json states = Json::array();
    for (TrackerEvent e : seq.events) events.push_back(to_string(e));
    for (const TrackerState& s : seq.states) states.push_back(tracker_state_json(s));
    Json item;
    item["start"] = state_json(seq.start);
    item["events"] = std::move(events);
    item["states"] = std::move(states);
    item["final"] = seq.states.empty() ? tracker_state_json(TrackerState{seq.start, true, false, std::nullopt}) : tracker_state_json(seq.states.back());
    seqs.push_back(std::move(item));
  }
  return Json{{"seed", seed}, {"sequences", std::move(seqs)}};
}

}  // namespace supersix
