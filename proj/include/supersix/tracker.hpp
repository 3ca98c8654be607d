#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/game.hpp"

namespace supersix {

// Roll-by-roll bookkeeping of a physical game, as a companion app would do
// it. Player A is the one holding the device.
enum class TrackerEvent : std::uint8_t { RolledSix, RolledFree, RolledOccupied, Stopped };

inline std::string_view to_string(TrackerEvent e) {
  switch (e) {
    case TrackerEvent::RolledSix: return "rolled-six";
    case TrackerEvent::RolledFree: return "rolled-free";
    case TrackerEvent::RolledOccupied: return "rolled-occupied";
    case TrackerEvent::Stopped: return "stopped";
  }
  return "?";
}

inline TrackerEvent parse_tracker_event(std::string_view text) {
  for (TrackerEvent e : {TrackerEvent::RolledSix, TrackerEvent::RolledFree, TrackerEvent::RolledOccupied,
                         TrackerEvent::Stopped}) {
    if (text == to_string(e)) return e;
  }
  throw InvalidArgument("unknown tracker event '" + std::string{text} + "'");
}

struct TrackerState {
  GameState state;         // seen by the player to move
  bool a_to_move = true;
  bool may_stop = false;   // the mover has just placed a stick at a decision point
  std::optional<bool> a_won;

  bool finished() const noexcept { return a_won.has_value(); }
  bool operator==(const TrackerState&) const = default;
};

class Tracker {
 public:
  explicit Tracker(const GameState& start, bool a_to_move = true) {
    validate(start);
    current_.state = start;
    current_.a_to_move = a_to_move;
  }

  const TrackerState& current() const noexcept { return current_; }
  std::size_t history_size() const noexcept { return history_.size(); }

  bool is_legal(TrackerEvent e) const noexcept {
    if (current_.finished()) return false;
    switch (e) {
      case TrackerEvent::RolledSix: return true;
      case TrackerEvent::RolledFree: return current_.state.lid < kMaxLid;
      case TrackerEvent::RolledOccupied: return current_.state.lid > 0;
      case TrackerEvent::Stopped: return current_.may_stop;
    }
    return false;
  }

  std::vector<TrackerEvent> legal_events() const {
    std::vector<TrackerEvent> out;
    for (TrackerEvent e : {TrackerEvent::RolledSix, TrackerEvent::RolledFree, TrackerEvent::RolledOccupied,
                           TrackerEvent::Stopped}) {
      if (is_legal(e)) out.push_back(e);
    }
    return out;
  }

  // Applies `e` using the transitions game-core defines.
  const TrackerState& apply(TrackerEvent e) {
    if (!is_legal(e)) {
      throw InvalidArgument(std::string{"event "} + std::string{to_string(e)} + " is not legal in " +
                            to_string(current_.state));
    }
    history_.push_back(current_);
    TrackerState next = current_;
    next.may_stop = false;
    if (e == TrackerEvent::Stopped) {
      next.state = current_.state.mirror();
      next.a_to_move = !current_.a_to_move;
      current_ = next;
      return current_;
    }
    const auto tr = transitions(current_.state);
    const Transition& t = tr[e == TrackerEvent::RolledSix ? 0 : e == TrackerEvent::RolledFree ? 1 : 2];
    switch (t.outcome) {
      case OutcomeKind::Win:
        next.a_won = current_.a_to_move;
        break;
      case OutcomeKind::Arrival:
        next.state = t.state;
        next.may_stop = t.state.total() >= kMinDecisionTotal && is_decision_point(t.state);
        break;
      case OutcomeKind::Handover:
        next.state = t.state;
        next.a_to_move = !current_.a_to_move;
        break;
      case OutcomeKind::Impossible:
        throw InvalidState("impossible event");
    }
    current_ = next;
    return current_;
  }

  void undo() {
    if (history_.empty()) throw InvalidArgument("nothing to undo");
    current_ = history_.back();
    history_.pop_back();
  }

 private:
  TrackerState current_;
  std::vector<TrackerState> history_;
};

struct TrackerSequence {
  GameState start;
  std::vector<TrackerEvent> events;
  std::vector<TrackerState> states;  // after each event
};

// Random legal event sequences from even starting splits, for replay in
// other tracker implementations.
inline std::vector<TrackerSequence> random_tracker_sequences(std::size_t count, std::uint64_t seed,
                                                             int max_total = 15, std::size_t max_events = 60) {
  std::mt19937_64 rng{seed};
  std::uniform_int_distribution<int> half_dist(1, max_total / 2);
  std::uniform_int_distribution<std::size_t> length_dist(1, max_events);
  std::vector<TrackerSequence> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const int half = half_dist(rng);
    TrackerSequence seq;
    seq.start = {0, half, half};
    Tracker tracker{seq.start};
    const std::size_t length = length_dist(rng);
    while (seq.events.size() < length && !tracker.current().finished()) {
      const auto legal = tracker.legal_events();
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      const TrackerEvent e = legal[pick(rng)];
      seq.events.push_back(e);
      seq.states.push_back(tracker.apply(e));
    }
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace supersix
