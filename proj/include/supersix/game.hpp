#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/rational.hpp"

namespace supersix {

// Holes 1..5 hold a stick upright; hole 6 drops it out of play.
inline constexpr int kMaxLid = 5;
inline constexpr int kDieFaces = 6;
// Totals 2 and 3 never offer a choice.
inline constexpr int kMinDecisionTotal = 4;

// A situation (lid/mover/opponent), seen by the player about to roll.
struct GameState {
  int lid = 0;
  int mover = 1;
  int opponent = 1;

  constexpr int total() const noexcept { return lid + mover + opponent; }
  // The same situation seen from the other player.
  constexpr GameState mirror() const noexcept { return {lid, opponent, mover}; }

  auto operator<=>(const GameState&) const = default;
};

constexpr bool is_valid(const GameState& s) noexcept {
  return s.lid >= 0 && s.lid <= kMaxLid && s.mover >= 1 && s.opponent >= 1;
}

inline std::string to_string(const GameState& s) {
  return "(" + std::to_string(s.lid) + "/" + std::to_string(s.mover) + "/" +
         std::to_string(s.opponent) + ")";
}

inline void validate(const GameState& s) {
  if (!is_valid(s)) throw InvalidState("invalid game state " + to_string(s));
}

// After a successful placement the mover may stop. The lid-empty case is
// always played on, and (1/k/1) can never be reached as a genuine choice.
constexpr bool is_decision_point(const GameState& s) noexcept {
  return is_valid(s) && s.lid >= 1 && !(s.lid == 1 && s.opponent == 1);
}

// (0/k/1) with k >= 2 only arises if someone stops with an empty lid.
constexpr bool is_reachable_in_play(const GameState& s) noexcept {
  return !(s.lid == 0 && s.opponent == 1 && s.mover >= 2);
}

constexpr int max_lid_at(int total) noexcept { return total - 2 < kMaxLid ? total - 2 : kMaxLid; }

// Number of states at a level: sum over lid j of (total - j - 1).
constexpr std::size_t state_count(int total) noexcept {
  std::size_t n = 0;
  for (int j = 0; j <= max_lid_at(total); ++j) n += static_cast<std::size_t>(total - j - 1);
  return n;
}

// Position of `s` in enumerate_states(s.total()).
constexpr std::size_t state_index(const GameState& s) noexcept {
  const int total = s.total();
  std::size_t offset = 0;
  for (int j = 0; j < s.lid; ++j) offset += static_cast<std::size_t>(total - j - 1);
  return offset + static_cast<std::size_t>(s.mover - 1);
}

inline std::vector<GameState> enumerate_states(int total) {
  if (total < 2) throw InvalidArgument("a game needs at least 2 sticks, got " + std::to_string(total));
  std::vector<GameState> states;
  states.reserve(state_count(total));
  for (int lid = 0; lid <= max_lid_at(total); ++lid) {
    for (int mover = 1; mover <= total - lid - 1; ++mover) {
      states.push_back({lid, mover, total - lid - mover});
    }
  }
  return states;
}

// Size of the lid-`lid` group of decision points at `total`.
constexpr int decision_group_size(int total, int lid) noexcept {
  if (lid < 1 || lid > max_lid_at(total)) return 0;
  return lid == 1 ? total - 3 : total - lid - 1;
}

constexpr std::size_t decision_point_count(int total) noexcept {
  if (total < kMinDecisionTotal) return 0;
  std::size_t n = 0;
  for (int lid = 1; lid <= max_lid_at(total); ++lid) n += static_cast<std::size_t>(decision_group_size(total, lid));
  return n;
}

// Position of a decision point in canonical order (lid ascending, then mover).
constexpr std::size_t decision_point_index(const GameState& s) noexcept {
  const int total = s.total();
  std::size_t offset = 0;
  for (int lid = 1; lid < s.lid; ++lid) offset += static_cast<std::size_t>(decision_group_size(total, lid));
  return offset + static_cast<std::size_t>(s.mover - 1);
}

inline std::vector<GameState> decision_points(int total) {
  if (total < kMinDecisionTotal) {
    throw InvalidArgument("decision points exist only from " + std::to_string(kMinDecisionTotal) +
                          " sticks, got " + std::to_string(total));
  }
  std::vector<GameState> points;
  points.reserve(decision_point_count(total));
  for (int lid = 1; lid <= max_lid_at(total); ++lid) {
    for (int mover = 1; mover <= decision_group_size(total, lid); ++mover) {
      points.push_back({lid, mover, total - lid - mover});
    }
  }
  return points;
}

// ---------------------------------------------------------------------------
// Single roll

enum class RollKind : std::uint8_t { Six, Free, Occupied };

inline std::string_view to_string(RollKind kind) {
  switch (kind) {
    case RollKind::Six: return "six";
    case RollKind::Free: return "free";
    case RollKind::Occupied: return "occupied";
  }
  return "?";
}

struct RollEvent {
  RollKind kind;
  int sixths;  // probability numerator over kDieFaces

  Rational probability() const { return make_rational(sixths, kDieFaces); }
};

enum class OutcomeKind : std::uint8_t {
  Impossible,  // zero-probability event
  Win,         // the mover placed their last stick
  Arrival,     // the mover placed a stick and now decides; same perspective
  Handover,    // the mover picked up a stick; state is the new mover's view
};

struct Transition {
  RollEvent event;
  OutcomeKind outcome;
  GameState state;  // meaningful for Arrival and Handover
};

// The three roll events from `s`, in the order Six, Free, Occupied.
inline std::array<Transition, 3> transitions(const GameState& s) {
  validate(s);
  const int free_holes = kMaxLid - s.lid;
  std::array<Transition, 3> out{};

  out[0].event = {RollKind::Six, 1};
  if (s.mover == 1) {
    out[0].outcome = OutcomeKind::Win;
  } else {
    out[0].outcome = OutcomeKind::Arrival;
    out[0].state = {s.lid, s.mover - 1, s.opponent};
  }

  out[1].event = {RollKind::Free, free_holes};
  if (free_holes == 0) {
    out[1].outcome = OutcomeKind::Impossible;
  } else if (s.mover == 1) {
    out[1].outcome = OutcomeKind::Win;
  } else {
    out[1].outcome = OutcomeKind::Arrival;
    out[1].state = {s.lid + 1, s.mover - 1, s.opponent};
  }

  out[2].event = {RollKind::Occupied, s.lid};
  if (s.lid == 0) {
    out[2].outcome = OutcomeKind::Impossible;
  } else {
    out[2].outcome = OutcomeKind::Handover;
    out[2].state = {s.lid - 1, s.opponent, s.mover + 1};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strategies

enum class Action : std::uint8_t { Stop = 0, Continue = 1 };

constexpr Action flip(Action a) noexcept { return a == Action::Stop ? Action::Continue : Action::Stop; }
constexpr char to_char(Action a) noexcept { return a == Action::Continue ? '1' : '0'; }

// Continue/stop bits over the decision points of one level.
class Strategy {
 public:
  Strategy() = default;

  explicit Strategy(int total, Action fill = Action::Continue)
      : total_(total), bits_(decision_point_count(total), fill) {
    if (total < kMinDecisionTotal) {
      throw InvalidArgument("strategies exist only from " + std::to_string(kMinDecisionTotal) + " sticks");
    }
  }

  Strategy(int total, std::vector<Action> bits) : Strategy(total) {
    if (bits.size() != bits_.size()) {
      throw InvalidArgument("expected " + std::to_string(bits_.size()) + " bits at total " +
                            std::to_string(total) + ", got " + std::to_string(bits.size()));
    }
    bits_ = std::move(bits);
  }

  int total() const noexcept { return total_; }
  std::size_t size() const noexcept { return bits_.size(); }
  const std::vector<Action>& bits() const noexcept { return bits_; }

  Action operator[](std::size_t i) const { return bits_.at(i); }
  void set(std::size_t i, Action a) { bits_.at(i) = a; }

  // Resolved action on arrival at `s`; non-decision arrivals play on.
  Action action_for(const GameState& s) const {
    if (!is_decision_point(s)) return Action::Continue;
    check_level(s);
    return bits_[decision_point_index(s)];
  }

  void set(const GameState& s, Action a) {
    if (!is_decision_point(s)) throw InvalidArgument(to_string(s) + " is not a decision point");
    check_level(s);
    bits_[decision_point_index(s)] = a;
  }

  Strategy with(const GameState& s, Action a) const {
    Strategy copy = *this;
    copy.set(s, a);
    return copy;
  }

  bool operator==(const Strategy&) const = default;

 private:
  void check_level(const GameState& s) const {
    if (s.total() != total_) {
      throw InvalidArgument("state " + to_string(s) + " is not at level " + std::to_string(total_));
    }
  }

  int total_ = kMinDecisionTotal;
  std::vector<Action> bits_;
};

inline std::string format_strategy(const Strategy& s) {
  std::string out;
  out.reserve(s.size() + kMaxLid);
  std::size_t i = 0;
  for (int lid = 1; lid <= max_lid_at(s.total()); ++lid) {
    if (lid > 1) out.push_back('/');
    for (int k = 0; k < decision_group_size(s.total(), lid); ++k) out.push_back(to_char(s[i++]));
  }
  return out;
}

// Groups are separated by '/', leftmost group is lid 1, and within a group
// the leftmost character is mover hand 1.
inline Strategy parse_strategy(std::string_view text, int total) {
  if (total < kMinDecisionTotal) {
    throw InvalidArgument("strategies exist only from " + std::to_string(kMinDecisionTotal) + " sticks");
  }
  const int groups = max_lid_at(total);
  std::vector<Action> bits;
  bits.reserve(decision_point_count(total));
  int group = 1;
  int in_group = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '/') {
      if (in_group != decision_group_size(total, group)) {
        throw ParseError("group " + std::to_string(group) + " has " + std::to_string(in_group) +
                             " characters, expected " + std::to_string(decision_group_size(total, group)),
                         pos);
      }
      if (++group > groups) {
        throw ParseError("too many groups, expected " + std::to_string(groups), pos);
      }
      in_group = 0;
    } else if (c == '0' || c == '1') {
      if (in_group == decision_group_size(total, group)) {
        throw ParseError("group " + std::to_string(group) + " is longer than " +
                             std::to_string(decision_group_size(total, group)),
                         pos);
      }
      bits.push_back(c == '1' ? Action::Continue : Action::Stop);
      ++in_group;
    } else {
      throw ParseError(std::string{"unexpected character '"} + c + "'", pos);
    }
  }
  if (group != groups) {
    throw ParseError("expected " + std::to_string(groups) + " groups, got " + std::to_string(group), text.size());
  }
  if (in_group != decision_group_size(total, group)) {
    throw ParseError("group " + std::to_string(group) + " has " + std::to_string(in_group) +
                         " characters, expected " + std::to_string(decision_group_size(total, group)),
                     text.size());
  }
  return Strategy{total, std::move(bits)};
}

// One Strategy per level from 4 up to max_total(). Play at total t consults
// only level t.
class FullStrategy {
 public:
  FullStrategy() = default;

  static FullStrategy uniform(int max_total, Action fill) {
    FullStrategy full;
    for (int t = kMinDecisionTotal; t <= max_total; ++t) full.set_level(Strategy{t, fill});
    return full;
  }

  int max_total() const noexcept {
    return levels_.empty() ? kMinDecisionTotal - 1 : levels_.rbegin()->first;
  }
  bool covers(int total) const noexcept {
    if (total < kMinDecisionTotal) return true;
    for (int t = kMinDecisionTotal; t <= total; ++t) {
      if (!levels_.contains(t)) return false;
    }
    return true;
  }

  bool has_level(int total) const noexcept { return levels_.contains(total); }

  const Strategy& level(int total) const {
    const auto it = levels_.find(total);
    if (it == levels_.end()) throw MissingLevel("no strategy for total " + std::to_string(total));
    return it->second;
  }

  void set_level(Strategy s) {
    const int t = s.total();
    levels_.insert_or_assign(t, std::move(s));
  }

  Action action_for(const GameState& s) const {
    if (!is_decision_point(s) || s.total() < kMinDecisionTotal) return Action::Continue;
    return level(s.total()).action_for(s);
  }

  const std::map<int, Strategy>& levels() const noexcept { return levels_; }

  bool operator==(const FullStrategy&) const = default;

 private:
  std::map<int, Strategy> levels_;
};

}  // namespace supersix
