#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/game.hpp"
#include "supersix/rational.hpp"

namespace supersix {

template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static Rational from_int(long v) { return Rational{v}; }
  static Rational convert(const Rational& v) { return v; }
};

template <>
struct ScalarTraits<double> {
  static double from_int(long v) { return static_cast<double>(v); }
  static double convert(const Rational& v) { return v.get_d(); }
};

// Winning probability of the mover for every state of every level from 2 up
// to max_total(), together with the per-level strategies the values were
// computed under (needed to resolve what a player does on arrival).
template <typename T>
class BasicValueTable {
 public:
  using value_type = T;

  int max_total() const noexcept { return static_cast<int>(levels_.size()) - 1; }
  bool has_level(int total) const noexcept {
    return total >= 2 && total <= max_total() && !levels_[static_cast<std::size_t>(total)].empty();
  }

  // Levels must be appended in ascending order starting at 2.
  void append_level(int total, std::vector<T> values, const Strategy* strategy = nullptr) {
    if (total != max_total() + 1 && !(levels_.empty() && total == 2)) {
      throw InvalidArgument("levels must be appended in order; expected " + std::to_string(max_total() + 1) +
                            ", got " + std::to_string(total));
    }
    if (values.size() != state_count(total)) throw InvalidArgument("wrong number of values for level");
    if (levels_.empty()) levels_.resize(2);
    levels_.push_back(std::move(values));
    if (total >= kMinDecisionTotal) {
      strategies_.set_level(strategy != nullptr ? *strategy : Strategy{total, Action::Continue});
    }
  }

  const std::vector<T>& level(int total) const {
    require(total);
    return levels_[static_cast<std::size_t>(total)];
  }

  const T& value(const GameState& s) const {
    validate(s);
    return level(s.total())[state_index(s)];
  }

  // What a player is worth on arriving at `s` after placing a stick: keep
  // rolling (own value) or stop and hand the mirrored situation over.
  T arrival_value(const GameState& s) const {
    if (strategies_.action_for(s) == Action::Continue) return value(s);
    return ScalarTraits<T>::from_int(1) - value(s.mirror());
  }

  const FullStrategy& strategies() const noexcept { return strategies_; }

  // The same table restricted to levels 2..total.
  BasicValueTable prefix(int total) const {
    BasicValueTable out;
    for (int t = 2; t <= total; ++t) {
      out.append_level(t, level(t), t >= kMinDecisionTotal ? &strategies_.level(t) : nullptr);
    }
    return out;
  }

  template <typename U>
  BasicValueTable<U> convert() const {
    BasicValueTable<U> out;
    for (int t = 2; t <= max_total(); ++t) {
      std::vector<U> values;
      values.reserve(level(t).size());
      for (const T& v : level(t)) values.push_back(ScalarTraits<U>::convert(v));
      out.append_level(t, std::move(values), t >= kMinDecisionTotal ? &strategies_.level(t) : nullptr);
    }
    return out;
  }

 private:
  void require(int total) const {
    if (!has_level(total)) throw MissingLevel("value table has no level " + std::to_string(total));
  }

  std::vector<std::vector<T>> levels_;
  FullStrategy strategies_;
};

using ValueTable = BasicValueTable<Rational>;

}  // namespace supersix
