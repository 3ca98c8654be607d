#pragma once

// Independent reference computations for the tests. Nothing here goes
// through the library's transition table or level systems: the game rules
// are written out again directly.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <tuple>

namespace oracle {

using Key = std::tuple<int, int, int>;  // lid, mover, opponent
using Policy = std::function<bool(int lid, int mover, int opponent)>;  // true = keep rolling

inline bool choice_exists(int lid, int mover, int opponent) {
  return lid + mover + opponent >= 4 && lid >= 1 && !(lid == 1 && opponent == 1);
}

// Gauss-Seidel sweeps over every state with at most `max_total` sticks:
//   V = 1/6 six + (5-j)/6 free + j/6 (1 - V(picked up, opponent to move)).
inline std::map<Key, long double> values(int max_total, const Policy& keep_rolling, long double tol = 1e-16L) {
  std::map<Key, long double> v;
  for (int t = 2; t <= max_total; ++t) {
    for (int j = 0; j <= std::min(5, t - 2); ++j) {
      for (int k = 1; k <= t - j - 1; ++k) v[{j, k, t - j - k}] = 0.5L;
    }
  }
  auto arrive = [&](int j, int k, int l) -> long double {
    if (!choice_exists(j, k, l) || keep_rolling(j, k, l)) return v.at({j, k, l});
    return 1.0L - v.at({j, l, k});
  };
  for (int sweep = 0; sweep < 200000; ++sweep) {
    long double change = 0;
    for (auto& [key, val] : v) {
      const auto [j, k, l] = key;
      long double next = 0;
      next += (k == 1 ? 1.0L : arrive(j, k - 1, l)) / 6;
      if (j < 5) next += (5 - j) * (k == 1 ? 1.0L : arrive(j + 1, k - 1, l)) / 6;
      if (j > 0) next += j * (1.0L - v.at({j - 1, l, k + 1})) / 6;
      change = std::max(change, std::fabs(next - val));
      val = next;
    }
    if (change < tol) break;
  }
  return v;
}

// Exact right-hand side of a state's equation given exact values for every
// state it can reach; equals the state's own value iff the equation holds.
template <typename Lookup>
mpq_class equation_rhs(int j, int k, int l, const Lookup& value, const Policy& keep_rolling) {
  auto arrive = [&](int a, int b, int c) -> mpq_class {
    if (!choice_exists(a, b, c) || keep_rolling(a, b, c)) return value(a, b, c);
    return mpq_class{1} - value(a, c, b);
  };
  mpq_class rhs{0};
  rhs += (k == 1 ? mpq_class{1} : arrive(j, k - 1, l)) / 6;
  if (j < 5) rhs += mpq_class{5 - j} * (k == 1 ? mpq_class{1} : arrive(j + 1, k - 1, l)) / 6;
  if (j > 0) rhs += mpq_class{j} * (mpq_class{1} - value(j - 1, l, k + 1)) / 6;
  rhs.canonicalize();
  return rhs;
}

}  // namespace oracle
