#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "supersix/errors.hpp"
#include "supersix/game.hpp"
#include "supersix/optimizer.hpp"
#include "supersix/rational.hpp"
#include "supersix/value_table.hpp"

namespace supersix {

using Json = nlohmann::ordered_json;

// Decimal places used for probabilities in every table rendering.
inline constexpr int kTableDecimals = 3;
// Gaps at large totals are of order 1e-5, so they get more digits.
inline constexpr int kGapDecimals = 10;

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kTableCsvHeader = "total,lid,mover,opponent,numerator,denominator,decimal";
inline constexpr std::string_view kGapCsvHeader = "total,k,l,gap_numerator,gap_denominator,gap_decimal";

namespace detail {

inline void append_table_rows(std::ostringstream& os, const ValueTable& table, int total) {
  const std::vector<Rational>& values = table.level(total);
  for (const GameState& s : enumerate_states(total)) {
    const Rational& v = values[state_index(s)];
    os << total << ',' << s.lid << ',' << s.mover << ',' << s.opponent << ',' << numerator_string(v) << ','
       << denominator_string(v) << ',' << to_decimal(v, kTableDecimals) << '\n';
  }
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline int parse_int(const std::string& text, std::string_view what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidArgument("malformed " + std::string{what} + " '" + text + "'");
  }
  return v;
}

}  // namespace detail

// Rows ordered by (total, lid, mover), levels min_total..max_total.
inline std::string table_csv(const ValueTable& table, int min_total, int max_total) {
  std::ostringstream os;
  os << kTableCsvHeader << '\n';
  for (int t = min_total; t <= max_total; ++t) detail::append_table_rows(os, table, t);
  return os.str();
}

inline std::string table_csv(const ValueTable& table) { return table_csv(table, 2, table.max_total()); }

struct CsvRow {
  GameState state;
  Rational value;
};

// Reads rows written by table_csv back into exact values.
inline std::vector<CsvRow> parse_table_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::istringstream in{std::string{text}};
  std::string line;
  if (!std::getline(in, line) || line != kTableCsvHeader) throw InvalidArgument("missing table CSV header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split(line, ',');
    if (f.size() != 7) throw InvalidArgument("line " + std::to_string(line_no) + ": expected 7 fields");
    CsvRow row;
    row.state = {detail::parse_int(f[1], "lid"), detail::parse_int(f[2], "mover"),
                 detail::parse_int(f[3], "opponent")};
    validate(row.state);
    if (row.state.total() != detail::parse_int(f[0], "total")) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": total does not match state");
    }
    row.value = parse_rational(f[4] + "/" + f[5]);
    rows.push_back(row);
  }
  return rows;
}

inline std::string gap_csv(const std::vector<GapRecord>& records) {
  std::ostringstream os;
  os << kGapCsvHeader << '\n';
  for (const GapRecord& r : records) {
    os << r.total << ',' << r.state.mover << ',' << r.state.opponent << ',' << numerator_string(r.gap) << ','
       << denominator_string(r.gap) << ',' << to_decimal(r.gap, kGapDecimals) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

inline Json state_json(const GameState& s) {
  return Json{{"lid", s.lid}, {"mover", s.mover}, {"opponent", s.opponent}};
}

inline Json fraction_json(const Rational& v) {
  return Json{{"numerator", numerator_string(v)},
              {"denominator", denominator_string(v)},
              {"decimal", to_decimal(v, kTableDecimals)}};
}

// One level as an array ordered by (lid, mover). Used verbatim by both the
// CLI and the HTTP service.
inline Json level_json(const ValueTable& table, int total) {
  Json out = Json::array();
  const std::vector<Rational>& values = table.level(total);
  for (const GameState& s : enumerate_states(total)) {
    const Rational& v = values[state_index(s)];
    Json row{{"total", total}, {"lid", s.lid}, {"mover", s.mover}, {"opponent", s.opponent}};
    row["numerator"] = numerator_string(v);
    row["denominator"] = denominator_string(v);
    row["decimal"] = to_decimal(v, kTableDecimals);
    row["decision"] = total >= kMinDecisionTotal && is_decision_point(s);
    row["reachable"] = is_reachable_in_play(s);
    out.push_back(std::move(row));
  }
  return out;
}

// Strategy strings for levels 4..max_total, one object per level.
inline Json strategies_json(const FullStrategy& full, int max_total) {
  Json out = Json::array();
  for (int t = kMinDecisionTotal; t <= max_total; ++t) {
    out.push_back(Json{{"total", t}, {"strategy", format_strategy(full.level(t))}});
  }
  return out;
}

// The whole table: every level plus the strategies it was computed under.
// parse_table_json reads it back exactly.
inline Json table_json(const ValueTable& table) {
  Json out;
  out["max_total"] = table.max_total();
  out["strategies"] = strategies_json(table.strategies(), table.max_total());
  Json states = Json::array();
  for (int t = 2; t <= table.max_total(); ++t) {
    for (Json& row : level_json(table, t)) states.push_back(std::move(row));
  }
  out["states"] = std::move(states);
  return out;
}

inline ValueTable parse_table_json(const Json& doc) {
  try {
    const int max_total = doc.at("max_total").get<int>();
    if (max_total < 2) throw InvalidArgument("max_total must be at least 2");

    FullStrategy strategies;
    for (const Json& s : doc.at("strategies")) {
      const int t = s.at("total").get<int>();
      strategies.set_level(parse_strategy(s.at("strategy").get<std::string>(), t));
    }
    if (!strategies.covers(max_total)) throw InvalidArgument("strategies do not cover every level");

    std::vector<std::vector<Rational>> levels(static_cast<std::size_t>(max_total) + 1);
    std::vector<std::vector<bool>> seen(levels.size());
    for (int t = 2; t <= max_total; ++t) {
      levels[static_cast<std::size_t>(t)].resize(state_count(t));
      seen[static_cast<std::size_t>(t)].assign(state_count(t), false);
    }
    for (const Json& row : doc.at("states")) {
      const GameState s{row.at("lid").get<int>(), row.at("mover").get<int>(), row.at("opponent").get<int>()};
      validate(s);
      const int t = s.total();
      if (t > max_total || t < 2 || s.lid > max_lid_at(t)) throw InvalidArgument("state " + to_string(s) + " out of range");
      const std::size_t i = state_index(s);
      auto& flag = seen[static_cast<std::size_t>(t)];
      if (flag[i]) throw InvalidArgument("duplicate state " + to_string(s));
      flag[i] = true;
      levels[static_cast<std::size_t>(t)][i] =
          parse_rational(row.at("numerator").get<std::string>() + "/" + row.at("denominator").get<std::string>());
    }

    ValueTable table;
    for (int t = 2; t <= max_total; ++t) {
      for (bool b : seen[static_cast<std::size_t>(t)]) {
        if (!b) throw InvalidArgument("level " + std::to_string(t) + " is incomplete");
      }
      table.append_level(t, std::move(levels[static_cast<std::size_t>(t)]),
                         t >= kMinDecisionTotal ? &strategies.level(t) : nullptr);
    }
    return table;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string{"malformed table JSON: "} + e.what());
  }
}

inline ValueTable parse_table_json_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string{"malformed table JSON: "} + e.what());
  }
  return parse_table_json(doc);
}

// ---------------------------------------------------------------------------
// Text pyramid

// Rows from the fullest lid down to the empty lid, lid count on the left.
// Within a row the mover's hand decreases left to right; each cell shows the
// value to 3 places above "k l". Cells that cannot occur in play are
// bracketed.
inline std::string text_pyramid(const ValueTable& table, int total) {
  constexpr int cell = 10;
  const std::vector<Rational>& values = table.level(total);
  std::ostringstream os;
  os << "total " << total << '\n';
  for (int lid = max_lid_at(total); lid >= 0; --lid) {
    const int indent = lid * cell / 2;
    std::string top(static_cast<std::size_t>(4 + indent), ' ');
    std::string bottom = std::to_string(lid);
    bottom.resize(static_cast<std::size_t>(4 + indent), ' ');
    const int hand = total - lid;
    for (int k = hand - 1; k >= 1; --k) {
      const GameState s{lid, k, hand - k};
      std::string v = to_decimal(values[state_index(s)], kTableDecimals);
      if (!is_reachable_in_play(s)) v = "(" + v + ")";
      std::string counts = std::to_string(s.mover) + " " + std::to_string(s.opponent);
      auto center = [](std::string text) {
        const std::size_t pad = text.size() < cell ? (cell - text.size()) / 2 : 0;
        text.insert(0, pad, ' ');
        text.resize(std::max<std::size_t>(text.size(), cell), ' ');
        return text;
      };
      top += center(v);
      bottom += center(counts);
    }
    while (!top.empty() && top.back() == ' ') top.pop_back();
    while (!bottom.empty() && bottom.back() == ' ') bottom.pop_back();
    os << top << '\n' << bottom << '\n';
  }
  return os.str();
}

}  // namespace supersix
