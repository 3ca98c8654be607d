#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "supersix/advisor.hpp"
#include "supersix/errors.hpp"
#include "supersix/export.hpp"
#include "supersix/game.hpp"
#include "supersix/optimizer.hpp"
#include "supersix/service.hpp"
#include "supersix/simulator.hpp"
#include "supersix/tracker.hpp"

namespace supersix::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kLimit = 3, kInternal = 4 };

inline constexpr int kDefaultCap = 15;
inline constexpr std::string_view kCapEnv = "SUPERSIX_MAX_TOTAL";
inline constexpr double kDefaultMemoryBudgetMb = 256.0;

// --max-cap wins over the environment, which wins over the default.
inline int resolve_cap(std::optional<int> flag) {
  if (flag) {
    if (*flag < 2) throw InvalidArgument("--max-cap must be at least 2");
    return *flag;
  }
  if (const char* env = std::getenv(std::string{kCapEnv}.c_str()); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const int v = std::stoi(env, &used);
      if (used == std::string_view{env}.size() && v >= 2) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string{kCapEnv} + " must be an integer of at least 2");
  }
  return kDefaultCap;
}

inline void check_cap(int total, int cap) {
  if (total > cap) {
    throw CapExceeded("total " + std::to_string(total) + " exceeds the cap of " + std::to_string(cap) +
                      " (raise it with --max-cap or " + std::string{kCapEnv} + ")");
  }
}

// Rough peak for an exact solve up to `total`: one dense level system of
// rationals whose size grows with the level, plus the stored table.
inline double estimated_solve_bytes(int total) {
  double bytes = 0;
  for (int t = 2; t <= total; ++t) {
    const double n = static_cast<double>(state_count(t));
    const double per_value = 48.0 + 16.0 * t;
    bytes += n * per_value;
    if (t == total) bytes += n * n * per_value;
  }
  return bytes;
}

inline void warn_if_over_budget(int total, double budget_mb, std::ostream& err) {
  const double mb = estimated_solve_bytes(total) / (1024.0 * 1024.0);
  if (mb > budget_mb) {
    err << "warning: solving to " << total << " sticks needs an estimated " << static_cast<long long>(mb)
        << " MiB, above the budget of " << static_cast<long long>(budget_mb) << " MiB\n";
  }
}

// "optimal", "continue", "stop", a bare level string for `level`, or a
// comma list of TOTAL=STRING overrides on top of the optimal strategy.
inline FullStrategy parse_strategy_spec(std::string_view spec, int max_total, const FullStrategy& optimal,
                                        std::optional<int> level = std::nullopt) {
  if (spec == "optimal") return optimal;
  if (spec == "continue" || spec == "all-continue") return FullStrategy::uniform(max_total, Action::Continue);
  if (spec == "stop" || spec == "all-stop") return FullStrategy::uniform(max_total, Action::Stop);

  FullStrategy out = optimal;
  if (spec.find('=') == std::string_view::npos) {
    if (!level) throw InvalidArgument("strategy '" + std::string{spec} + "' needs a TOTAL= prefix");
    out.set_level(parse_strategy(spec, *level));
    return out;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::string_view item = spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected TOTAL=STRING", start);
    int t = 0;
    try {
      std::size_t used = 0;
      t = std::stoi(std::string{item.substr(0, eq)}, &used);
      if (used != eq) throw ParseError("malformed total", start + used);
    } catch (const std::logic_error&) {
      throw ParseError("malformed total", start);
    }
    if (t < kMinDecisionTotal || t > max_total) {
      throw InvalidArgument("strategy override for total " + std::to_string(t) + " is outside 4.." +
                            std::to_string(max_total));
    }
    const std::size_t body = start + eq + 1;
    try {
      out.set_level(parse_strategy(item.substr(eq + 1), t));
    } catch (const ParseError& e) {
      throw ParseError(e.detail(), body + e.position());
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::string strategy_spec_summary(const FullStrategy& s, int max_total) {
  std::string out;
  for (int t = kMinDecisionTotal; t <= max_total; ++t) {
    if (!out.empty()) out += ',';
    out += std::to_string(t) + "=" + format_strategy(s.level(t));
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in{path, std::ios::binary};
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f{path, std::ios::binary};
  if (!f) throw InvalidArgument("cannot write " + path);
  f << text;
}

struct Options {
  std::optional<int> max_cap;
  double memory_budget_mb = kDefaultMemoryBudgetMb;
  std::string method = "staged";

  // solve
  int solve_total = 0;
  std::string solve_strategy = "optimal";
  std::string solve_format = "text-pyramid";

  // optimal
  int optimal_max = 0;
  std::string optimal_format = "text";
  bool optimal_verbose = false;

  // gap
  int gap_min = 0;
  int gap_max = 0;
  std::string gap_output;

  // simulate
  int sim_total = 0;
  std::uint64_t sim_games = 100000;
  std::uint64_t sim_seed = 1;
  std::string sim_a = "optimal";
  std::string sim_b = "optimal";
  unsigned sim_threads = 0;

  // export
  std::optional<int> export_max;
  std::string export_format = "json";
  std::string export_output;

  // fixture
  std::size_t fixture_count = 200;
  std::uint64_t fixture_seed = 1;
  std::string fixture_output;

  // advise
  int advise_lid = 0;
  int advise_mover = 0;
  int advise_opponent = 0;

  // serve
  std::string serve_host = "127.0.0.1";
  int serve_port = kDefaultPort;
  std::string serve_cors = "*";
  std::string serve_preload;
};

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int solve() {
    const int cap = resolve_cap(o_.max_cap);
    const int t = o_.solve_total;
    if (t < 2) throw InvalidArgument("--total must be at least 2");
    check_cap(t, cap);
    warn_if_over_budget(t, o_.memory_budget_mb, err_);
    const ValueTable table = table_for(t, o_.solve_strategy, cap);
    if (o_.solve_format == "text-pyramid") {
      out_ << text_pyramid(table, t);
    } else if (o_.solve_format == "csv") {
      out_ << table_csv(table, t, t);
    } else {
      out_ << render_json(level_json(table, t));
    }
    return kOk;
  }

  int optimal() {
    const int cap = resolve_cap(o_.max_cap);
    const int t = o_.optimal_max;
    if (t < kMinDecisionTotal) throw InvalidArgument("--max-total must be at least 4");
    check_cap(t, cap);
    warn_if_over_budget(t, o_.memory_budget_mb, err_);
    const OptimalSolution sol = solve_optimal(t, parse_method(o_.method), config(cap));
    if (o_.optimal_verbose) {
      for (const LevelOutcome& level : sol.levels) {
        for (const std::string& note : level.notes) err_ << "note " << level.strategy.total() << ": " << note << '\n';
      }
    }
    if (o_.optimal_format == "json") {
      out_ << render_json(Json{{"max_total", t}, {"strategies", strategies_json(sol.strategy, t)}});
    } else {
      for (int level = kMinDecisionTotal; level <= t; ++level) out_ << format_strategy(sol.strategy.level(level)) << '\n';
    }
    return kOk;
  }

  int gap() {
    const int cap = resolve_cap(o_.max_cap);
    if (o_.gap_min < 2 || o_.gap_min > o_.gap_max) {
      throw InvalidArgument("need 2 <= --min-total <= --max-total");
    }
    check_cap(o_.gap_max, cap);
    warn_if_over_budget(o_.gap_max, o_.memory_budget_mb, err_);
    write_output(gap_csv(gap_table(o_.gap_min, o_.gap_max, config(cap))), o_.gap_output, out_);
    return kOk;
  }

  int simulate() {
    const int cap = resolve_cap(o_.max_cap);
    const int t = o_.sim_total;
    if (t < 2 || t % 2 != 0) throw InvalidArgument("--total must be an even number of at least 2");
    check_cap(t, cap);
    const FullStrategy optimal = optimal_strategy(t, cap);
    MatchConfig mc;
    mc.start_total = t;
    mc.strategy_a = parse_strategy_spec(o_.sim_a, t, optimal);
    mc.strategy_b = parse_strategy_spec(o_.sim_b, t, optimal);
    mc.games = o_.sim_games;
    mc.seed = o_.sim_seed;
    SimulationOptions so;
    so.cap = cap;
    so.threads = o_.sim_threads;
    const MatchResult r = supersix::simulate(mc, so);
    Json j;
    j["start_total"] = t;
    j["games"] = r.games;
    j["seed"] = mc.seed;
    j["wins_a"] = r.wins_a;
    j["estimate"] = r.estimate;
    j["stderr"] = r.std_error;
    j["strategy_a"] = t >= kMinDecisionTotal ? strategy_spec_summary(mc.strategy_a, t) : "";
    j["strategy_b"] = t >= kMinDecisionTotal ? strategy_spec_summary(mc.strategy_b, t) : "";
    out_ << render_json(j);
    return kOk;
  }

  int export_table() {
    const int cap = resolve_cap(o_.max_cap);
    const int t = o_.export_max.value_or(cap);
    if (t < 2) throw InvalidArgument("--max-total must be at least 2");
    check_cap(t, cap);
    warn_if_over_budget(t, o_.memory_budget_mb, err_);
    const ValueTable table = optimal_table(t, cap);
    write_output(o_.export_format == "csv" ? table_csv(table) : render_json(table_json(table)), o_.export_output,
                 out_);
    return kOk;
  }

  int fixture() {
    const int cap = resolve_cap(o_.max_cap);
    write_output(render_json(tracker_fixture_json(o_.fixture_count, o_.fixture_seed, cap)), o_.fixture_output, out_);
    return kOk;
  }

  int advise() {
    const int cap = resolve_cap(o_.max_cap);
    const GameState s{o_.advise_lid, o_.advise_mover, o_.advise_opponent};
    validate(s);
    if (s.total() < 2 || s.lid > max_lid_at(s.total())) throw InvalidState("invalid game state " + to_string(s));
    check_cap(s.total(), cap);
    const Advisor advisor{optimal_table(std::max(s.total(), 2), cap)};
    out_ << render_json(advice_json(advisor.advice(s)));
    return kOk;
  }

  int serve() {
    const int cap = resolve_cap(o_.max_cap);
    std::shared_ptr<const Advisor> advisor;
    if (!o_.serve_preload.empty()) {
      advisor = std::make_shared<const Advisor>(Advisor::preload(read_file(o_.serve_preload)));
      if (advisor->cap() > cap) check_cap(advisor->cap(), cap);
    } else {
      warn_if_over_budget(cap, o_.memory_budget_mb, err_);
      advisor = std::make_shared<const Advisor>(Advisor::solve(cap, parse_method(o_.method), config(cap)));
    }
    ServiceConfig sc;
    sc.host = o_.serve_host;
    sc.port = o_.serve_port;
    sc.cors_origin = o_.serve_cors;
    Service service{advisor, sc};
    err_ << "serving tables 2.." << advisor->cap() << " on http://" << sc.host << ':' << sc.port << '\n';
    if (!service.listen()) throw InvalidArgument("cannot listen on " + sc.host + ":" + std::to_string(sc.port));
    return kOk;
  }

 private:
  OptimizerConfig config(int cap) const {
    OptimizerConfig c;
    c.max_total = cap;
    return c;
  }

  ValueTable optimal_table(int total, int cap) const {
    if (total < kMinDecisionTotal) return evaluate<Rational>(FullStrategy{}, total);
    return solve_optimal(total, parse_method(o_.method), config(cap)).table;
  }

  FullStrategy optimal_strategy(int total, int cap) const {
    if (total < kMinDecisionTotal) return FullStrategy{};
    return solve_optimal(total, parse_method(o_.method), config(cap)).strategy;
  }

  ValueTable table_for(int total, const std::string& spec, int cap) const {
    if (total < kMinDecisionTotal) return evaluate<Rational>(FullStrategy{}, total);
    if (spec == "optimal") return optimal_table(total, cap);
    const FullStrategy base = spec == "continue" || spec == "all-continue" || spec == "stop" || spec == "all-stop"
                                  ? FullStrategy{}
                                  : optimal_strategy(total, cap);
    return evaluate<Rational>(parse_strategy_spec(spec, total, base, total), total);
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
};

// Full command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Super Six solver: exact win probabilities, optimal stopping strategies and simulations"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--max-cap", o.max_cap, "Largest total allowed (default 15, or $SUPERSIX_MAX_TOTAL)");
  app.add_option("--memory-budget-mb", o.memory_budget_mb, "Warn when a solve is estimated to need more");
  app.add_option("--method", o.method, "Optimizer: staged, exhaustive or policy")
      ->check(CLI::IsMember({"staged", "exhaustive", "policy"}));

  auto* solve = app.add_subcommand("solve", "Print every state's value at one level");
  solve->add_option("--total", o.solve_total, "Sticks in the game")->required();
  solve->add_option("--strategy", o.solve_strategy,
                    "optimal, continue, stop, a level string like 11/1, or TOTAL=STRING,...");
  solve->add_option("--format", o.solve_format)->check(CLI::IsMember({"text-pyramid", "csv", "json"}));

  auto* optimal = app.add_subcommand("optimal", "Print optimal strategy strings for levels 4..max-total");
  optimal->add_option("--max-total", o.optimal_max)->required();
  optimal->add_option("--method", o.method)->check(CLI::IsMember({"staged", "exhaustive", "policy"}));
  optimal->add_option("--format", o.optimal_format)->check(CLI::IsMember({"text", "json"}));
  optimal->add_flag("--verbose", o.optimal_verbose, "Print optimizer notes to stderr");

  auto* gap = app.add_subcommand("gap", "Continue-minus-stop gaps at lid 3 as CSV");
  gap->add_option("--min-total", o.gap_min)->required();
  gap->add_option("--max-total", o.gap_max)->required();
  gap->add_option("--output", o.gap_output, "File to write (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo match between two strategies");
  sim->add_option("--total", o.sim_total, "Even number of sticks, split evenly")->required();
  sim->add_option("--games", o.sim_games)->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.sim_seed);
  sim->add_option("--strategy-a", o.sim_a, "optimal, continue, stop, or TOTAL=STRING,... over optimal");
  sim->add_option("--strategy-b", o.sim_b);
  sim->add_option("--threads", o.sim_threads, "0 = all cores");

  auto* exp = app.add_subcommand("export", "Export the optimal table for levels 2..max-total");
  exp->add_option("--max-total", o.export_max);
  exp->add_option("--format", o.export_format)->check(CLI::IsMember({"csv", "json"}));
  exp->add_option("--output", o.export_output);

  auto* fix = app.add_subcommand("fixture", "Random tracker event sequences with expected states, as JSON");
  fix->add_option("--count", o.fixture_count);
  fix->add_option("--seed", o.fixture_seed);
  fix->add_option("--output", o.fixture_output);

  auto* adv = app.add_subcommand("advise", "Continue or stop after placing a stick");
  adv->add_option("--lid", o.advise_lid)->required();
  adv->add_option("--mover", o.advise_mover)->required();
  adv->add_option("--opponent", o.advise_opponent)->required();

  auto* serve = app.add_subcommand("serve", "Run the advisor HTTP service");
  serve->add_option("--host", o.serve_host);
  serve->add_option("--port", o.serve_port);
  serve->add_option("--cors-origin", o.serve_cors);
  serve->add_option("--preload", o.serve_preload, "Table JSON written by export");
  serve->add_option("--method", o.method)->check(CLI::IsMember({"staged", "exhaustive", "policy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Runner r{o, out, err};
  try {
    if (*solve) return r.solve();
    if (*optimal) return r.optimal();
    if (*gap) return r.gap();
    if (*sim) return r.simulate();
    if (*exp) return r.export_table();
    if (*fix) return r.fixture();
    if (*adv) return r.advise();
    if (*serve) return r.serve();
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kLimit;
  } catch (const SingularSystem& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    for (const std::string& s : e.visited()) err << "  visited " << s << '\n';
    return kInternal;
  } catch (const StageAssumptionViolated& e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

}  // namespace supersix::cli
