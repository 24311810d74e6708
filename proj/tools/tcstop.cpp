#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "tcstop/blend.hpp"
#include "tcstop/equilibrium.hpp"
#include "tcstop/error.hpp"
#include "tcstop/golden.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/mean_variance.hpp"
#include "tcstop/model_io.hpp"
#include "tcstop/montecarlo.hpp"
#include "tcstop/pure_stopping.hpp"
#include "tcstop/randomized.hpp"

namespace {

using nlohmann::json;
using namespace tcstop;

constexpr const char* kVersion = "0.3.0";

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kCapacity = 3,
  kIncomplete = 4,
  kGoldenMismatch = 5,
};

struct Globals {
  std::string model_path;
  double tol = kDefaultEquilibriumTol;
  double grid = 1e-3;
  std::uint64_t seed = 1;
  bool json = false;
  std::string out;
};

// What a subcommand hands back: a JSON payload, a human-readable rendering
// and the exit code.
struct Outcome {
  json results;
  std::string text;
  int code = kOk;
};

struct Options {
  std::string criterion = "msd";
  std::string start;
  std::string region;
  int from = 1;
  std::string strategy;
  std::string blend;
  std::string kind = "liq";
  std::size_t paths = 100000;
  std::size_t max_steps = 1000000;
  std::string free;
  std::string watch;
  std::size_t max_transient = 3;
  std::string example;
  std::string data_dir;
  bool all_examples = false;
};

Criterion criterion_of(const std::string& s) {
  if (auto c = parse_criterion(s)) return *c;
  throw ValidationError("unknown criterion '" + s + "' (expected msd or mv)");
}

std::vector<std::string> split_ids(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<StateIndex> indices_of(const MarkovModel& m, const std::string& list) {
  std::vector<StateIndex> out;
  for (const auto& id : split_ids(list)) out.push_back(m.require_index(id));
  return out;
}

std::string num(double v) { return fmt::format("{:.10g}", v); }

json ids_json(const MarkovModel& m, const std::vector<StateIndex>& xs) {
  json a = json::array();
  for (StateIndex x : xs) a.push_back(m.state_ids[x]);
  return a;
}

json per_state(const MarkovModel& m, const std::vector<double>& v) {
  json o = json::object();
  for (std::size_t x = 0; x < m.size(); ++x) o[m.state_ids[x]] = v[x];
  return o;
}

const MarkovModel& need_model(const std::optional<MarkovModel>& m) {
  if (!m) throw ValidationError("--model is required for this command");
  return *m;
}

std::string need(const std::string& value, const char* flag) {
  if (value.empty()) throw ValidationError(std::string(flag) + " is required for this command");
  return value;
}

Outcome cmd_validate(const MarkovModel& m) {
  const auto report = validate_model(m);
  const auto cls = classify_states(m);
  Outcome o;
  o.results = {{"ok", report.ok()},
               {"states", m.size()},
               {"c", m.c},
               {"absorbing", ids_json(m, cls.absorbing)},
               {"transient", ids_json(m, cls.transient)}};
  o.text = fmt::format("model '{}': {} states, c = {}\n{}\n", m.name, m.size(), num(m.c),
                       report.ok() ? "valid" : report.summary());
  o.code = report.ok() ? kOk : kValidation;
  return o;
}

Outcome cmd_classify(const MarkovModel& m) {
  const auto cls = classify_states(m);
  Outcome o;
  o.results = {{"absorbing", ids_json(m, cls.absorbing)}, {"transient", ids_json(m, cls.transient)}};
  std::string abs, tr;
  for (auto x : cls.absorbing) abs += " " + m.state_ids[x];
  for (auto x : cls.transient) tr += " " + m.state_ids[x];
  o.text = fmt::format("absorbing:{}\ntransient:{}\n", abs, tr);
  return o;
}

Outcome cmd_pure_eval(const MarkovModel& m, const Options& opt) {
  const StateIndex start = m.require_index(need(opt.start, "--start"));
  const auto s = StoppingRegion(indices_of(m, need(opt.region, "--region"))).normalized(m);
  const HitFrom from = opt.from == 0 ? HitFrom::Zero : HitFrom::One;
  const auto ev = evaluate_region(m, start, s, from);
  const auto law = hitting_law(m, start, s, from);
  json dist = json::object();
  std::string rows;
  for (StateIndex x : s.members()) {
    dist[m.state_ids[x]] = law.probs[x];
    rows += fmt::format("  P(X = {}) = {}\n", num(m.values[x]), num(law.probs[x]));
  }
  Outcome o;
  o.results = {{"start", m.state_ids[start]}, {"region", s.to_string(m)}, {"from", opt.from},
               {"mean", ev.mean}, {"second_moment", ev.second_moment}, {"variance", ev.variance},
               {"k_value", ev.k_value}, {"j_value", ev.j_value}, {"law", dist}};
  o.text = fmt::format("region {} from {} (rho >= {})\n{}mean {}  E[X^2] {}  var {}\nK {}  J {}\n",
                       s.to_string(m), m.state_ids[start], opt.from, rows, num(ev.mean),
                       num(ev.second_moment), num(ev.variance), num(ev.k_value), num(ev.j_value));
  return o;
}

Outcome cmd_pure_equilibria(const MarkovModel& m, Criterion c, double tol) {
  const auto regions = c == Criterion::MeanStd ? enumerate_pure_equilibria(m, c, tol)
                                               : enumerate_pure_equilibria_mv(m, tol);
  Outcome o;
  json list = json::array();
  o.text = fmt::format("{} pure equilibria ({})\n", regions.size(), to_string(c));
  for (const auto& s : regions) {
    const auto verdict = is_equilibrium_region(m, s, c, tol);
    json margins = json::array();
    o.text += "  " + s.to_string(m) + "\n";
    for (const auto& mg : verdict.margins) {
      margins.push_back({{"state", m.state_ids[mg.state]}, {"in_region", mg.in_region},
                         {"value", mg.value}, {"continuation", mg.continuation},
                         {"margin", mg.margin}});
    }
    list.push_back({{"region", s.to_string(m)}, {"margins", margins}});
  }
  o.results = {{"criterion", std::string(to_string(c))}, {"equilibria", list}};
  return o;
}

Outcome cmd_static_opt(const MarkovModel& m, const Options& opt) {
  const Criterion c = criterion_of(opt.criterion);
  const auto best = static_optimum(m, m.require_index(need(opt.start, "--start")), c);
  json regions = json::array();
  std::string list;
  for (const auto& s : best.maximizers) {
    regions.push_back(s.to_string(m));
    list += "  " + s.to_string(m) + "\n";
  }
  Outcome o;
  o.results = {{"criterion", std::string(to_string(c))}, {"start", opt.start}, {"value", best.value},
               {"maximizers", regions}, {"regions_searched", best.regions_searched}};
  o.text = fmt::format("sup over stopping regions from {} ({}): {}\nattained by\n{}", opt.start,
                       to_string(c), num(best.value), list);
  return o;
}

Outcome cmd_rand_check(const MarkovModel& m, const Options& opt, double tol) {
  const auto loaded = load_strategy(need(opt.strategy, "--strategy"), m);
  const Criterion c = criterion_of(opt.criterion);
  const auto p = loaded.randomized();
  const auto verdict = c == Criterion::MeanStd ? is_equilibrium_randomized(m, p, tol, c)
                                               : is_equilibrium_randomized_mv(m, p, tol);
  Outcome o;
  json states = json::array();
  o.text = fmt::format("randomized strategy is {}an equilibrium ({})\n",
                       verdict.equilibrium ? "" : "not ", to_string(c));
  for (const auto& d : verdict.states) {
    states.push_back({{"state", m.state_ids[d.state]}, {"p", p.p[d.state]}, {"best_q", d.q},
                      {"best_value", d.value}, {"on_path", d.on_path}});
    o.text += fmt::format("  {}: p {}  on-path {}  best q {} -> {}\n", m.state_ids[d.state],
                          num(p.p[d.state]), num(d.on_path), num(d.q), num(d.value));
  }
  o.results = {{"criterion", std::string(to_string(c))}, {"equilibrium", verdict.equilibrium},
               {"states", states}, {"warnings", loaded.warnings}};
  return o;
}

Outcome cmd_liq_moments(const MarkovModel& m, const Options& opt) {
  const auto loaded = load_strategy(need(opt.strategy, "--strategy"), m);
  const auto s = loaded.liquidation();
  const auto mom = liquidation_moments(m, s);
  const auto g_msd = continuation_values(m, mom, Criterion::MeanStd);
  const auto g_mv = continuation_values(m, mom, Criterion::MeanVariance);
  Outcome o;
  o.results = {{"eta", per_state(m, s.eta)},
               {"value_mean", per_state(m, mom.value_mean)},
               {"value_second", per_state(m, mom.value_second)},
               {"cont_mean", per_state(m, mom.cont_mean)},
               {"cont_second", per_state(m, mom.cont_second)},
               {"cont_variance", per_state(m, mom.cont_variance)},
               {"g_msd", per_state(m, g_msd)},
               {"g_mv", per_state(m, g_mv)},
               {"warnings", loaded.warnings}};
  o.text = fmt::format("{:>8} {:>8} {:>14} {:>14} {:>14} {:>14} {:>14}\n", "state", "eta", "V", "W",
                       "E[Y]", "Var[Y]", "g (msd)");
  for (std::size_t x = 0; x < m.size(); ++x) {
    o.text += fmt::format("{:>8} {:>8.4g} {:>14.10g} {:>14.10g} {:>14.10g} {:>14.10g} {:>14.10g}\n",
                          m.state_ids[x], s.eta[x], mom.value_mean[x], mom.value_second[x],
                          mom.cont_mean[x], mom.cont_variance[x], g_msd[x]);
  }
  return o;
}

Outcome cmd_liq_check(const MarkovModel& m, const Options& opt, double tol) {
  const auto loaded = load_strategy(need(opt.strategy, "--strategy"), m);
  const auto s = loaded.liquidation();
  const auto verdict = is_equilibrium_liq(m, s, tol);
  Outcome o;
  json states = json::array();
  o.text = fmt::format("liquidation strategy is {}an equilibrium\n", verdict.equilibrium ? "" : "not ");
  for (const auto& st : verdict.states) {
    states.push_back({{"state", m.state_ids[st.state]}, {"eta", st.eta}, {"value", st.value},
                      {"continuation", st.continuation}, {"margin", st.margin},
                      {"class", std::string(to_string(st.cls))}, {"satisfied", st.satisfied}});
    o.text += fmt::format("  {}: eta {}  v {}  g {}  g-v {}  {}{}\n", m.state_ids[st.state], num(st.eta),
                          num(st.value), num(st.continuation), num(st.margin), to_string(st.cls),
                          st.satisfied ? "" : "  VIOLATED");
  }
  o.results = {{"equilibrium", verdict.equilibrium}, {"states", states}, {"warnings", loaded.warnings}};
  return o;
}

std::string report_table(const MarkovModel& m, const EquilibriumReport& r) {
  std::string t = fmt::format("{} equilibria ({}, {}{})\n", r.equilibria.size(), to_string(r.criterion),
                              r.exhaustive ? "exhaustive" : "heuristic",
                              r.complete ? "" : ", incomplete");
  for (std::size_t k = 0; k < r.equilibria.size(); ++k) {
    const auto& p = r.equilibria[k];
    std::string eta, val;
    for (StateIndex x : r.transient) {
      eta += fmt::format(" {}={}", m.state_ids[x], num(p.strategy.eta[x]));
      val += fmt::format(" {}={}", m.state_ids[x], num(p.values[x]));
    }
    std::string tags;
    if (p.optimal) tags += " optimal";
    if (p.pareto) tags += " pareto";
    if (p.sum_maximizer) tags += " sum-max";
    if (p.family) tags += " family";
    t += fmt::format("  [{}] eta:{}  value:{}  face {}{}\n", k, eta, val, p.face, tags);
  }
  for (const auto& u : r.unresolved) t += fmt::format("  unresolved face {}: {}\n", u.face, u.reason);
  for (const auto& n : r.notes) t += "  note: " + n + "\n";
  return t;
}

SolverOptions solver_options(const Globals& g, const Options& opt) {
  SolverOptions so;
  so.tol = g.tol;
  so.grid_step = g.grid;
  so.max_exhaustive_transient = opt.max_transient;
  return so;
}

Outcome solve_outcome(const MarkovModel& m, const EquilibriumReport& r) {
  Outcome o;
  o.results = json::parse(equilibrium_report_json(m, r));
  o.text = report_table(m, r);
  o.code = r.complete ? kOk : kIncomplete;
  return o;
}

Outcome cmd_liq_optimal(const MarkovModel& m, const EquilibriumReport& r, bool pareto) {
  Outcome o = solve_outcome(m, r);
  json payload = {{"report", o.results}};
  if (pareto) {
    const auto sel = select_pareto(m, r);
    payload["pareto"] = sel.pareto;
    payload["sum_maximizer"] = sel.sum_maximizer ? json(*sel.sum_maximizer) : json(nullptr);
    o.text += fmt::format("pareto set: {}\n", fmt::join(sel.pareto, ", "));
    if (sel.sum_maximizer) o.text += fmt::format("largest value sum: [{}]\n", *sel.sum_maximizer);
  } else {
    const auto sel = select_optimal(m, r);
    payload["optimal"] = sel.index ? json(*sel.index) : json(nullptr);
    payload["optimal_set"] = sel.all;
    payload["union_condition"] = sel.union_condition;
    o.text += sel.index ? fmt::format("optimal: [{}]{}\n", *sel.index,
                                      sel.union_condition_holds ? " (continuation sets nest)" : "")
                        : std::string("no optimal equilibrium\n");
  }
  o.results = payload;
  return o;
}

Outcome cmd_surface(const MarkovModel& m, const Globals& g, const Options& opt) {
  const auto free = indices_of(m, need(opt.free, "--free"));
  const auto watched = opt.watch.empty() ? free : indices_of(m, opt.watch);
  const auto base = LiquidationStrategy::normalized(m, std::vector<double>(m.size(), 0.0));
  const double step = g.grid == 1e-3 ? 0.01 : g.grid;
  const auto grid = continuation_surface(m, base, free, step, watched, criterion_of(opt.criterion));
  const std::string path = g.out.empty() ? "surface.csv" : g.out;
  const auto contours = emit_surface_csv(m, grid, path);
  Outcome o;
  json crossings = json::array();
  if (grid.watched.size() == 2 && grid.free_states.size() == 2) {
    for (const auto& p : contour_intersections(grid, 0, 1, 2 * step)) crossings.push_back(p);
  }
  o.results = {{"surface", path}, {"contours", contours.string()}, {"nodes", grid.node_count()},
               {"crossings", crossings}};
  o.text = fmt::format("wrote {} nodes to {} and contours to {}; {} contour crossings\n",
                       grid.node_count(), path, contours.string(), crossings.size());
  return o;
}

Outcome cmd_blend_eval(const MarkovModel& m, const Options& opt) {
  const auto blend = load_blend(need(opt.blend, "--blend"), m);
  const auto law = scripted_blend_law(m, m.require_index(need(opt.start, "--start")), blend);
  Outcome o;
  json dist = json::array();
  std::string rows;
  for (const auto& [v, p] : law.distribution) {
    dist.push_back({v, p});
    rows += fmt::format("  P(payoff = {}) = {}\n", num(v), num(p));
  }
  o.results = {{"distribution", dist}, {"mean", law.mean}, {"second_moment", law.second_moment},
               {"variance", law.variance}, {"k_value", law.k_value}, {"j_value", law.j_value},
               {"lifted_states", law.lifted_states}};
  o.text = fmt::format("{}mean {}  var {}  K {}  J {}\n", rows, num(law.mean), num(law.variance),
                       num(law.k_value), num(law.j_value));
  return o;
}

Outcome cmd_mv_check(const MarkovModel& m, const Options& opt, double tol) {
  const auto loaded = load_strategy(need(opt.strategy, "--strategy"), m);
  const auto s = loaded.liquidation();
  const auto verdict = is_equilibrium_liq_mv(m, s, tol);
  Outcome o;
  json states = json::array();
  o.text = fmt::format("liquidation strategy is {}a mean-variance equilibrium\n",
                       verdict.equilibrium ? "" : "not ");
  for (const auto& r : verdict.response.states) {
    states.push_back({{"state", m.state_ids[r.state]}, {"eta", s.eta[r.state]}, {"cont_mean", r.cont_mean},
                      {"cont_variance", r.cont_variance}, {"h", r.degenerate ? json(nullptr) : json(r.h)},
                      {"response", r.response}, {"best_value", r.best_value}, {"gap", verdict.gap[r.state]}});
    o.text += fmt::format("  {}: eta {}  best response {}  J {}\n", m.state_ids[r.state], num(s.eta[r.state]),
                          num(r.response), num(r.best_value));
  }
  o.results = {{"criterion", "mv"}, {"equilibrium", verdict.equilibrium}, {"states", states},
               {"warnings", loaded.warnings}};
  return o;
}

Outcome cmd_simulate(const MarkovModel& m, const Globals& g, const Options& opt) {
  SimConfig cfg;
  cfg.paths = opt.paths;
  cfg.seed = g.seed;
  cfg.max_steps = opt.max_steps;
  cfg.start = m.require_index(need(opt.start, "--start"));
  SimEstimate est;
  double exact_mean = NAN, exact_var = NAN;
  if (opt.kind == "liq") {
    const auto s = load_strategy(need(opt.strategy, "--strategy"), m).liquidation();
    est = simulate_liquidation(m, s, cfg);
    const auto mom = liquidation_moments(m, s);
    exact_mean = mom.value_mean[cfg.start];
    exact_var = mom.value_second[cfg.start] - exact_mean * exact_mean;
  } else if (opt.kind == "rand") {
    const auto s = load_strategy(need(opt.strategy, "--strategy"), m).randomized();
    est = simulate_randomized(m, s, cfg);
    const auto mom = stopped_moments(m, s);
    exact_mean = mom.mean[cfg.start];
    exact_var = mom.variance(cfg.start);
  } else if (opt.kind == "blend") {
    const auto b = load_blend(need(opt.blend, "--blend"), m);
    est = simulate_blend(m, b, cfg);
    const auto law = scripted_blend_law(m, cfg.start, b);
    exact_mean = law.mean;
    exact_var = law.variance;
  } else {
    throw ValidationError("unknown --kind '" + opt.kind + "' (expected liq, rand or blend)");
  }
  Outcome o;
  o.results = {{"kind", opt.kind}, {"paths", est.paths}, {"seed", g.seed}, {"mean", est.mean},
               {"variance", est.variance}, {"se_mean", est.se_mean}, {"se_variance", est.se_variance},
               {"unabsorbed", est.unabsorbed}, {"exact_mean", exact_mean}, {"exact_variance", exact_var}};
  o.text = fmt::format("{} paths (seed {}), {} cut at max steps\nmean     {} +- {}  (exact {})\nvariance {} +- {}  (exact {})\n",
                       est.paths, g.seed, est.unabsorbed, num(est.mean), num(est.se_mean), num(exact_mean),
                       num(est.variance), num(est.se_variance), num(exact_var));
  return o;
}

Outcome cmd_reproduce(const Options& opt) {
  const std::filesystem::path dir = opt.data_dir.empty() ? default_data_dir() : std::filesystem::path(opt.data_dir);
  std::vector<std::string> ids;
  if (opt.all_examples || opt.example.empty()) {
    if (!opt.all_examples) throw ValidationError("give an example id or --all");
    ids = registered_ids();
  } else {
    ids.push_back(opt.example);
  }
  Outcome o;
  json cases = json::array();
  bool all_pass = true;
  for (const auto& id : ids) {
    const auto r = run_golden(id, dir);
    all_pass = all_pass && r.pass;
    json checks = json::array();
    o.text += fmt::format("{} {}\n", r.pass ? "PASS" : "FAIL", id);
    for (const auto& c : r.checks) {
      const auto& e = c.expectation;
      checks.push_back({{"key", e.key}, {"expected", e.value}, {"tol", e.tolerance},
                        {"relation", std::string(to_string(e.relation))},
                        {"source", std::string(to_string(e.source))},
                        {"actual", c.actual ? json(*c.actual) : json(nullptr)},
                        {"diff", c.diff}, {"pass", c.pass}});
      o.text += fmt::format("  {:4} {:<28} expected {:<16} actual {:<20} diff {:<12.3g} [{}]\n",
                            c.pass ? "ok" : "FAIL", e.key, num(e.value),
                            c.actual ? num(*c.actual) : std::string("missing"), c.diff, to_string(e.source));
    }
    cases.push_back({{"id", id}, {"pass", r.pass}, {"checks", checks}});
  }
  o.results = {{"pass", all_pass}, {"cases", cases}};
  o.code = all_pass ? kOk : kGoldenMismatch;
  return o;
}

Outcome cmd_list_examples(const Options& opt) {
  const std::filesystem::path dir = opt.data_dir.empty() ? default_data_dir() : std::filesystem::path(opt.data_dir);
  Outcome o;
  o.results = json::array();
  for (const auto& gc : load_registry(dir)) {
    o.results.push_back({{"id", gc.id}, {"title", gc.title}, {"notes", gc.notes},
                         {"model", gc.model_file.filename().string()},
                         {"expectations", gc.expectations.size()}});
    o.text += fmt::format("{:<18} {:<62} {}\n", gc.id, gc.title, gc.model_file.filename().string());
  }
  return o;
}

void emit(const Globals& g, const std::string& command, const std::vector<std::string>& args,
          const std::optional<MarkovModel>& model, double elapsed_ms, const Outcome& o) {
  std::string body;
  if (g.json) {
    RunReport rr;
    rr.tool_version = kVersion;
    rr.command = command;
    rr.arguments = args;
    rr.model_digest = model ? digest_hex(model_digest(*model)) : std::string{};
    rr.elapsed_ms = elapsed_ms;
    rr.results = o.results.dump();
    body = serialize_run_report(rr) + "\n";
  } else {
    body = o.text;
  }
  // surface uses --out for its CSV.
  if (!g.out.empty() && command != "surface") {
    std::ofstream f(g.out);
    if (!f) throw ParseError("cannot write " + g.out);
    f << body;
  } else {
    std::cout << body;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium stopping and liquidation on absorbing Markov chains", "tcstop"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  Options opt;
  app.add_option("--model", g.model_path, "Model JSON file");
  app.add_option("--tol", g.tol, "Equality band for equilibrium tests")->capture_default_str();
  app.add_option("--grid", g.grid, "Scan step of the solver, or surface grid step")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_flag("--json", g.json, "Print a JSON run report");
  app.add_option("--out", g.out, "Write output to this file (surface: CSV path)");

  auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
  auto add_criterion = [&](CLI::App* s) {
    s->add_option("--criterion", opt.criterion, "msd or mv")->capture_default_str();
  };

  sub("validate", "Check a model file");
  sub("classify", "List absorbing and transient states");
  auto* pe = sub("pure-eval", "Moments and criterion values of a stopping region");
  pe->add_option("--start", opt.start)->required();
  pe->add_option("--region", opt.region, "Comma-separated state ids")->required();
  pe->add_option("--from", opt.from, "0: first entry from time 0, 1: from time 1")->capture_default_str();
  auto* peq = sub("pure-equilibria", "Enumerate stopping-region equilibria");
  add_criterion(peq);
  auto* so = sub("static-opt", "Best stopping region from a start state");
  so->add_option("--start", opt.start)->required();
  add_criterion(so);
  auto* rc = sub("rand-check", "Check a randomized stopping strategy");
  rc->add_option("--strategy", opt.strategy)->required();
  add_criterion(rc);
  auto* lm = sub("liq-moments", "Moments of a liquidation strategy");
  lm->add_option("--strategy", opt.strategy)->required();
  auto* lc = sub("liq-check", "Check a liquidation strategy");
  lc->add_option("--strategy", opt.strategy)->required();
  for (const char* name : {"liq-solve", "liq-optimal", "liq-pareto", "mv-solve"}) {
    sub(name, name == std::string("mv-solve") ? "All mean-variance liquidation equilibria"
              : name == std::string("liq-solve") ? "All liquidation equilibria"
              : name == std::string("liq-optimal") ? "Optimal liquidation equilibrium"
                                                    : "Pareto-undominated liquidation equilibria")
        ->add_option("--max-transient", opt.max_transient, "Cap for exhaustive face search")
        ->capture_default_str();
  }
  auto* sf = sub("surface", "Continuation surfaces and zero-level contours");
  sf->add_option("--free", opt.free, "One or two comma-separated free states")->required();
  sf->add_option("--watch", opt.watch, "States whose continuation is recorded (default: --free)");
  add_criterion(sf);
  auto* be = sub("blend-eval", "Exact law of a scripted blend of stopping regions");
  be->add_option("--start", opt.start)->required();
  be->add_option("--blend", opt.blend)->required();
  sub("mv-pure", "Enumerate mean-variance stopping-region equilibria");
  auto* mc = sub("mv-check", "Check a liquidation strategy under mean-variance");
  mc->add_option("--strategy", opt.strategy)->required();
  auto* sim = sub("simulate", "Monte Carlo estimate of payoff moments");
  sim->add_option("--start", opt.start)->required();
  sim->add_option("--kind", opt.kind, "liq, rand or blend")->capture_default_str();
  sim->add_option("--strategy", opt.strategy);
  sim->add_option("--blend", opt.blend);
  sim->add_option("--paths", opt.paths)->capture_default_str();
  sim->add_option("--max-steps", opt.max_steps)->capture_default_str();
  auto* rp = sub("reproduce", "Run a registered example against its expectations");
  rp->add_option("id", opt.example);
  rp->add_flag("--all", opt.all_examples, "Run every registered example");
  rp->add_option("--data", opt.data_dir, "Data directory");
  auto* le = sub("list-examples", "List registered examples");
  le->add_option("--data", opt.data_dir, "Data directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::vector<std::string> args(argv + 1, argv + argc);
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<MarkovModel> model;
  try {
    const bool wants_model = command != "reproduce" && command != "list-examples";
    if (wants_model) model = load_model(need(g.model_path, "--model"));

    Outcome o;
    if (command == "validate") o = cmd_validate(need_model(model));
    else if (command == "classify") o = cmd_classify(need_model(model));
    else if (command == "pure-eval") o = cmd_pure_eval(need_model(model), opt);
    else if (command == "pure-equilibria") o = cmd_pure_equilibria(need_model(model), criterion_of(opt.criterion), g.tol);
    else if (command == "static-opt") o = cmd_static_opt(need_model(model), opt);
    else if (command == "rand-check") o = cmd_rand_check(need_model(model), opt, g.tol);
    else if (command == "liq-moments") o = cmd_liq_moments(need_model(model), opt);
    else if (command == "liq-check") o = cmd_liq_check(need_model(model), opt, g.tol);
    else if (command == "liq-solve") o = solve_outcome(*model, solve_equilibria_liq(*model, solver_options(g, opt)));
    else if (command == "liq-optimal" || command == "liq-pareto")
      o = cmd_liq_optimal(*model, solve_equilibria_liq(*model, solver_options(g, opt)), command == "liq-pareto");
    else if (command == "surface") o = cmd_surface(need_model(model), g, opt);
    else if (command == "blend-eval") o = cmd_blend_eval(need_model(model), opt);
    else if (command == "mv-pure") o = cmd_pure_equilibria(need_model(model), Criterion::MeanVariance, g.tol);
    else if (command == "mv-check") o = cmd_mv_check(need_model(model), opt, g.tol);
    else if (command == "mv-solve") o = solve_outcome(*model, solve_equilibria_liq_mv(*model, solver_options(g, opt)));
    else if (command == "simulate") o = cmd_simulate(need_model(model), g, opt);
    else if (command == "reproduce") o = cmd_reproduce(opt);
    else if (command == "list-examples") o = cmd_list_examples(opt);

    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    emit(g, command, args, model, ms, o);
    return o.code;
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return kCapacity;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kValidation;
  } catch (const StructuralError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
