#include "tcstop/golden.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "tcstop/blend.hpp"
#include "tcstop/closed_forms.hpp"
#include "tcstop/equilibrium.hpp"
#include "tcstop/error.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/mean_variance.hpp"
#include "tcstop/model_io.hpp"
#include "tcstop/pure_stopping.hpp"
#include "tcstop/randomized.hpp"

#ifndef TCSTOP_DEFAULT_DATA_DIR
#define TCSTOP_DEFAULT_DATA_DIR "data"
#endif

namespace tcstop {

using nlohmann::json;

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "eq";
    case Relation::Greater: return "gt";
    case Relation::Less: return "lt";
  }
  return "eq";
}

std::string_view to_string(Source s) {
  switch (s) {
    case Source::Published: return "published";
    case Source::Trivial: return "trivial";
    case Source::Derived: return "derived";
  }
  return "derived";
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("TCSTOP_DATA_DIR"); env && *env) return env;
  return TCSTOP_DEFAULT_DATA_DIR;
}

namespace {

using Values = std::map<std::string, double>;

StoppingRegion region(const MarkovModel& m, std::initializer_list<const char*> ids) {
  std::vector<StateIndex> members;
  for (const char* id : ids) members.push_back(m.require_index(id));
  return StoppingRegion(std::move(members)).normalized(m);
}

LiquidationStrategy strategy(const MarkovModel& m,
                             std::initializer_list<std::pair<const char*, double>> eta) {
  std::vector<double> e(m.size(), 0.0);
  for (const auto& [id, f] : eta) e[m.require_index(id)] = f;
  return LiquidationStrategy::normalized(m, std::move(e));
}

double g(const MarkovModel& m, const LiquidationStrategy& s, const char* id,
         Criterion c = Criterion::MeanStd) {
  return continuation_value(m, s, m.require_index(id), c);
}

double flag(bool b) { return b ? 1.0 : 0.0; }

// Sign changes of f on a uniform grid of [0,1].
int sign_changes(const std::function<double(double)>& f, double step = 1e-3) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  int count = 0;
  double prev = f(0.0);
  for (int i = 1; i <= n; ++i) {
    const double cur = f(static_cast<double>(i) / n);
    if (prev * cur <= 0.0) ++count;
    prev = cur;
  }
  return count;
}

double grid_min(const std::function<double(double)>& f, double step = 1e-3) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  double lo = f(0.0);
  for (int i = 1; i <= n; ++i) lo = std::min(lo, f(static_cast<double>(i) / n));
  return lo;
}

std::optional<std::size_t> find_point(const MarkovModel& m, const EquilibriumReport& r,
                                      std::initializer_list<std::pair<const char*, double>> at,
                                      double radius = 1e-6) {
  for (std::size_t k = 0; k < r.equilibria.size(); ++k) {
    const auto& eta = r.equilibria[k].strategy.eta;
    bool hit = true;
    for (const auto& [id, f] : at) {
      if (std::abs(eta[m.require_index(id)] - f) > radius) hit = false;
    }
    if (hit) return k;
  }
  return std::nullopt;
}

double has_point(const MarkovModel& m, const EquilibriumReport& r,
                 std::initializer_list<std::pair<const char*, double>> at) {
  return flag(find_point(m, r, at).has_value());
}

double in_set(const std::vector<std::size_t>& set, std::optional<std::size_t> k) {
  return flag(k && std::find(set.begin(), set.end(), *k) != set.end());
}

// Largest |closed form - engine| over the continuation moments on a (a,b) grid.
double closed_form_gap(const MarkovModel& m, const char* x, const char* y,
                       const std::function<std::array<double, 4>(double, double)>& cf,
                       double step = 0.05) {
  const int n = static_cast<int>(std::lround(1.0 / step));
  const StateIndex ix = m.require_index(x);
  const StateIndex iy = m.require_index(y);
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == 0 && j == 0) continue;
      const double a = static_cast<double>(i) / n;
      const double b = static_cast<double>(j) / n;
      const auto mom = liquidation_moments(m, strategy(m, {{x, a}, {y, b}}));
      const auto ref = cf(a, b);
      worst = std::max({worst, std::abs(mom.cont_mean[ix] - ref[0]),
                        std::abs(mom.cont_second[ix] - ref[1]),
                        std::abs(mom.cont_mean[iy] - ref[2]),
                        std::abs(mom.cont_second[iy] - ref[3])});
    }
  }
  return worst;
}

void put_region_eval(Values& out, const std::string& tag, const MarkovModel& m,
                     const char* start, const StoppingRegion& s) {
  const auto ev = evaluate_region(m, m.require_index(start), s, HitFrom::One);
  out["K_" + tag] = ev.k_value;
  out["mean_" + tag] = ev.mean;
  out["second_" + tag] = ev.second_moment;
  out["verdict_" + tag] = flag(is_equilibrium_region(m, s, Criterion::MeanStd).equilibrium);
}

Values run_prop25(const MarkovModel& m) {
  Values out;
  put_region_eval(out, "case1", m, "1", region(m, {"0", "1", "3", "6", "10"}));
  put_region_eval(out, "case2", m, "6", region(m, {"0", "3", "6", "10"}));
  put_region_eval(out, "case3", m, "6", region(m, {"0", "1", "3", "10"}));
  put_region_eval(out, "case4", m, "1", region(m, {"0", "3", "10"}));
  const auto law4 = hitting_law(m, m.require_index("1"), region(m, {"0", "3", "10"}), HitFrom::One);
  for (const char* id : {"0", "3", "10"}) out[std::string("hit_case4_") + id] = law4.probs[m.require_index(id)];
  const auto law2 = hitting_law(m, m.require_index("6"), region(m, {"0", "3", "6", "10"}), HitFrom::One);
  out["hit_case2_6"] = law2.probs[m.require_index("6")];
  out["hit_case2_3"] = law2.probs[m.require_index("3")];
  out["pure_equilibria"] = static_cast<double>(enumerate_pure_equilibria(m, Criterion::MeanStd).size());
  return out;
}

Values run_eg012(const MarkovModel& m) {
  Values out;
  const auto s02 = region(m, {"0", "2"});
  const auto pure = enumerate_pure_equilibria(m, Criterion::MeanStd);
  out["pure_equilibria"] = static_cast<double>(pure.size());
  out["pure_equilibrium_is_0_2"] = flag(pure.size() == 1 && pure[0] == s02);
  const StateIndex one = m.require_index("1");
  out["continuation_1"] = evaluate_region(m, one, s02, HitFrom::One).k_value;
  const auto all = StoppingRegion::all_states(m);
  out["stop_all_continuation_1"] = evaluate_region(m, one, all, HitFrom::One).k_value;
  out["stop_all_is_equilibrium"] = flag(is_equilibrium_region(m, all, Criterion::MeanStd).equilibrium);
  out["min_h_minus_1"] = grid_min([&](double a) { return g(m, strategy(m, {{"1", a}}), "1") - 1.0; });

  const auto report = solve_equilibria_liq(m);
  out["liq_equilibria"] = static_cast<double>(report.equilibria.size());
  out["liq_eta_1"] = report.equilibria.empty() ? NAN : report.equilibria[0].strategy.eta[one];
  const auto eta0 = strategy(m, {{"1", 0.0}});
  const auto mom = liquidation_moments(m, eta0);
  out["cont_mean_eta0"] = mom.cont_mean[one];
  out["cont_variance_eta0"] = mom.cont_variance[one];
  out["continuation_eta0"] = g(m, eta0, "1");
  out["randomized_indicator_is_equilibrium"] =
      flag(is_equilibrium_randomized(m, RandomizedStrategy::indicator(m, s02)).equilibrium);
  return out;
}

Values run_eg0123(const MarkovModel& m) {
  Values out;
  const StateIndex one = m.require_index("1");
  const auto opt = static_optimum(m, one, Criterion::MeanStd);
  out["static_value"] = opt.value;
  out["static_value_exact"] = opt.value;
  out["static_maximizers"] = static_cast<double>(opt.maximizers.size());
  auto has = [&](const StoppingRegion& s) {
    return flag(std::find(opt.maximizers.begin(), opt.maximizers.end(), s) != opt.maximizers.end());
  };
  out["static_has_0_2_3"] = has(region(m, {"0", "2", "3"}));
  out["static_has_0_3"] = has(region(m, {"0", "3"}));

  ScriptedBlend blend{{0.5, 0.5}, {region(m, {"0", "2", "3"}), region(m, {"0", "3"})}};
  const auto law = scripted_blend_law(m, one, blend);
  out["blend_atoms"] = static_cast<double>(law.distribution.size());
  for (const auto& [value, prob] : law.distribution) {
    std::ostringstream key;
    key << "blend_p_" << value;
    out[key.str()] = prob;
  }
  out["blend_mean"] = law.mean;
  out["blend_k"] = law.k_value;
  out["blend_k_exact"] = law.k_value;
  return out;
}

Values run_eg013610(const MarkovModel& m) {
  Values out;
  const auto report = solve_equilibria_liq(m);
  out["liq_equilibria"] = static_cast<double>(report.equilibria.size());
  out["report_complete"] = flag(report.complete);
  const StateIndex i1 = m.require_index("1");
  const StateIndex i6 = m.require_index("6");
  if (report.equilibria.size() == 1) {
    const auto& p = report.equilibria[0];
    out["interior_states"] = flag(p.classes[i1] == StateClass::Interior) +
                             flag(p.classes[i6] == StateClass::Interior);
    out["a0"] = p.strategy.eta[i1];
    out["b0"] = p.strategy.eta[i6];
    out["residual_1"] = std::abs(p.continuation[i1] - 1.0);
    out["residual_6"] = std::abs(p.continuation[i6] - 6.0);
    out["K_1"] = p.values[i1];
    out["K_6"] = p.values[i6];
  }
  out["roots_g1_b0"] = sign_changes([&](double a) { return g(m, strategy(m, {{"1", a}, {"6", 0.0}}), "1") - 1.0; });
  out["roots_g1_b1"] = sign_changes([&](double a) { return g(m, strategy(m, {{"1", a}, {"6", 1.0}}), "1") - 1.0; });
  out["roots_g6_a0"] = sign_changes([&](double b) { return g(m, strategy(m, {{"1", 0.0}, {"6", b}}), "6") - 6.0; });
  out["roots_g6_a1"] = sign_changes([&](double b) { return g(m, strategy(m, {{"1", 1.0}, {"6", b}}), "6") - 6.0; });
  out["closed_form_maxdiff"] = closed_form_gap(m, "1", "6", closed_form::cycle_0_1_3_6_10);
  const auto surf = continuation_surface(m, strategy(m, {}), {i1, i6}, 0.01);
  out["contour_crossings"] = static_cast<double>(contour_intersections(surf, 0, 1, 0.02).size());
  out["pure_equilibria"] = static_cast<double>(enumerate_pure_equilibria(m, Criterion::MeanStd).size());
  return out;
}

Values run_prop222_i(const MarkovModel& m) {
  Values out;
  const auto report = solve_equilibria_liq(m);
  out["liq_equilibria"] = static_cast<double>(report.equilibria.size());
  const StateIndex i7 = m.require_index("7");
  std::optional<std::size_t> mid;
  for (std::size_t k = 0; k < report.equilibria.size(); ++k) {
    const double b = report.equilibria[k].strategy.eta[i7];
    if (b > 1e-6 && b < 1.0 - 1e-6) mid = k;
  }
  const double b0 = mid ? report.equilibria[*mid].strategy.eta[i7] : NAN;
  out["b0"] = b0;
  const auto k00 = find_point(m, report, {{"1", 0.0}, {"7", 0.0}});
  out["has_0_0"] = flag(k00.has_value());
  out["has_0_b0"] = flag(mid && std::abs(report.equilibria[*mid].strategy.eta[m.require_index("1")]) < 1e-6);
  out["has_0_1"] = has_point(m, report, {{"1", 0.0}, {"7", 1.0}});
  const auto opt = select_optimal(m, report);
  out["optimal_count"] = static_cast<double>(opt.all.size());
  out["optimal_is_0_0"] = flag(opt.index && k00 && *opt.index == *k00);
  out["union_condition"] = flag(opt.union_condition_holds);
  const auto par = select_pareto(m, report);
  out["pareto_count"] = static_cast<double>(par.pareto.size());
  out["pareto_is_0_0"] = in_set(par.pareto, k00);

  double lo = INFINITY;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      lo = std::min(lo, g(m, strategy(m, {{"1", i / 100.0}, {"7", j / 100.0}}), "1") - 1.0);
    }
  }
  out["min_g1_minus_1"] = lo;
  for (const auto& [tag, b] : {std::pair{"0_0", 0.0}, std::pair{"0_b0", b0}, std::pair{"0_1", 1.0}}) {
    const auto s = strategy(m, {{"1", 0.0}, {"7", b}});
    out[std::string("g1_") + tag] = g(m, s, "1");
    out[std::string("g7_") + tag] = g(m, s, "7");
  }
  out["closed_form_maxdiff"] = closed_form_gap(m, "1", "7", closed_form::cycle_0_1_2_7_9);
  return out;
}

Values run_prop222_ii(const MarkovModel& m) {
  Values out;
  const auto report = solve_equilibria_liq(m);
  out["liq_equilibria"] = static_cast<double>(report.equilibria.size());
  const StateIndex i11 = m.require_index("11");
  const StateIndex i17 = m.require_index("17");
  auto interior = [](double f) { return f > 1e-6 && f < 1.0 - 1e-6; };
  std::optional<std::size_t> ka3, kb0;
  for (std::size_t k = 0; k < report.equilibria.size(); ++k) {
    const auto& eta = report.equilibria[k].strategy.eta;
    if (interior(eta[i11]) && eta[i17] < 1e-6) ka3 = k;
    if (interior(eta[i17]) && eta[i11] > 1.0 - 1e-6) kb0 = k;
  }
  const double a3 = ka3 ? report.equilibria[*ka3].strategy.eta[i11] : NAN;
  const double b0 = kb0 ? report.equilibria[*kb0].strategy.eta[i17] : NAN;
  out["a3"] = a3;
  out["b0"] = b0;
  const auto k11 = find_point(m, report, {{"11", 1.0}, {"17", 1.0}});
  const auto k01 = find_point(m, report, {{"11", 0.0}, {"17", 1.0}});
  const auto k10 = find_point(m, report, {{"11", 1.0}, {"17", 0.0}});
  out["has_1_1"] = flag(k11.has_value());
  out["has_0_1"] = flag(k01.has_value());
  out["has_1_0"] = flag(k10.has_value());
  out["has_a3_0"] = flag(ka3.has_value());
  out["has_1_b0"] = flag(kb0.has_value());

  const std::pair<const char*, std::optional<std::size_t>> table[] = {
      {"1_1", k11}, {"0_1", k01}, {"1_0", k10}, {"a3_0", ka3}, {"1_b0", kb0}};
  for (const auto& [tag, k] : table) {
    if (!k) continue;
    out[std::string("K11_") + tag] = report.equilibria[*k].values[i11];
    out[std::string("K17_") + tag] = report.equilibria[*k].values[i17];
  }
  if (ka3) out["K17_a3_0_exact"] = report.equilibria[*ka3].values[i17];

  for (const auto& [tag, a, b] : {std::tuple{"1_1", 1.0, 1.0}, std::tuple{"0_1", 0.0, 1.0},
                                  std::tuple{"1_0", 1.0, 0.0}, std::tuple{"0_0", 0.0, 0.0}}) {
    const auto s = strategy(m, {{"11", a}, {"17", b}});
    out[std::string("g11_") + tag] = g(m, s, "11");
    out[std::string("g17_") + tag] = g(m, s, "17");
  }
  const auto opt = select_optimal(m, report);
  out["optimal_exists"] = flag(opt.index.has_value());
  const auto par = select_pareto(m, report);
  out["pareto_count"] = static_cast<double>(par.pareto.size());
  out["pareto_has_0_1"] = in_set(par.pareto, k01);
  out["pareto_has_a3_0"] = in_set(par.pareto, ka3);
  const auto surf = continuation_surface(m, strategy(m, {}), {i11, i17}, 0.01);
  out["contour_crossings"] = static_cast<double>(contour_intersections(surf, 0, 1, 0.02).size());
  out["closed_form_maxdiff"] = closed_form_gap(m, "11", "17", closed_form::chain_0_11_17_18);
  return out;
}

Values run_prop222_iii(const MarkovModel& m) {
  Values out;
  const auto report = solve_equilibria_liq(m);
  out["liq_equilibria"] = static_cast<double>(report.equilibria.size());
  out["has_0"] = has_point(m, report, {{"1", 0.0}});
  out["has_1"] = has_point(m, report, {{"1", 1.0}});
  out["optimal_count"] = static_cast<double>(select_optimal(m, report).all.size());
  const auto s0 = strategy(m, {{"1", 0.0}});
  const auto s1 = strategy(m, {{"1", 1.0}});
  out["h1"] = g(m, s1, "1");
  out["h1_exact"] = out["h1"];
  out["h0"] = g(m, s0, "1");
  const StateIndex one = m.require_index("1");
  out["K_1_eta0"] = evaluate_K_l(m, one, 0.0, s0);
  out["K_1_eta1"] = evaluate_K_l(m, one, 1.0, s1);
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double a = i / 20.0;
    const auto mom = liquidation_moments(m, strategy(m, {{"1", a}}));
    const auto ref = closed_form::chain_0_1_4(a);
    worst = std::max({worst, std::abs(mom.cont_mean[one] - ref[0]),
                      std::abs(mom.cont_second[one] - ref[1])});
  }
  out["closed_form_maxdiff"] = worst;
  return out;
}

Values run_mv_counterexample(const MarkovModel& m) {
  Values out;
  const std::tuple<const char*, const char*, StoppingRegion> cases[] = {
      {"case1", "1", region(m, {"0", "1", "2", "3"})},
      {"case2", "2", region(m, {"0", "2", "3"})},
      {"case3", "2", region(m, {"0", "1", "3"})},
      {"case4", "1", region(m, {"0", "3"})}};
  for (const auto& [tag, start, s] : cases) {
    const auto ev = evaluate_region(m, m.require_index(start), s, HitFrom::One);
    out[std::string("H_") + tag] = ev.j_value;
    out[std::string("mean_") + tag] = ev.mean;
    out[std::string("second_") + tag] = ev.second_moment;
  }
  out["pure_mv_equilibria"] = static_cast<double>(enumerate_pure_equilibria_mv(m).size());
  return out;
}

Values run_prop35(const MarkovModel& m) {
  Values out;
  const auto s02 = region(m, {"0", "2"});
  const auto pure = enumerate_pure_equilibria_mv(m);
  out["pure_mv_equilibria"] = static_cast<double>(pure.size());
  out["pure_mv_is_0_2"] = flag(pure.size() == 1 && pure[0] == s02);
  const StateIndex one = m.require_index("1");
  out["pure_mv_value"] = evaluate_region_mv(m, one, s02, HitFrom::One).j_value;
  const auto eta = LiquidationStrategy::indicator(m, s02);
  const auto br = mv_best_response(m, eta);
  out["max_J"] = br.states[one].best_value;
  out["argmax_xi"] = br.states[one].response;
  out["h_1"] = br.states[one].h;
  out["indicator_is_mv_equilibrium"] = flag(is_equilibrium_liq_mv(m, eta).equilibrium);
  return out;
}

Values run_static_pair(const MarkovModel& m, const char* x, const char* y) {
  Values out;
  for (const char* id : {x, y}) {
    const auto k = static_optimum(m, m.require_index(id), Criterion::MeanStd);
    const auto j = static_optimum(m, m.require_index(id), Criterion::MeanVariance);
    out[std::string("static_") + id] = k.value;
    out[std::string("static_mv_") + id] = j.value;
    out[std::string("static_") + id + "_maximizers"] = static_cast<double>(k.maximizers.size());
  }
  return out;
}

bool maximized_by(const MarkovModel& m, const char* start, const StoppingRegion& s) {
  const auto k = static_optimum(m, m.require_index(start), Criterion::MeanStd);
  return std::find(k.maximizers.begin(), k.maximizers.end(), s) != k.maximizers.end();
}

Values run_sec4_eg1_msd(const MarkovModel& m) {
  Values out = run_static_pair(m, "1", "7");
  const auto s029 = region(m, {"0", "2", "9"});
  out["static_1_is_0_2_9"] = flag(maximized_by(m, "1", s029));
  out["static_7_is_0_2_9"] = flag(maximized_by(m, "7", s029));
  const auto report = solve_equilibria_liq(m);
  const auto opt = select_optimal(m, report);
  if (opt.index) {
    const auto& p = report.equilibria[*opt.index];
    out["opt_K_1"] = p.values[m.require_index("1")];
    out["opt_K_7"] = p.values[m.require_index("7")];
  }
  return out;
}

Values run_sec4_eg2_msd(const MarkovModel& m) {
  Values out = run_static_pair(m, "11", "17");
  out["static_17_is_0_11_18"] = flag(maximized_by(m, "17", region(m, {"0", "11", "18"})));
  const auto report = solve_equilibria_liq(m);
  const StateIndex i11 = m.require_index("11");
  const StateIndex i17 = m.require_index("17");
  for (const auto& p : report.equilibria) {
    if (p.strategy.eta[i11] > 1e-6 && p.strategy.eta[i11] < 1.0 - 1e-6 && p.strategy.eta[i17] < 1e-6) {
      out["K11_a3_0"] = p.values[i11];
      out["K17_a3_0"] = p.values[i17];
    }
  }
  return out;
}

Values run_sec4_mv(const MarkovModel& m, const char* x, const char* y) {
  Values out;
  const auto report = solve_equilibria_liq_mv(m);
  out["mv_equilibria"] = static_cast<double>(report.equilibria.size());
  if (report.equilibria.empty()) return out;
  const auto& p = report.equilibria[0];
  const StateIndex ix = m.require_index(x);
  const StateIndex iy = m.require_index(y);
  out["a_prime"] = out["a_prime_exact"] = p.strategy.eta[ix];
  out["b_prime"] = out["b_prime_exact"] = p.strategy.eta[iy];
  out[std::string("J_") + x] = out[std::string("J_") + x + "_exact"] = p.values[ix];
  out[std::string("J_") + y] = out[std::string("J_") + y + "_exact"] = p.values[iy];
  out[std::string("msd_continuation_") + x] = g(m, p.strategy, x);
  out[std::string("msd_continuation_") + y] = g(m, p.strategy, y);
  return out;
}

using Pipeline = Values (*)(const MarkovModel&);

const std::vector<std::pair<std::string, Pipeline>>& pipelines() {
  static const std::vector<std::pair<std::string, Pipeline>> table = {
      {"prop25-msd", run_prop25},
      {"eg012", run_eg012},
      {"eg0123", run_eg0123},
      {"eg013610", run_eg013610},
      {"prop222-i", run_prop222_i},
      {"prop222-ii", run_prop222_ii},
      {"prop222-iii", run_prop222_iii},
      {"mv-counterexample", run_mv_counterexample},
      {"prop35", run_prop35},
      {"sec4-eg1-msd", run_sec4_eg1_msd},
      {"sec4-eg1-mv", [](const MarkovModel& m) { return run_sec4_mv(m, "1", "7"); }},
      {"sec4-eg2-msd", run_sec4_eg2_msd},
      {"sec4-eg2-mv", [](const MarkovModel& m) { return run_sec4_mv(m, "11", "17"); }},
  };
  return table;
}

Relation parse_relation(const std::string& s) {
  if (s == "eq") return Relation::Equal;
  if (s == "gt") return Relation::Greater;
  if (s == "lt") return Relation::Less;
  throw ParseError("unknown relation '" + s + "'");
}

Source parse_source(const std::string& s) {
  if (s == "published") return Source::Published;
  if (s == "trivial") return Source::Trivial;
  if (s == "derived") return Source::Derived;
  throw ParseError("unknown source '" + s + "'");
}

}  // namespace

const std::vector<std::string>& registered_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, fn] : pipelines()) out.push_back(id);
    return out;
  }();
  return ids;
}

GoldenCase load_case(std::string_view id, const std::filesystem::path& data_dir) {
  const auto& ids = registered_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    throw ValidationError("unregistered example '" + std::string(id) + "'");
  }
  const auto path = data_dir / "examples" / (std::string(id) + ".json");
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  GoldenCase gc;
  try {
    gc.id = j.at("id").get<std::string>();
    gc.title = j.value("title", std::string{});
    gc.notes = j.value("notes", std::string{});
    gc.model_file = data_dir / j.at("model").get<std::string>();
    for (const json& e : j.at("expectations")) {
      Expectation x;
      x.key = e.at("key").get<std::string>();
      x.value = e.at("value").get<double>();
      x.tolerance = e.value("tol", 0.0);
      x.relation = parse_relation(e.value("relation", std::string("eq")));
      x.source = parse_source(e.value("source", std::string("derived")));
      x.note = e.value("note", std::string{});
      gc.expectations.push_back(std::move(x));
    }
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (gc.id != id) throw ParseError(path.string() + ": id mismatch");
  gc.model = load_model(gc.model_file);
  if (j.contains("c")) gc.model = gc.model.with_risk_aversion(j["c"].get<double>());
  return gc;
}

std::vector<GoldenCase> load_registry(const std::filesystem::path& data_dir) {
  std::vector<GoldenCase> out;
  for (const auto& id : registered_ids()) out.push_back(load_case(id, data_dir));
  return out;
}

std::map<std::string, double> run_pipeline(const GoldenCase& gc) {
  for (const auto& [id, fn] : pipelines()) {
    if (id == gc.id) return fn(gc.model);
  }
  throw ValidationError("unregistered example '" + gc.id + "'");
}

GoldenResult check_golden(const GoldenCase& gc) {
  GoldenResult r;
  r.id = gc.id;
  r.computed = run_pipeline(gc);
  r.pass = true;
  for (const auto& e : gc.expectations) {
    ValueCheck c;
    c.expectation = e;
    if (auto it = r.computed.find(e.key); it != r.computed.end() && std::isfinite(it->second)) {
      c.actual = it->second;
      c.diff = it->second - e.value;
      switch (e.relation) {
        case Relation::Equal: c.pass = std::abs(c.diff) <= e.tolerance; break;
        case Relation::Greater: c.pass = c.diff > e.tolerance; break;
        case Relation::Less: c.pass = c.diff < -e.tolerance; break;
      }
    }
    r.pass = r.pass && c.pass;
    r.checks.push_back(std::move(c));
  }
  return r;
}

GoldenResult run_golden(std::string_view id, const std::filesystem::path& data_dir) {
  return check_golden(load_case(id, data_dir));
}

}  // namespace tcstop
