#include <algorithm>
#include <cmath>

#include "solve_common.hpp"
#include "tcstop/equilibrium.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

namespace detail {

namespace {

constexpr double kCrossMethodMerge = 1e-6;

}  // namespace

LiquidationStrategy embed_transient(const MarkovModel& model,
                                    const std::vector<StateIndex>& transient,
                                    const std::vector<double>& free_eta) {
  std::vector<double> eta(model.size(), 1.0);
  for (std::size_t k = 0; k < transient.size(); ++k) eta[transient[k]] = free_eta[k];
  return LiquidationStrategy::normalized(model, std::move(eta));
}

EquilibriumPoint make_point(const MarkovModel& model, const LiquidationStrategy& eta,
                            Criterion criterion, double tol) {
  const LiquidationMoments m = liquidation_moments(model, eta);
  EquilibriumPoint p;
  p.strategy = eta;
  p.continuation = continuation_values(model, m, criterion);
  for (StateIndex x = 0; x < model.size(); ++x) {
    const double v = model.values[x];
    const double e = eta.eta[x];
    double value;
    if (criterion == Criterion::MeanStd) {
      value = (v - p.continuation[x]) * e + p.continuation[x];
    } else {
      const double cv = model.c * m.cont_variance[x];
      value = -cv * e * e + (2.0 * cv - m.cont_mean[x] + v) * e + m.cont_mean[x] - cv;
    }
    p.values.push_back(value);
    p.classes.push_back(classify_fraction(e));
    if (v < p.continuation[x] - tol) p.continuation_set.push_back(x);
  }
  return p;
}

EquilibriumReport solve_generic(const MarkovModel& model, Criterion criterion,
                                const SolverOptions& options, const ResidualFn& residual,
                                const ResponseFn& response, const VerifyFn& verify,
                                bool iterate_always) {
  require_valid(model);
  EquilibriumReport report;
  report.criterion = criterion;
  report.transient = classify_states(model).transient;
  const std::size_t T = report.transient.size();

  std::vector<std::string> labels;
  for (StateIndex x : report.transient) labels.push_back(model.state_ids[x]);

  std::vector<std::vector<double>> seen;
  auto add = [&](const std::vector<double>& free_eta, const std::string& face,
                 double res, bool family, double radius) {
    for (const auto& q : seen) {
      double d = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) d = std::max(d, std::abs(q[i] - free_eta[i]));
      if (d <= radius) return;
    }
    const LiquidationStrategy eta = embed_transient(model, report.transient, free_eta);
    if (!verify(eta)) {
      report.notes.push_back("candidate on face " + face + " failed verification");
      return;
    }
    seen.push_back(free_eta);
    EquilibriumPoint p = make_point(model, eta, criterion, options.tol);
    p.face = face;
    p.residual = res;
    p.family = family;
    report.equilibria.push_back(std::move(p));
  };

  if (T <= options.max_exhaustive_transient) {
    report.exhaustive = true;
    const FaceSearch search = enumerate_faces(T, residual, options, labels);
    report.faces_examined = search.faces_examined;
    report.unresolved = search.unresolved;
    for (const FacePoint& p : search.points) {
      add(p.eta, p.face, p.residual, p.family, 10.0 * options.refine_tol);
      if (p.family) {
        report.notes.push_back("face " + p.face +
                               " carries a continuum of equilibria; endpoints reported");
      }
    }
  } else {
    report.notes.push_back(std::to_string(T) + " transient states exceed the exhaustive cap of " +
                           std::to_string(options.max_exhaustive_transient) +
                           "; damped best-response iteration only");
  }

  if (!report.exhaustive || iterate_always) {
    const IterationResult it = iterate_best_response(T, response, options);
    std::vector<double> r(T);
    for (const auto& fp : it.fixed_points) {
      residual(fp, r);
      double res = 0.0;
      for (double v : r) res = std::max(res, std::abs(v));
      add(fp, "iteration", res, false,
          report.exhaustive ? kCrossMethodMerge : 10.0 * options.refine_tol);
    }
    if (it.converged < it.starts) {
      double worst = 0.0;
      for (double s : it.stalled_residuals) worst = std::max(worst, s);
      report.notes.push_back(std::to_string(it.starts - it.converged) + " of " +
                             std::to_string(it.starts) +
                             " iteration starts did not converge (largest final step " +
                             std::to_string(worst) + ")");
    }
  }

  std::sort(report.equilibria.begin(), report.equilibria.end(),
            [](const EquilibriumPoint& a, const EquilibriumPoint& b) {
              return a.strategy.eta < b.strategy.eta;
            });
  report.complete = report.exhaustive && report.unresolved.empty() &&
                    !report.equilibria.empty();
  if (report.exhaustive && report.equilibria.empty()) {
    report.notes.push_back("exhaustive search returned no equilibrium: solver failure");
  }
  return report;
}

}  // namespace detail

EquilibriumReport solve_equilibria_liq(const MarkovModel& model,
                                       const SolverOptions& options) {
  const auto transient = classify_states(model).transient;
  const double tol = options.tol;
  detail::ResidualFn residual = [&](const std::vector<double>& z, std::vector<double>& r) {
    const LiquidationStrategy eta = detail::embed_transient(model, transient, z);
    const LiquidationMoments m = liquidation_moments(model, eta);
    const auto g = continuation_values(model, m, Criterion::MeanStd);
    r.resize(transient.size());
    for (std::size_t k = 0; k < transient.size(); ++k) {
      r[k] = g[transient[k]] - model.values[transient[k]];
    }
  };
  detail::ResponseFn response = [&](const std::vector<double>& z, std::vector<double>& b) {
    std::vector<double> r;
    residual(z, r);
    b.resize(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
      b[k] = r[k] > tol ? 0.0 : r[k] < -tol ? 1.0 : z[k];
    }
  };
  detail::VerifyFn verify = [&](const LiquidationStrategy& eta) {
    return is_equilibrium_liq(model, eta, tol).equilibrium;
  };
  EquilibriumReport report = detail::solve_generic(model, Criterion::MeanStd, options,
                                                   residual, response, verify, false);
  annotate_selection(model, report);
  return report;
}

namespace {

constexpr double kDominanceTol = 1e-9;

bool weakly_dominates(const EquilibriumPoint& a, const EquilibriumPoint& b) {
  for (std::size_t x = 0; x < a.values.size(); ++x) {
    if (a.values[x] < b.values[x] - kDominanceTol) return false;
  }
  return true;
}

bool strictly_better_somewhere(const EquilibriumPoint& a, const EquilibriumPoint& b) {
  for (std::size_t x = 0; x < a.values.size(); ++x) {
    if (a.values[x] > b.values[x] + kDominanceTol) return true;
  }
  return false;
}

}  // namespace

OptimalSelection select_optimal(const MarkovModel& model, const EquilibriumReport& report) {
  (void)model;
  OptimalSelection out;
  std::vector<StateIndex> union_set;
  for (const auto& e : report.equilibria) {
    union_set.insert(union_set.end(), e.continuation_set.begin(), e.continuation_set.end());
  }
  std::sort(union_set.begin(), union_set.end());
  union_set.erase(std::unique(union_set.begin(), union_set.end()), union_set.end());

  for (std::size_t i = 0; i < report.equilibria.size(); ++i) {
    bool dominant = true;
    for (std::size_t j = 0; j < report.equilibria.size() && dominant; ++j) {
      dominant = weakly_dominates(report.equilibria[i], report.equilibria[j]);
    }
    if (!dominant) continue;
    out.all.push_back(i);
    out.union_condition.push_back(report.equilibria[i].continuation_set == union_set);
  }
  if (!out.all.empty()) {
    out.index = out.all.front();
    out.union_condition_holds = out.union_condition.front();
  }
  return out;
}

ParetoSelection select_pareto(const MarkovModel& model, const EquilibriumReport& report) {
  (void)model;
  ParetoSelection out;
  const auto& eq = report.equilibria;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < eq.size() && !dominated; ++j) {
      if (i == j) continue;
      dominated = weakly_dominates(eq[j], eq[i]) && strictly_better_somewhere(eq[j], eq[i]);
    }
    if (!dominated) out.pareto.push_back(i);
  }
  double best = -INFINITY;
  for (std::size_t i = 0; i < eq.size(); ++i) {
    double s = 0.0;
    for (double v : eq[i].values) s += v;
    if (s > best + kDominanceTol) {
      best = s;
      out.sum_maximizer = i;
    }
  }
  return out;
}

void annotate_selection(const MarkovModel& model, EquilibriumReport& report) {
  const OptimalSelection opt = select_optimal(model, report);
  const ParetoSelection par = select_pareto(model, report);
  report.optimal = opt.index;
  report.optimal_set = opt.all;
  report.pareto_set = par.pareto;
  report.sum_maximizer = par.sum_maximizer;
  for (auto& e : report.equilibria) e.optimal = e.pareto = e.sum_maximizer = false;
  for (std::size_t i : opt.all) report.equilibria[i].optimal = true;
  for (std::size_t i : par.pareto) report.equilibria[i].pareto = true;
  if (par.sum_maximizer) report.equilibria[*par.sum_maximizer].sum_maximizer = true;
}

}  // namespace tcstop
