#include "tcstop/blend.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Sparse>

#include "tcstop/criterion.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

namespace {

constexpr std::uint32_t kRunning = 0xffffffffu;

// (current state, per-rule stopped state or kRunning)
using Lifted = std::vector<std::uint32_t>;

bool all_stopped(const Lifted& s) {
  return std::none_of(s.begin() + 1, s.end(), [](auto v) { return v == kRunning; });
}

}  // namespace

void validate_blend(const MarkovModel& model, const ScriptedBlend& blend) {
  if (blend.weights.empty() || blend.weights.size() != blend.regions.size()) {
    throw ValidationError("blend needs one positive weight per region");
  }
  double total = 0.0;
  for (double w : blend.weights) {
    if (!(w > 0.0)) throw ValidationError("blend weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("blend weights sum to " + std::to_string(total) + ", not 1");
  }
  for (const auto& r : blend.regions) {
    for (StateIndex x : r.members()) {
      if (x >= model.size()) throw ValidationError("blend region names an unknown state");
    }
    if (!r.is_normalized(model)) {
      throw ValidationError("blend region " + r.to_string(model) +
                            " does not contain every absorbing state");
    }
  }
}

BlendLaw scripted_blend_law(const MarkovModel& model, StateIndex start,
                            const ScriptedBlend& blend) {
  require_valid(model);
  validate_blend(model, blend);
  if (start >= model.size()) throw ValidationError("start state out of range");
  const std::size_t k = blend.regions.size();

  auto enter = [&](Lifted s, StateIndex y) {
    s[0] = static_cast<std::uint32_t>(y);
    for (std::size_t i = 0; i < k; ++i) {
      if (s[i + 1] == kRunning && blend.regions[i].contains(y)) {
        s[i + 1] = static_cast<std::uint32_t>(y);
      }
    }
    return s;
  };
  auto payoff = [&](const Lifted& s) {
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += blend.weights[i] * model.values[s[i + 1]];
    return total;
  };

  const Lifted init = enter(Lifted(k + 1, kRunning), start);
  BlendLaw law;
  std::map<double, double> atoms;
  if (all_stopped(init)) {
    atoms[payoff(init)] = 1.0;
    law.lifted_states = 1;
  } else {
    // Terminal states are keyed by the stopped tuple alone.
    std::map<Lifted, std::size_t> transient_id, terminal_id;
    std::vector<Lifted> transient{init};
    std::vector<double> terminal_payoff;
    transient_id[init] = 0;
    std::vector<Eigen::Triplet<double>> q_entries, r_entries;
    for (std::size_t i = 0; i < transient.size(); ++i) {
      const Lifted s = transient[i];
      for (StateIndex y = 0; y < model.size(); ++y) {
        const double p = model.transition(static_cast<Eigen::Index>(s[0]),
                                          static_cast<Eigen::Index>(y));
        if (p == 0.0) continue;
        Lifted t = enter(s, y);
        if (all_stopped(t)) {
          t[0] = kRunning;
          auto [it, fresh] = terminal_id.try_emplace(t, terminal_id.size());
          if (fresh) terminal_payoff.push_back(payoff(t));
          r_entries.emplace_back(static_cast<int>(i), static_cast<int>(it->second), p);
        } else {
          auto [it, fresh] = transient_id.try_emplace(t, transient.size());
          if (fresh) {
            transient.push_back(t);
            if (transient.size() + terminal_id.size() > kMaxLiftedStates) {
              throw CapacityError("blend lifted chain exceeds " +
                                  std::to_string(kMaxLiftedStates) + " states");
            }
          }
          q_entries.emplace_back(static_cast<int>(i), static_cast<int>(it->second), p);
        }
      }
    }
    const auto nt = static_cast<int>(transient.size());
    const auto na = static_cast<int>(terminal_payoff.size());
    law.lifted_states = transient.size() + terminal_payoff.size();

    // z^T (I - Q) = e_init^T, then absorption law = z^T R.
    Eigen::SparseMatrix<double> A(nt, nt), R(nt, na);
    std::vector<Eigen::Triplet<double>> a_entries;
    for (int i = 0; i < nt; ++i) a_entries.emplace_back(i, i, 1.0);
    for (const auto& t : q_entries) a_entries.emplace_back(t.col(), t.row(), -t.value());
    A.setFromTriplets(a_entries.begin(), a_entries.end());
    R.setFromTriplets(r_entries.begin(), r_entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw Error("blend lifted system is singular");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nt);
    e(0) = 1.0;
    const Eigen::VectorXd z = lu.solve(e);
    const Eigen::VectorXd probs = R.transpose() * z;
    for (int a = 0; a < na; ++a) {
      const double pr = probs(a) < 0.0 && probs(a) > -1e-15 ? 0.0 : probs(a);
      atoms[terminal_payoff[static_cast<std::size_t>(a)]] += pr;
    }
  }

  for (const auto& [value, prob] : atoms) {
    if (!law.distribution.empty() && std::abs(law.distribution.back().first - value) <= 1e-12) {
      law.distribution.back().second += prob;
    } else {
      law.distribution.emplace_back(value, prob);
    }
  }
  for (const auto& [value, prob] : law.distribution) {
    law.mean += prob * value;
    law.second_moment += prob * value * value;
  }
  law.variance = variance_from_moments(law.mean, law.second_moment);
  law.k_value = criterion_value(law.mean, law.variance, model.c, Criterion::MeanStd);
  law.j_value = criterion_value(law.mean, law.variance, model.c, Criterion::MeanVariance);
  return law;
}

}  // namespace tcstop
