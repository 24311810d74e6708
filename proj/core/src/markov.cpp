#include "tcstop/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "linear.hpp"
#include "tcstop/error.hpp"

namespace tcstop {

std::optional<StateIndex> MarkovModel::index_of(std::string_view id) const {
  auto it = std::find(state_ids.begin(), state_ids.end(), id);
  if (it == state_ids.end()) return std::nullopt;
  return static_cast<StateIndex>(it - state_ids.begin());
}

StateIndex MarkovModel::require_index(std::string_view id) const {
  if (auto idx = index_of(id)) return *idx;
  throw ValidationError("unknown state id '" + std::string(id) + "' in model '" +
                        name + "'");
}

bool MarkovModel::is_absorbing(StateIndex x) const {
  return transition(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(x)) >=
         1.0 - kRowSumTolerance;
}

MarkovModel MarkovModel::scaled(double factor) const {
  MarkovModel out = *this;
  for (double& v : out.values) v *= factor;
  return out;
}

MarkovModel MarkovModel::with_risk_aversion(double new_c) const {
  MarkovModel out = *this;
  out.c = new_c;
  return out;
}

namespace {

std::string format_value_label(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_shape(const MarkovModel& model) {
  const auto n = static_cast<Eigen::Index>(model.values.size());
  if (n == 0) throw StructuralError("model has no states");
  if (model.transition.rows() != n || model.transition.cols() != n) {
    std::ostringstream os;
    os << "transition matrix is " << model.transition.rows() << "x"
       << model.transition.cols() << " but the model has " << n << " states";
    throw StructuralError(os.str());
  }
  if (!model.state_ids.empty() &&
      model.state_ids.size() != model.values.size()) {
    throw StructuralError("state id count does not match value count");
  }
}

}  // namespace

MarkovModel make_model(std::string name, std::vector<double> values,
                       const std::vector<std::vector<double>>& transition,
                       double c) {
  const std::size_t n = values.size();
  if (transition.size() != n) {
    throw StructuralError("transition has " + std::to_string(transition.size()) +
                          " rows for " + std::to_string(n) + " states");
  }
  MarkovModel m;
  m.name = std::move(name);
  m.c = c;
  m.transition.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (transition[i].size() != n) {
      throw StructuralError("transition row " + std::to_string(i) + " has " +
                            std::to_string(transition[i].size()) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) {
      m.transition(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          transition[i][j];
    }
    m.state_ids.push_back(format_value_label(values[i]));
  }
  m.values = std::move(values);
  return m;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NegativeEntry: return "negative-entry";
    case ViolationKind::RowSum: return "row-sum";
    case ViolationKind::NonAbsorbingRecurrentClass: return "non-absorbing-recurrent-class";
    case ViolationKind::NonPositiveRiskAversion: return "non-positive-risk-aversion";
    case ViolationKind::NonFiniteValue: return "non-finite-value";
    case ViolationKind::DuplicateStateId: return "duplicate-state-id";
  }
  return "unknown";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << to_string(violations[i].kind) << ": " << violations[i].message;
  }
  return os.str();
}

ValidationReport validate_model(const MarkovModel& model) {
  check_shape(model);
  ValidationReport report;
  const std::size_t n = model.size();
  const Eigen::MatrixXd& P = model.transition;

  if (!(model.c > 0.0) || !std::isfinite(model.c)) {
    report.violations.push_back({ViolationKind::NonPositiveRiskAversion, {}, {},
                                 "c must be a positive finite number"});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(model.values[i])) {
      report.violations.push_back({ViolationKind::NonFiniteValue, i, {},
                                   "state " + std::to_string(i) + " has a non-finite value"});
    }
  }
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < model.state_ids.size(); ++i) {
      if (!seen.insert(model.state_ids[i]).second) {
        report.violations.push_back({ViolationKind::DuplicateStateId, i, {},
                                     "duplicate state id '" + model.state_ids[i] + "'"});
      }
    }
  }

  bool entries_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (!(p >= 0.0) || !std::isfinite(p)) {
        entries_ok = false;
        std::ostringstream os;
        os << "P[" << i << "][" << j << "] = " << p;
        report.violations.push_back({ViolationKind::NegativeEntry, i, j, os.str()});
      }
      sum += p;
    }
    if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
      entries_ok = false;
      std::ostringstream os;
      os.precision(17);
      os << "row " << i << " sums to " << sum;
      report.violations.push_back({ViolationKind::RowSum, i, {}, os.str()});
    }
  }
  if (!entries_ok) return report;

  // Backward reachability from the absorbing states over positive edges.
  std::vector<bool> reaches(n, false);
  std::vector<StateIndex> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (model.is_absorbing(i)) {
      reaches[i] = true;
      frontier.push_back(i);
    }
  }
  while (!frontier.empty()) {
    const StateIndex y = frontier.back();
    frontier.pop_back();
    for (std::size_t x = 0; x < n; ++x) {
      if (!reaches[x] &&
          P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > 0.0) {
        reaches[x] = true;
        frontier.push_back(x);
      }
    }
  }
  std::vector<StateIndex> stuck;
  for (std::size_t i = 0; i < n; ++i) {
    if (!reaches[i]) stuck.push_back(i);
  }
  if (!stuck.empty()) {
    std::ostringstream os;
    os << "states {";
    for (std::size_t k = 0; k < stuck.size(); ++k) {
      if (k) os << ",";
      os << (model.state_ids.empty() ? std::to_string(stuck[k]) : model.state_ids[stuck[k]]);
    }
    os << "} never reach an absorbing state (they contain a recurrent class "
          "that is not a single absorbing state)";
    report.violations.push_back(
        {ViolationKind::NonAbsorbingRecurrentClass, stuck.front(), {}, os.str()});
  }
  return report;
}

void require_valid(const MarkovModel& model) {
  auto report = validate_model(model);
  if (!report.ok()) {
    throw ValidationError("invalid model '" + model.name + "': " + report.summary());
  }
}

void renormalize_rows(MarkovModel& model) {
  for (Eigen::Index i = 0; i < model.transition.rows(); ++i) {
    const double sum = model.transition.row(i).sum();
    if (std::abs(sum - 1.0) <= kRowSumTolerance && sum != 1.0) {
      model.transition.row(i) /= sum;
    }
  }
}

StateClassification classify_states(const MarkovModel& model) {
  StateClassification out;
  for (std::size_t x = 0; x < model.size(); ++x) {
    (model.is_absorbing(x) ? out.absorbing : out.transient).push_back(x);
  }
  return out;
}

StoppingRegion::StoppingRegion(std::vector<StateIndex> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

StoppingRegion StoppingRegion::from_mask(std::span<const bool> mask) {
  std::vector<StateIndex> m;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) m.push_back(i);
  }
  return StoppingRegion(std::move(m));
}

StoppingRegion StoppingRegion::all_states(const MarkovModel& model) {
  std::vector<StateIndex> m(model.size());
  std::iota(m.begin(), m.end(), StateIndex{0});
  return StoppingRegion(std::move(m));
}

StoppingRegion StoppingRegion::absorbing_only(const MarkovModel& model) {
  return StoppingRegion(classify_states(model).absorbing);
}

bool StoppingRegion::contains(StateIndex x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

StoppingRegion StoppingRegion::normalized(const MarkovModel& model) const {
  std::vector<StateIndex> m = members_;
  for (StateIndex a : classify_states(model).absorbing) m.push_back(a);
  return StoppingRegion(std::move(m));
}

bool StoppingRegion::is_normalized(const MarkovModel& model) const {
  for (StateIndex a : classify_states(model).absorbing) {
    if (!contains(a)) return false;
  }
  return true;
}

std::string StoppingRegion::to_string(const MarkovModel& model) const {
  std::string out = "{";
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (k) out += ",";
    out += members_[k] < model.state_ids.size() ? model.state_ids[members_[k]]
                                                : std::to_string(members_[k]);
  }
  return out + "}";
}

bool operator<(const StoppingRegion& a, const StoppingRegion& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.members_ < b.members_;
}

double HittingLaw::total() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

double HittingLaw::mean(std::span<const double> values) const {
  double m = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) m += probs[y] * values[y];
  return m;
}

double HittingLaw::second_moment(std::span<const double> values) const {
  double m = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) m += probs[y] * values[y] * values[y];
  return m;
}

Eigen::MatrixXd hitting_matrix(const MarkovModel& model,
                               const StoppingRegion& region) {
  const auto n = static_cast<Eigen::Index>(model.size());
  for (StateIndex x : region.members()) {
    if (x >= model.size()) throw StructuralError("region member out of range");
  }
  if (!region.is_normalized(model)) {
    throw ValidationError("stopping region " + region.to_string(model) +
                          " does not contain every absorbing state");
  }
  std::vector<Eigen::Index> outside;
  std::vector<Eigen::Index> inside;
  for (Eigen::Index x = 0; x < n; ++x) {
    (region.contains(static_cast<StateIndex>(x)) ? inside : outside).push_back(x);
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index s : inside) L(s, s) = 1.0;
  if (outside.empty()) return L;

  const auto m = static_cast<Eigen::Index>(outside.size());
  const auto k = static_cast<Eigen::Index>(inside.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd R(m, k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) A(i, j) -= model.transition(outside[i], outside[j]);
    for (Eigen::Index j = 0; j < k; ++j) R(i, j) = model.transition(outside[i], inside[j]);
  }
  const Eigen::MatrixXd H = A.partialPivLu().solve(R);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) L(outside[i], inside[j]) = H(i, j);
  }
  return L;
}

HittingLaw hitting_law(const MarkovModel& model, StateIndex start,
                       const StoppingRegion& region, HitFrom from) {
  if (start >= model.size()) throw StructuralError("start state out of range");
  const Eigen::MatrixXd L = hitting_matrix(model, region);
  const auto s = static_cast<Eigen::Index>(start);
  Eigen::RowVectorXd row =
      from == HitFrom::Zero ? Eigen::RowVectorXd(L.row(s))
                            : Eigen::RowVectorXd(model.transition.row(s) * L);
  HittingLaw law;
  law.start = start;
  law.region = region;
  law.from = from;
  law.probs.assign(row.data(), row.data() + row.size());
  for (double& p : law.probs) {
    if (p < 0.0 && p > -1e-15) p = 0.0;
  }
  return law;
}

}  // namespace tcstop
