#include "tcstop/pure_stopping.hpp"

#include <algorithm>
#include <cstdint>

#include "tcstop/error.hpp"

namespace tcstop {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const MarkovModel& model) {
  return {model.values.data(), static_cast<Eigen::Index>(model.values.size())};
}

RegionEvaluation make_evaluation(StateIndex start, double mean, double second,
                                 double c) {
  RegionEvaluation e;
  e.start = start;
  e.mean = mean;
  e.second_moment = second;
  e.variance = variance_from_moments(mean, second);
  e.k_value = criterion_value(mean, e.variance, c, Criterion::MeanStd);
  e.j_value = criterion_value(mean, e.variance, c, Criterion::MeanVariance);
  return e;
}

}  // namespace

RegionEvaluation evaluate_region(const MarkovModel& model, StateIndex start,
                                 const StoppingRegion& region, HitFrom from) {
  const HittingLaw law = hitting_law(model, start, region, from);
  return make_evaluation(start, law.mean(model.values),
                         law.second_moment(model.values), model.c);
}

RegionVerdict is_equilibrium_region(const MarkovModel& model,
                                    const StoppingRegion& region,
                                    Criterion criterion, double tol) {
  const Eigen::MatrixXd L = hitting_matrix(model, region);
  const auto v = as_vector(model);
  const Eigen::VectorXd first = model.transition * (L * v);
  const Eigen::VectorXd second = model.transition * (L * v.cwiseProduct(v));

  RegionVerdict verdict;
  verdict.equilibrium = true;
  for (std::size_t x = 0; x < model.size(); ++x) {
    const auto i = static_cast<Eigen::Index>(x);
    const RegionEvaluation e = make_evaluation(x, first(i), second(i), model.c);
    StateMargin m;
    m.state = x;
    m.in_region = region.contains(x);
    m.value = model.values[x];
    m.continuation = e.value(criterion);
    m.margin = m.in_region ? m.value - m.continuation : m.continuation - m.value;
    m.satisfied = m.margin >= -tol;
    verdict.equilibrium = verdict.equilibrium && m.satisfied;
    verdict.margins.push_back(m);
  }
  return verdict;
}

std::vector<StoppingRegion> all_normalized_regions(const MarkovModel& model) {
  const StateClassification cls = classify_states(model);
  const std::size_t t = cls.transient.size();
  if (t > kMaxEnumeratedTransient) {
    throw CapacityError("model '" + model.name + "' has " + std::to_string(t) +
                        " transient states; exhaustive region search is capped at " +
                        std::to_string(kMaxEnumeratedTransient));
  }
  std::vector<StoppingRegion> out;
  out.reserve(std::size_t{1} << t);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
    std::vector<StateIndex> members = cls.absorbing;
    for (std::size_t i = 0; i < t; ++i) {
      if (mask & (std::uint64_t{1} << i)) members.push_back(cls.transient[i]);
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

std::vector<StoppingRegion> enumerate_pure_equilibria(const MarkovModel& model,
                                                      Criterion criterion,
                                                      double tol) {
  std::vector<StoppingRegion> found;
  for (const StoppingRegion& region : all_normalized_regions(model)) {
    if (is_equilibrium_region(model, region, criterion, tol).equilibrium) {
      found.push_back(region);
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

StaticOptimum static_optimum(const MarkovModel& model, StateIndex start,
                             Criterion criterion) {
  if (start >= model.size()) throw StructuralError("start state out of range");
  const auto regions = all_normalized_regions(model);
  std::vector<double> scores;
  scores.reserve(regions.size());
  for (const StoppingRegion& region : regions) {
    scores.push_back(evaluate_region(model, start, region, HitFrom::Zero).value(criterion));
  }
  StaticOptimum out;
  out.start = start;
  out.criterion = criterion;
  out.regions_searched = regions.size();
  out.value = *std::max_element(scores.begin(), scores.end());
  for (std::size_t k = 0; k < regions.size(); ++k) {
    if (scores[k] >= out.value - StaticOptimum::kTieTolerance) {
      out.maximizers.push_back(regions[k]);
    }
  }
  std::sort(out.maximizers.begin(), out.maximizers.end());
  return out;
}

}  // namespace tcstop
