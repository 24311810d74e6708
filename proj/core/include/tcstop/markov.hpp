#pragma once

// Finite absorbing Markov chains: representation, validation, state
// classification and exact first-entry (hitting) distributions.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace tcstop {

using StateIndex = std::size_t;

/// Tolerance used when checking that transition rows sum to one.
inline constexpr double kRowSumTolerance = 1e-12;

/// A time-homogeneous chain on a finite set of real-valued states together
/// with the risk-aversion weight `c` of the mean/dispersion criteria.
///
/// States are identified by index (or label), never by value: two states may
/// carry the same payoff.
struct MarkovModel {
  std::string name;
  double c = 1.0;
  std::vector<std::string> state_ids;
  std::vector<double> values;
  Eigen::MatrixXd transition;

  std::size_t size() const noexcept { return values.size(); }
  std::optional<StateIndex> index_of(std::string_view id) const;
  /// Index of `id`; throws ValidationError when unknown.
  StateIndex require_index(std::string_view id) const;

  bool is_absorbing(StateIndex x) const;

  /// Same chain and `c`, values multiplied by `factor`.
  MarkovModel scaled(double factor) const;
  MarkovModel with_risk_aversion(double new_c) const;
};

/// Builds a model with labels equal to the printed state values ("0", "1",
/// "3", ...). Throws StructuralError on dimension mismatch.
MarkovModel make_model(std::string name, std::vector<double> values,
                       const std::vector<std::vector<double>>& transition,
                       double c);

enum class ViolationKind {
  NegativeEntry,
  RowSum,
  NonAbsorbingRecurrentClass,
  NonPositiveRiskAversion,
  NonFiniteValue,
  DuplicateStateId,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::optional<StateIndex> row;
  std::optional<StateIndex> column;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

/// Checks every standing assumption on the chain. Rows within
/// kRowSumTolerance of one are accepted; anything further off is reported.
/// Throws StructuralError when the matrix shape does not match the states.
ValidationReport validate_model(const MarkovModel& model);

/// validate_model + throw ValidationError with the report summary.
void require_valid(const MarkovModel& model);

/// Rescales each row to sum to exactly one. Only rows already within
/// kRowSumTolerance are touched.
void renormalize_rows(MarkovModel& model);

struct StateClassification {
  std::vector<StateIndex> absorbing;
  std::vector<StateIndex> transient;
};

/// absorbing iff P(x,x) == 1 (within kRowSumTolerance).
StateClassification classify_states(const MarkovModel& model);

/// A set of states. The normalized form contains every absorbing state;
/// adding or removing an absorbing state never changes a stopped value.
class StoppingRegion {
 public:
  StoppingRegion() = default;
  explicit StoppingRegion(std::vector<StateIndex> members);

  /// Region from a 0/1 membership mask over all states.
  static StoppingRegion from_mask(std::span<const bool> mask);
  static StoppingRegion all_states(const MarkovModel& model);
  static StoppingRegion absorbing_only(const MarkovModel& model);

  bool contains(StateIndex x) const;
  const std::vector<StateIndex>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  /// Adds the absorbing states of `model`.
  StoppingRegion normalized(const MarkovModel& model) const;
  bool is_normalized(const MarkovModel& model) const;

  std::string to_string(const MarkovModel& model) const;

  friend bool operator==(const StoppingRegion&, const StoppingRegion&) = default;
  /// Cardinality first, then lexicographic member order.
  friend bool operator<(const StoppingRegion& a, const StoppingRegion& b);

 private:
  std::vector<StateIndex> members_;  // sorted, unique
};

/// Whether the first entry time counts step 0 (tau = inf{n >= 0}) or starts
/// at step 1 (rho = inf{n >= 1}).
enum class HitFrom { Zero, One };

struct HittingLaw {
  StateIndex start = 0;
  StoppingRegion region;
  HitFrom from = HitFrom::Zero;
  /// probs[y] = P(X at first entry == y); zero outside the region.
  std::vector<double> probs;

  double total() const;
  double mean(std::span<const double> values) const;
  double second_moment(std::span<const double> values) const;
};

/// Exact law of the chain at its first entry into `region`, solving the
/// linear hitting system on the complement. Throws ValidationError if the
/// region misses an absorbing state (the law could be defective).
HittingLaw hitting_law(const MarkovModel& model, StateIndex start,
                       const StoppingRegion& region, HitFrom from);

/// Row x holds the HitFrom::Zero law started at x, for every state.
Eigen::MatrixXd hitting_matrix(const MarkovModel& model,
                               const StoppingRegion& region);

}  // namespace tcstop
