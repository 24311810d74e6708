#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/paper_chains.hpp"
#include "oracles/path_sum.hpp"
#include "oracles/random_models.hpp"
#include "tcstop/error.hpp"
#include "tcstop/markov.hpp"

using namespace tcstop;

namespace {

MarkovModel three_state() {
  return make_model("walk", {0, 1, 2}, {{1, 0, 0}, {0.2, 0.4, 0.4}, {0, 0, 1}}, 0.25);
}

}  // namespace

TEST_CASE("classification splits absorbing and transient states") {
  const auto m = oracle::chain("cycle5");
  const auto cls = classify_states(m);
  CHECK(cls.absorbing == std::vector<StateIndex>{0, 2, 4});
  CHECK(cls.transient == std::vector<StateIndex>{1, 3});
  CHECK(m.is_absorbing(0));
  CHECK_FALSE(m.is_absorbing(1));
}

TEST_CASE("validation reports rows, negatives and closed classes") {
  auto m = three_state();
  CHECK(validate_model(m).ok());

  auto bad = m;
  bad.transition(1, 1) = 0.3;  // row sums to 0.9
  const auto r = validate_model(bad);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].kind == ViolationKind::RowSum);
  CHECK(r.violations[0].row == StateIndex{1});
  CHECK_THROWS_AS(require_valid(bad), ValidationError);

  auto neg = m;
  neg.transition(1, 0) = -0.2;
  neg.transition(1, 1) = 0.8;
  CHECK_FALSE(validate_model(neg).ok());

  // 1 and 2 trap each other and never reach 0.
  auto trap = make_model("trap", {0, 1, 2}, {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}}, 1.0);
  const auto t = validate_model(trap);
  REQUIRE_FALSE(t.ok());
  CHECK(t.violations[0].kind == ViolationKind::NonAbsorbingRecurrentClass);

  auto dup = m;
  dup.state_ids[2] = dup.state_ids[1];
  CHECK_FALSE(validate_model(dup).ok());

  auto c0 = m;
  c0.c = 0.0;
  CHECK_FALSE(validate_model(c0).ok());
}

TEST_CASE("rows within tolerance are renormalized") {
  auto m = three_state();
  m.transition(1, 1) = 0.4 + 5e-13;
  CHECK(validate_model(m).ok());
  renormalize_rows(m);
  CHECK(m.transition.row(1).sum() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("regions normalize to include absorbing states") {
  const auto m = three_state();
  const StoppingRegion s({1});
  CHECK_FALSE(s.is_normalized(m));
  const auto n = s.normalized(m);
  CHECK(n.members() == std::vector<StateIndex>{0, 1, 2});
  CHECK(n.contains(1));
  CHECK(StoppingRegion::absorbing_only(m).members() == std::vector<StateIndex>{0, 2});
}

TEST_CASE("hitting laws from time zero and from time one") {
  const auto m = three_state();
  const auto s = StoppingRegion({0, 1, 2});
  const auto zero = hitting_law(m, 1, s, HitFrom::Zero);
  CHECK(zero.probs[1] == doctest::Approx(1.0));
  const auto one = hitting_law(m, 1, s, HitFrom::One);
  CHECK(one.probs[0] == doctest::Approx(0.2));
  CHECK(one.probs[1] == doctest::Approx(0.4));
  CHECK(one.probs[2] == doctest::Approx(0.4));
  CHECK(one.total() == doctest::Approx(1.0));

  const auto s02 = StoppingRegion({0, 2});
  const auto law = hitting_law(m, 1, s02, HitFrom::One);
  CHECK(law.probs[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(law.probs[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(law.mean(m.values) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(law.second_moment(m.values) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("hitting laws agree with forward enumeration on random chains") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = oracle::random_chain(rng, 6, 2, 0.5);
    const auto s = oracle::random_region(rng, m);
    std::vector<double> stop(m.size(), 0.0);
    for (StateIndex x : s.members()) stop[x] = 1.0;
    for (StateIndex x = 0; x < m.size(); ++x) {
      const auto law = hitting_law(m, x, s, HitFrom::Zero);
      const auto ref = oracle::randomized_path_sum(m, x, stop);
      CHECK(law.mean(m.values) == doctest::Approx(ref.mean).epsilon(1e-9));
      CHECK(law.second_moment(m.values) == doctest::Approx(ref.second).epsilon(1e-9));
      CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("scaling multiplies values only") {
  const auto m = three_state();
  const auto s = m.scaled(2.5);
  CHECK(s.values[2] == doctest::Approx(5.0));
  CHECK(s.c == m.c);
  CHECK(s.transition == m.transition);
  CHECK(m.with_risk_aversion(3.0).c == 3.0);
}

TEST_CASE("unknown state ids are rejected") {
  const auto m = three_state();
  CHECK_FALSE(m.index_of("7").has_value());
  CHECK_THROWS_AS(m.require_index("7"), ValidationError);
}
