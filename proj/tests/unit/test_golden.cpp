#include <doctest.h>

#include <string>

#include "oracles/paper_chains.hpp"
#include "tcstop/error.hpp"
#include "tcstop/golden.hpp"

using namespace tcstop;

TEST_CASE("every registered id has a data file") {
  const auto cases = load_registry(oracle::data_dir());
  CHECK(cases.size() == registered_ids().size());
  for (const auto& gc : cases) {
    CHECK(!gc.expectations.empty());
    CHECK(gc.model.size() > 0);
  }
}

TEST_CASE("unknown ids are rejected") {
  CHECK_THROWS_AS(load_case("no-such-case", oracle::data_dir()), ValidationError);
}

TEST_CASE("comparison relations") {
  GoldenCase gc = load_case("prop25-msd", oracle::data_dir());
  const auto base = check_golden(gc);
  CHECK(base.pass);
  REQUIRE(!gc.expectations.empty());
  gc.expectations.front().value += 1.0;
  CHECK_FALSE(check_golden(gc).pass);

  gc = load_case("prop25-msd", oracle::data_dir());
  Expectation missing;
  missing.key = "not_computed";
  gc.expectations.push_back(missing);
  CHECK_FALSE(check_golden(gc).pass);

  gc = load_case("prop25-msd", oracle::data_dir());
  const std::string key = gc.expectations.front().key;
  const double actual = base.computed.at(key);
  gc.expectations = {{key, actual - 1.0, 0.5, Relation::Greater, Source::Derived, ""}};
  CHECK(check_golden(gc).pass);
  gc.expectations = {{key, actual - 1.0, 0.5, Relation::Less, Source::Derived, ""}};
  CHECK_FALSE(check_golden(gc).pass);
}
