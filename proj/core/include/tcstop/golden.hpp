#pragma once

// Registry of reference instances with frozen expectations.
//
// Each case lives in <data>/examples/<id>.json and points at a model file
// under <data>/models. The computation run for an id is fixed in code; the
// expected values, tolerances and notes come from the data file.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tcstop/markov.hpp"

namespace tcstop {

enum class Relation { Equal, Greater, Less };
/// Where an expected value comes from: a published figure, an identity, or
/// an independent computation frozen once.
enum class Source { Published, Trivial, Derived };

std::string_view to_string(Relation r);
std::string_view to_string(Source s);

struct Expectation {
  std::string key;
  double value = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::Equal;
  Source source = Source::Derived;
  std::string note;
};

struct GoldenCase {
  std::string id;
  std::string title;
  std::string notes;
  std::filesystem::path model_file;
  MarkovModel model;
  std::vector<Expectation> expectations;
};

struct ValueCheck {
  Expectation expectation;
  std::optional<double> actual;
  double diff = 0.0;
  bool pass = false;
};

struct GoldenResult {
  std::string id;
  bool pass = false;
  std::vector<ValueCheck> checks;
  std::map<std::string, double> computed;
};

/// $TCSTOP_DATA_DIR if set, else the directory configured at build time.
std::filesystem::path default_data_dir();

/// Ids with a registered computation, in registry order.
const std::vector<std::string>& registered_ids();

GoldenCase load_case(std::string_view id, const std::filesystem::path& data_dir = default_data_dir());
std::vector<GoldenCase> load_registry(const std::filesystem::path& data_dir = default_data_dir());

/// Runs the computation registered for `gc.id`. Throws ValidationError for
/// an unregistered id.
std::map<std::string, double> run_pipeline(const GoldenCase& gc);

GoldenResult check_golden(const GoldenCase& gc);
GoldenResult run_golden(std::string_view id, const std::filesystem::path& data_dir = default_data_dir());

}  // namespace tcstop
