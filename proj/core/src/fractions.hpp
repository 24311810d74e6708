#pragma once

#include <string>
#include <vector>

#include "tcstop/error.hpp"
#include "tcstop/markov.hpp"

namespace tcstop::detail {

inline void check_fraction_vector(const MarkovModel& model,
                                  const std::vector<double>& f, const char* what) {
  if (f.size() != model.size()) {
    throw StructuralError(std::string(what) + " has " + std::to_string(f.size()) +
                          " entries for " + std::to_string(model.size()) + " states");
  }
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (!(f[x] >= 0.0 && f[x] <= 1.0)) {
      throw ValidationError(std::string(what) + " at state '" + model.state_ids[x] +
                            "' is " + std::to_string(f[x]) + ", outside [0,1]");
    }
  }
}

}  // namespace tcstop::detail
