#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tcstop/model_io.hpp"

#ifndef TCSTOP_TEST_DATA_DIR
#define TCSTOP_TEST_DATA_DIR "data"
#endif

namespace tcstop::oracle {

inline std::filesystem::path data_dir() { return TCSTOP_TEST_DATA_DIR; }

inline MarkovModel chain(const std::string& name) {
  return load_model(data_dir() / "models" / (name + ".json"));
}

inline std::vector<std::pair<std::string, MarkovModel>> paper_chains() {
  std::vector<std::pair<std::string, MarkovModel>> out;
  for (const char* name : {"cycle5", "cycle5_alt", "three_state", "blend4", "stay4", "loop3", "mv4"}) {
    out.emplace_back(name, chain(name));
  }
  return out;
}

}  // namespace tcstop::oracle
