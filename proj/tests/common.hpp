#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>
#include <algorithm>
#include <filesystem>

#include "oracles.hpp"
#include "weq/alphabet.hpp"

namespace weq::testing {

inline std::string corpus_path(const std::string& name) { return std::string(WEQ_CORPUS_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(WEQ_CORPUS_DIR))
    if (e.path().extension() == ".weq") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

using oracles::all_words;
using oracles::stack_reduce;

}  // namespace weq::testing
