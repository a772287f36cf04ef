#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace weq {

struct RunConfig {
  std::string command;  // sat solve classify enumerate oracle trace export
  std::string input;    // path, or "-" for stdin
  std::optional<std::string> mode;  // overrides the file's mode line
  std::size_t kappa = 100;
  int max_len = 6;
  std::size_t budget_steps = 200000;
  std::size_t budget_enum = 5000000;
  std::uint64_t seed = 1;
  std::string format = "text";  // text | dot
};

// Empty when the configuration is usable, else the reason.
std::string validate(const RunConfig& cfg);

// Exit code: 0 success (SAT for `sat`), 1 UNSAT, 2 error.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_text(const RunConfig& cfg, const std::string& text, std::ostream& out, std::ostream& err);

}  // namespace weq
