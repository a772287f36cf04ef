#include <iostream>

#include "CLI11.hpp"
#include "weq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Word equation solver"};
  app.require_subcommand(1);
  weq::RunConfig cfg;
  std::string mode;
  bool dot = false;
  for (const char* name : {"sat", "solve", "classify", "enumerate", "oracle", "trace", "export"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("input", cfg.input, "problem file, or - for stdin")->required();
    sub->add_option("--kappa", cfg.kappa, "length factor bound");
    sub->add_option("--max-len", cfg.max_len, "length bound on solution components");
    sub->add_option("--seed", cfg.seed, "partition sampling seed");
    sub->add_option("--budget-steps", cfg.budget_steps, "arcs per witness run");
    sub->add_option("--budget-enum", cfg.budget_enum, "enumeration configurations");
    sub->add_option("--format", cfg.format, "text or dot");
    sub->add_option("--mode", mode, "free-group, free-monoid or free-product");
    sub->add_flag("--dot", dot, "same as --format dot");
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!mode.empty()) cfg.mode = mode;
  if (dot) cfg.format = "dot";
  return weq::run(cfg, std::cout, std::cerr);
}
