#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "coarselab/cli.hpp"

using namespace coarselab;

int main(int argc, char** argv) {
  CLI::App app{"Large scale resemblance structures: checks, dimension, nearness, maps"};
  app.require_subcommand(1);
  Options opt;
  bool as_json = false;
  std::string file;
  Nat scale = 0, window = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scale", scale, "largest scale k for scale-bounded questions");
    sub->add_option("--window", window, "window [0, N] for scale-bounded questions");
    sub->add_option("--seed", opt.seed, "seed for sampled checks and the miner");
    sub->add_option("--cap", opt.cap, "sample count (check on the line) or instance cap (mine)");
    sub->add_flag("--json", as_json, "machine-readable report");
  };
  const std::pair<const char*, const char*> commands[] = {
      {"check", "LS.R axioms and derived properties (nearness axioms on partitions)"},
      {"asdim", "asymptotic dimension and uniform boundedness of covers"},
      {"near", "membership of the queried families in the induced nearness"},
      {"bunch", "bunch containing a family, or a certificate that none exists"},
      {"map", "LS.R map and large-scale equivalence checks"}};
  for (auto [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    sub->add_option("FILE", file, "instance document")->required()->check(CLI::ExistingFile);
  }
  auto* mine = app.add_subcommand("mine", "search small LS.Rs for a property boundary");
  common(mine);
  mine->add_option("--target", opt.target, "non-ls-regular | non-a-lsr | nearness-iv | lambda-undefined");
  mine->add_option("--max-size", opt.max_size, "largest universe (4 samples randomly)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (scale) opt.scale = scale;
  if (window) opt.window = window;

  const std::string name = app.get_subcommands().front()->get_name();
  json doc;
  if (name != "mine") {
    std::ifstream in(file);
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      std::cerr << "error: " << file << " is not JSON: " << e.what() << "\n";
      return 2;
    }
  }
  const CommandResult r = run_command(name, doc, opt);
  std::cout << r.render(as_json);
  return r.exit_code;
}
