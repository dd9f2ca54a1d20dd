// crosswedge: harmonic measures of boundary arcs, wedges of boundary crosses,
// disc-functional bounds and certified analytic continuation, driven by JSON
// experiment configs.
//
// Usage: crosswedge omega|wedge|poletsky|extend|verify <config.json>
//        [--seed S] [--out DIR] [--threads T]

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crosswedge/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config", args.config_path, "experiment config (JSON)")
      ->required();
  cmd->add_option("--seed", [&args](const std::vector<std::string>& v) {
        args.seed = std::stoull(v.at(0));
        return true;
      },
      "override the Monte Carlo seed");
  cmd->add_option("--out", [&args](const std::vector<std::string>& v) {
        args.out_dir = v.at(0);
        return true;
      },
      "output directory (default: current)");
  cmd->add_option("--threads", [&args](const std::vector<std::string>& v) {
        args.threads = static_cast<unsigned>(std::stoul(v.at(0)));
        return true;
      },
      "cap worker threads (results do not depend on this)");
}

int run(const std::string& command, const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) {
    std::cerr << "config error: cannot open " << args.config_path << "\n";
    return 2;
  }
  crosswedge::json cfg;
  try {
    cfg = crosswedge::json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  crosswedge::RunOverrides ov;
  ov.seed = args.seed;
  ov.out_dir = args.out_dir;
  ov.threads = args.threads;
  return crosswedge::run_experiment(command, cfg, ov, std::cerr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross/wedge toolkit: harmonic measure, holomorphic discs, "
               "certified continuation"};
  app.require_subcommand(1);

  const char* names[] = {"omega", "wedge", "poletsky", "extend", "verify"};
  const char* descs[] = {
      "harmonic measure field of a boundary arc set",
      "wedge slice classification at fixed second coordinate",
      "disc-functional upper bound for an interior target set",
      "fit cross samples and certify wedge values",
      "run identity and estimate verification suites",
  };
  CommonArgs args[5];
  for (int i = 0; i < 5; ++i) {
    add_common(app.add_subcommand(names[i], descs[i]), args[i]);
  }

  CLI11_PARSE(app, argc, argv);

  for (int i = 0; i < 5; ++i) {
    if (app.get_subcommand(names[i])->parsed()) {
      return run(names[i], args[i]);
    }
  }
  std::cerr << "usage: crosswedge omega|wedge|poletsky|extend|verify <config>\n";
  return 2;
}
