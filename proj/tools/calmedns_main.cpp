/// calmedns — command-line driver.
///
///   calmedns <subcommand> --config <path> [--out <dir>] [--seed <u64>]
///
/// Subcommands: simulate, pullback, absorb, flatten, cauchy, verify-calming,
/// validate. Exit status is 0 iff every monitor enabled by the experiment
/// passed; 2 signals a configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "calmedns/exec.hpp"
#include "calmedns/experiments.hpp"

int main(int argc, char** argv) {
  calmedns::exec::init_from_env();

  CLI::App app{"calmed rotational stochastic Navier-Stokes simulator"};
  app.require_subcommand(1);

  const char* names[] = {"simulate", "pullback", "absorb",  "flatten",
                         "cauchy",   "verify-calming", "validate"};
  struct Args {
    std::string config;
    std::string out = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
  };
  Args args;
  for (const char* name : names) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "run configuration file")->required();
    sub->add_option("--out", args.out, "output directory (default: out)");
    sub->add_option("--seed", args.seed, "override noise.seed")
        ->each([&](const std::string&) { args.seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  auto outcome = calmedns::parse_config_file(args.config);
  if (!outcome.ok()) {
    std::cerr << "configuration errors:\n";
    for (const auto& e : outcome.errors) std::cerr << "  " << e << "\n";
    return 2;
  }
  calmedns::RunConfig cfg = *outcome.config;
  if (args.seed_set) cfg.noise_seed = args.seed;

  const auto kind = calmedns::experiment_from_string(sub);
  if (!kind) {
    std::cerr << "unknown experiment: " << sub << "\n";
    return 2;
  }

  try {
    const auto result = calmedns::run_experiment(cfg, *kind, args.out);
    std::printf("%s: %s (config %s) -> %s\n", sub.c_str(), result.pass ? "pass" : "FAIL",
                cfg.hash().c_str(), result.summary_path.c_str());
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << sub << ": error: " << e.what() << "\n";
    return 1;
  }
}
