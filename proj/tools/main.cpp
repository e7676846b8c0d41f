// holo: run a configured experiment and write its outputs.
//
// The subcommand selects the experiment; a "kind" key in the config is ignored.
//
//   holo <synth|propagate|qpt|rb|sweep|sideband|export-awg> [--config PATH]
//        [--seed N] [--out DIR] [--mode direct|rb] [--threads N]
//
// Exit status: 0 on success, 1 on a usage/config/runtime error, 2 when a
// numerical check flagged non-convergence.

#include "holo/labcli.hpp"
#include "holo/qcore.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Holonomic qutrit gate compiler and simulator"};
  app.set_version_flag("--version", holo::version_string());
  app.require_subcommand(1, 1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> mode;
  std::optional<unsigned> threads;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "output directory (default: config 'out')");
  app.add_option("--mode", mode, "sweep fidelity mode")->check(CLI::IsMember({"direct", "rb"}));
  app.add_option("--threads", threads, "worker threads, 0 = all cores");

  for (const char* kind : {"synth", "propagate", "qpt", "rb", "sweep", "sideband", "export-awg"})
    app.add_subcommand(kind, std::string("run the ") + kind + " experiment")->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string kind = app.get_subcommands().front()->get_name();

  try {
    holo::ExperimentConfig cfg = config_path.empty() ? holo::parse_config("{}") : holo::load_config(config_path);
    cfg.kind = holo::experiment_kind_from_string(kind);
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out = *out_dir;
    if (mode) cfg.mode = *mode == "rb" ? holo::SweepMode::Rb : holo::SweepMode::Direct;
    if (threads) cfg.threads = *threads;
    cfg.validate();

    const holo::RunResult r = holo::run_experiment(cfg, cfg.out);
    std::cout << r.summary;
    for (const auto& f : r.files) std::cout << "wrote " << (std::filesystem::path(cfg.out) / f).string() << '\n';
    if (!r.converged) {
      std::cerr << "holo: a numerical check did not converge; see " << cfg.out << "/manifest.txt\n";
      return 2;
    }
  } catch (const holo::ConvergenceError& e) {
    std::cerr << "holo: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "holo: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
