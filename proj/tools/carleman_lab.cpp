// Batch runner: carleman_lab <stage> --config exp.json [--out DIR] [--threads N] [--seed U64]
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clab/config.hpp"
#include "clab/error.hpp"
#include "clab/parallel.hpp"
#include "clab/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Carleman weight and weighted-resolvent experiments"};
  app.require_subcommand(0, 1);
  std::string config_path, stage_name, out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "experiment config (JSON)")->required();
  auto* stage_opt = app.add_option("--stage", stage_name, "stage to run (default all)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides the config)");
  for (const char* name : {"check-potential", "mollify", "construct", "certify", "carleman",
                           "resolvent-sweep", "fit", "all"}) {
    app.add_subcommand(name, std::string("run the ") + name + " stage")->fallthrough();
  }
  app.fallthrough();
  CLI11_PARSE(app, argc, argv);

  std::string stage = "all";
  if (!app.get_subcommands().empty()) {
    stage = app.get_subcommands().front()->get_name();
    if (*stage_opt && stage_name != stage) {
      std::cerr << "error: --stage " << stage_name << " conflicts with subcommand " << stage << '\n';
      return 2;
    }
  } else if (*stage_opt) {
    stage = stage_name;
  }

  try {
    clab::set_threads(threads);
    auto cfg = clab::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (!out_dir.empty()) cfg.output = out_dir;
    const auto result = clab::run_pipeline(cfg, clab::stage_from_string(stage), cfg.output, &std::cout);
    std::cout << "config hash " << result.config_hash << ", artifacts in " << cfg.output << '\n';
    return result.exit_code();
  } catch (const clab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const clab::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const clab::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
