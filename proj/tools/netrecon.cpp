// Command-line driver: runs the whole experiment pipeline, or a single stage
// on the files of a working directory.

#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "netrecon/config.hpp"
#include "netrecon/error.hpp"
#include "netrecon/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Network reconstruction from path samples: experiments and stages"};
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::size_t jobs = 1;
  std::string stage;
  std::size_t rep = 0;
  bool print_config = false;

  app.add_option("--config", config_path, "Experiment config (key = value lines)")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed, overrides the config");
  app.add_option("--out", out, "Output directory, overrides the config");
  app.add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  app.add_option("--stage", stage, "Run one stage on the files in --out")
      ->check(CLI::IsMember(netrecon::stage_names()));
  app.add_option("--rep", rep, "Repetition index used by --stage");
  app.add_flag("--print-config", print_config, "Print the resolved config and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    netrecon::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = netrecon::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (out) cfg.out = *out;
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    cfg.validate();
    if (print_config) {
      netrecon::write_config(std::cout, cfg);
      return 0;
    }
    if (stage.empty()) {
      netrecon::run_pipeline(cfg, jobs);
    } else {
      netrecon::run_stage(cfg, stage, cfg.out, rep, jobs);
    }
  } catch (const std::exception& e) {
    std::cerr << "netrecon: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
