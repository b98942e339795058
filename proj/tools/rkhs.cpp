#include <iostream>

#include <CLI11.hpp>

#include "rkhs/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"n-best kernel approximation in RKHS on the unit disc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = 0;
  std::uint64_t seed = 0;

  const std::pair<rkhs::cli::Task, const char*> tasks[] = {
      {rkhs::cli::Task::afd, "greedy adaptive decomposition"},
      {rkhs::cli::Task::nbest, "n-best kernel approximation (multistart search)"},
      {rkhs::cli::Task::stochastic, "shared-parameter n-best over an ensemble"},
      {rkhs::cli::Task::verify, "numerical checks of the space conditions"},
  };
  for (const auto& [task, help] : tasks) {
    auto* sub = app.add_subcommand(rkhs::cli::to_string(task), help);
    sub->add_option("--config", config_path, "task config (JSON)")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "cap on worker threads");
    sub->add_option("--seed", seed, "overrides optimizer.seed and signal.random.seed");
  }
  CLI11_PARSE(app, argc, argv);

  const auto* chosen = app.get_subcommands().front();
  rkhs::cli::RunOptions opts;
  opts.task = *rkhs::cli::parse_task(chosen->get_name());
  opts.out_dir = out_dir;
  if (chosen->count("--threads")) opts.threads = threads;
  if (chosen->count("--seed")) opts.seed = seed;

  rkhs::cli::TaskConfig config;
  try {
    config = rkhs::cli::load_config(config_path);
  } catch (const rkhs::Error& e) {
    std::cerr << "error (" << rkhs::to_string(e.kind()) << "): " << e.what() << "\n";
    return 1;
  }
  return rkhs::cli::run_task(std::move(config), opts, std::cout, std::cerr);
}
