#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hignn/commands.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  long long seed = -1;
  int workers = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Run configuration (JSON)")->required();
  cmd->add_option("--seed", args.seed, "Override the config seed");
  cmd->add_option("--workers", args.workers, "Worker threads (default: hardware cores)");
}

int run(const std::string& command, const CommonArgs& args) {
  hignn::RunConfig config = hignn::load_run_config(args.config_path);
  if (config.command != command)
    throw hignn::ConfigError("config declares command '" + config.command +
                             "' but was invoked as '" + command + "'");
  if (args.seed >= 0) config.seed = static_cast<std::uint64_t>(args.seed);
  if (args.workers >= 0) config.workers = args.workers;
  return hignn::run_command(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hydrodynamic-interaction graph surrogate for Stokes suspensions"};
  app.require_subcommand(1);

  CommonArgs args;
  const char* names[] = {"gen-data", "train", "predict", "simulate", "bench"};
  const char* descriptions[] = {
      "Generate an oracle training set (CSV)",
      "Train the surrogate and write model + loss history",
      "Predict velocities for positions/forces files",
      "Integrate particle dynamics and write a trajectory",
      "Run drag/chain/timing benchmarks",
  };
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], descriptions[i]), args);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
