#pragma once

#include "hignn/run_config.hpp"

namespace hignn {

/// Log verbosity from the HIGNN_LOG environment variable:
/// "quiet" (or "0"), "info" (default), "debug".
int log_level();
void log_info(const std::string& message);
void log_debug(const std::string& message);

int cmd_gen_data(const RunConfig& config);
int cmd_train(const RunConfig& config);
int cmd_predict(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_bench(const RunConfig& config);

/// Dispatch on config.command; returns the process exit code.
int run_command(const RunConfig& config);

}  // namespace hignn
