#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "etlab_harness/output.hpp"

namespace etlab::harness {

struct RunOptions {
    unsigned workers = 0;
};

struct CommandResult {
    json result;
    Table table;
    /// Per-point values for the binary sample store, when the command has them.
    std::vector<double> samples;
    std::vector<std::string> streams;
    bool has_samples = false;
};

/// Executes a fully resolved config ({"command": ..., parameters}). Throws
/// etlab::Error on invalid parameters or runtime failure.
CommandResult run_command(const json& config, const RunOptions& options);

/// Names accepted in config["command"].
std::vector<std::string> command_names();

}  // namespace etlab::harness
