#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace coarsetop::cli {

// A command's product: the `result` member of the JSON envelope, or a text
// body (CSV, edge list) written verbatim.
struct CommandOutput {
  nlohmann::json result;
  std::optional<std::string> text;
};

// Throws InputError on bad input and ResourceError on cap refusal.
CommandOutput run_command(const RunConfig& config, unsigned threads);

}  // namespace coarsetop::cli
