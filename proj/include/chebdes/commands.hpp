#pragma once

#include <string>

#include "chebdes/config.hpp"

namespace chebdes {

struct CommandResult {
  int exit_code = 0;   // 0 ok, 2 config/validation, 3 numeric failure
  std::string output;  // document to print or write; error JSON on failure
};

// Executes a parsed job. Never throws: failures are mapped to exit codes and
// a machine-readable {"error": {...}} document.
CommandResult run_job(const JobConfig& job);

}  // namespace chebdes
