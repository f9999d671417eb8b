#pragma once

#include <string>

#include "core/config.hpp"

namespace fkm {

enum class Command { Validate, Derive, Simulate, Verify, Einstein };

enum class OutputFormat { Default, Csv, Json };

/// Status values double as CLI exit codes.
enum class RunStatus {
  Ok = 0,
  CheckFailed = 1,
  ConfigError = 2,
  DomainError = 3,
};

struct CommandResult {
  RunStatus status = RunStatus::Ok;
  std::string artifact;  // CSV or JSON payload
  std::string message;   // human-readable summary or error
};

/// Executes one command against a parsed configuration. Module errors
/// are mapped onto statuses (config -> ConfigError, numeric/domain ->
/// DomainError); check failures carry their report in `artifact`.
CommandResult runCommand(Command cmd, const RunConfig& cfg, OutputFormat fmt);

CommandResult runCommand(Command cmd, const std::string& configJson,
                         OutputFormat fmt);

}  // namespace fkm
