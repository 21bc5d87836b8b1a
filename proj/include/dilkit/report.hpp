#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dilkit/error.hpp"
#include "dilkit/problem.hpp"

namespace dilkit {

/// Outcome of one command. Keys are sorted on output, so equal inputs give
/// byte-identical JSON.
struct Report {
  std::string command;
  std::string kind;
  bool affirmative = false;
  nlohmann::json verdicts = nlohmann::json::object();
  nlohmann::json certificates = nlohmann::json::object();
  nlohmann::json artifacts = nlohmann::json::object();
  std::string error;  // library error name for negative results raised as errors

  nlohmann::json to_json() const;
  std::string to_json_text() const;
  std::string to_text() const;
  int exit_code() const { return affirmative ? 0 : 1; }
};

const std::vector<std::string>& command_names();

struct RunOptions {
  bool artifacts = false;
};

/// Dispatches a command. Mathematical failures (not positive definite, not
/// CP, ...) come back as negative reports; malformed input throws.
Report run_command(const std::string& command, const Problem& problem, const RunOptions& options = {});

/// True for errors that are verdicts about the input rather than bad input.
bool is_verdict_error(ErrorKind kind);

/// JSON document for an error that aborted a command (exit code 2).
nlohmann::json error_report(const std::string& command, const Error& e);

}  // namespace dilkit
