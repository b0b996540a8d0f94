#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "delib/types.hpp"

// Scenario files: a small TOML subset, line oriented.
//
//   prior = 0.5
//   [principal]
//   r00 = 1.0            # payoff of action 0 in state 0
//   ...
//   [agent]
//   v00 = 1.25
//   ...
//   [agent_signal]
//   q0 = 0.8
//   q1 = 0.8
//   [constraint]
//   posteriors = [0.35, 0.55]   # or: signal = [0.9, 0.9]
//
// '#' starts a comment. The constraint takes either extreme posteriors or a
// binary signal table, never both. Errors carry the line or field involved.

namespace delib {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, int line, std::string field)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                          message
                                    : (field.empty() ? message
                                                     : field + ": " + message)),
        line_(line),
        field_(std::move(field)) {}

  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

// Parsed file before semantic assembly; witness searches only need the
// preference and signal parts, so everything is optional here.
struct ScenarioDoc {
  std::optional<Belief> prior;
  std::optional<PayoffMatrix> principal;
  std::optional<PayoffMatrix> agent;
  std::optional<std::pair<double, double>> agent_q;
  std::optional<std::pair<Belief, Belief>> constraint_posteriors;
  std::optional<std::pair<double, double>> constraint_signal;
};

ScenarioDoc parse_scenario_text(const std::string& text,
                                const std::string& source_name);
ScenarioDoc parse_scenario_file(const std::string& path);

// Assemble the full scenario; every part must be present (missing parts
// raise field-addressed ParseErrors). A signal-form constraint is converted
// to its extreme posteriors at the prior.
Scenario build_scenario(const ScenarioDoc& doc);

// The subset needed by witness searches: preferences plus agent signal.
std::pair<Preferences, BinarySignal> build_witness_inputs(const ScenarioDoc& doc);

}  // namespace delib
