#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "delib/design.hpp"
#include "delib/policy.hpp"
#include "delib/types.hpp"

// Tabular outputs shared by the CLI and the acceptance checks: parameter
// sweeps and figure-ready curve data.

namespace delib {

enum class SweepField {
  Prior,
  Q,   // both agent accuracies together
  Q0,
  Q1,
  MaxLow,
  MaxHigh,
  AgentCutoff,  // rescales the agent's state-1 gain to move the cutoff
  R00, R01, R10, R11,
  V00, V01, V10, V11,
};

std::optional<SweepField> parse_sweep_field(const std::string& name);
const char* sweep_field_name(SweepField field);

struct SweepRequest {
  SweepField field = SweepField::Q;
  double from = 0.0;
  double to = 0.0;
  int steps = 1;                  // steps == 1 emits the single value `from`
  std::optional<Belief> interim;  // set: delegation-stage sweep at this belief
  std::vector<PolicyRegime> regimes;  // empty: all five (regime mode only)
};

struct SweepRow {
  double value = 0.0;
  std::string series;  // regime name, or delegation/direct/stage_optimal
  double payoff = 0.0;
  std::string design_tag;  // design regime tag, "-" when not applicable
  bool delegates = false;
};

// One row per grid value per series, deterministic order. Throws ModelError
// or ParseError-style failures when a swept value produces an invalid
// scenario.
std::vector<SweepRow> run_sweep(const Scenario& base, const SweepRequest& request);

struct FigurePoint {
  Belief belief = 0.0;
  double direct_envelope = 0.0;
  double delegation_envelope = 0.0;
  double exante_delegation = 0.0;
  double stage_payoff = 0.0;
};

struct FigureData {
  std::vector<FigurePoint> points;
  StagePayoffCurve curve;
  Belief principal_cutoff = 0.0;
  Belief agent_cutoff = 0.0;
  std::pair<Belief, Belief> responsive = {0.0, 0.0};
  std::optional<Belief> jump_location;
};

// Curve samples on a uniform grid plus the exact structural annotations.
FigureData figure_data(const Scenario& scenario, int grid_points);

// Emitters shared by the CLI and the checks. The CSV carries the sampled
// envelopes with 17-significant-digit floats; the annotations are a JSON
// document holding the cutoffs, responsive interval, jump, breakpoints, and
// affine sections of the stage-payoff curve.
void write_figure_csv(std::ostream& out, const FigureData& data);
std::string figure_annotations(const FigureData& data);

}  // namespace delib
