#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "delib/types.hpp"

// Belief arithmetic and the static decision layer: Bayes updates for binary
// signals, action payoff lines, the direct-action and delegation envelopes,
// cutoffs, Blackwell comparison, and scenario validation.

namespace delib {

// Posterior after observing `realization` (0 or 1) of `signal` at `prior`.
// Degenerate priors are absorbing: updates return the prior unchanged.
// Throws ZeroProbabilityRealization when the realization has probability 0
// under the prior (only possible at degenerate priors or boundary signals).
Belief update_belief(Belief prior, const BinarySignal& signal, int realization);

// Both posteriors plus P(high realization). Never throws: a realization with
// probability zero keeps the prior as its posterior, so the pair still
// averages back to the prior.
PosteriorPair posteriors_of_signal(Belief prior, const BinarySignal& signal);

// Inverse of posteriors_of_signal: the unique binary signal inducing
// posteriors {low, high} at `prior`. Requires low <= prior <= high
// (InvalidBracket otherwise) and an interior prior (DegeneratePrior).
// low == high collapses to the canonical uninformative signal.
BinarySignal signal_from_posteriors(Belief prior, Belief low, Belief high);

// Indifference belief (u00 - u01) / ((u00 - u01) + (u11 - u10)); action 1 is
// optimal above it, action 0 below. Throws AssumptionViolated unless
// u00 > u01 and u11 > u10.
Belief cutoff(const PayoffMatrix& m);

// Expected payoff of playing `action` (0 or 1) at `belief`.
double action_payoff(const PayoffMatrix& m, int action, Belief belief);

// Principal's payoff when acting directly: max of the two action lines,
// a convex kink at the principal's cutoff.
double non_delegation_envelope(const Preferences& prefs, Belief belief);

// Principal's payoff when the agent acts at `belief`: the agent plays their
// own cutoff rule, with indifference (within kBeliefEps) resolved toward the
// principal-preferred action.
double delegation_envelope(const Preferences& prefs, Belief belief);

// Open interval between the two cutoffs, where principal and agent disagree
// about the optimal action. Empty (equal endpoints) when aligned.
std::pair<Belief, Belief> disagreement_interval(const Preferences& prefs);

// Action the principal prefers on the disagreement interval: 1 when the
// principal's cutoff is lower, 0 when higher, nullopt when aligned.
std::optional<int> principal_preferred_action(const Preferences& prefs);

// Blackwell order at an interior prior: `weak` is weakly less informative
// than `strong` iff weak's posterior interval is contained (within
// kBeliefEps) in strong's. For binary signals containment at one interior
// prior implies containment at all of them.
bool blackwell_leq(const BinarySignal& weak, const BinarySignal& strong,
                   Belief prior);

struct ValidationIssue {
  std::string field;    // e.g. "principal", "agent_signal.q1", "constraint"
  std::string code;     // stable machine-readable tag
  std::string message;  // human-readable detail
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural checks on a scenario; never throws. Payoff matrices violating
// the distinct-correct-action assumption are classified: a dominant action
// (one action weakly better in both states) vs state-mismatching preferences
// (both inequalities reversed, the "correct" actions are swapped).
ValidationReport validate_scenario(const Scenario& scenario);

}  // namespace delib
