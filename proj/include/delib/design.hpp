#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "delib/delegation.hpp"
#include "delib/model.hpp"
#include "delib/types.hpp"

// The public-signal design stage. The principal commits to a binary signal
// (a posterior pair bracketing the prior, capped by a Blackwell constraint);
// each realization yields an interim belief at which the delegation stage is
// played optimally. The value of an interim is the stage payoff
//   H(interim) = max(exante_delegation_payoff, non_delegation_envelope),
// and the design problem concavifies H over the feasible posterior interval.

namespace delib {

// Bounds of the responsive interval: interims strictly inside have the two
// agent finals on opposite sides of the agent's cutoff, so the agent's
// action responds to their signal. Outside, the agent plays one action
// regardless of the realization. Needs an informative agent signal and an
// interior agent cutoff.
std::pair<Belief, Belief> responsive_interval(const BinarySignal& agent_signal,
                                              const Preferences& prefs);

// The unique interim at which the stage payoff can jump: the responsive
// bound on the principal-preferred side (lower bound when the principal
// leans toward action 1, upper bound when toward action 0). Throws
// AlignedPreferences when the cutoffs coincide and no such point exists.
Belief indifference_interim(const BinarySignal& agent_signal,
                            const Preferences& prefs);

// Pointwise stage payoff H(interim).
double stage_payoff(Belief interim, const BinarySignal& agent_signal,
                    const Preferences& prefs);

// Slope of the ex-ante delegation payoff on the responsive interval, in
// closed form; the payoff there is affine with
//   intercept u00*q0 + u01*(1-q0)
//   slope (u10-u01) + (u01-u00)*q0 + (u11-u10)*q1
// in the principal's payoffs.
double intermediate_slope(const BinarySignal& agent_signal,
                          const Preferences& prefs);

struct AffineSection {
  Belief lo = 0.0;
  Belief hi = 1.0;
  double intercept = 0.0;
  double slope = 0.0;

  double at(Belief b) const { return intercept + slope * b; }
};

struct StageDiscontinuity {
  Belief at = 0.0;
  double limit_value = 0.0;  // one-sided limit approaching from the V_N side
  double value = 0.0;        // H(at), the upper value
  bool limit_from_left = true;
};

// Exact piecewise-affine form of the stage payoff: contiguous sections
// covering [0, 1], plus the (at most one) upward jump at the indifference
// interim. Sections describe the continuous pieces; value() is authoritative
// at the jump itself. breakpoints lists the section boundaries together with
// the structural beliefs (responsive bounds, principal cutoff), which need
// not all be kinks.
struct StagePayoffCurve {
  std::vector<Belief> breakpoints;
  std::vector<AffineSection> sections;
  std::optional<StageDiscontinuity> discontinuity;

  double value(Belief b) const;
};

StagePayoffCurve stage_payoff_curve(const BinarySignal& agent_signal,
                                    const Preferences& prefs);

// Whether the chord from (left, left_value) to (right, right_value) passes
// weakly above (mid, mid_value). Requires left < mid < right
// (UnsortedPoints otherwise).
bool convexifiable(Belief left, double left_value, Belief mid, double mid_value,
                   Belief right, double right_value);

enum class DesignRegime {
  Maximal,        // constraint endpoints; H is convexifiable over the bracket
  OneSidedHigh,   // low posterior pinned at the jump, high at the cap
  OneSidedLow,    // high posterior pinned at the jump, low at the cap
  Uninformative,  // no useful signal exists (prior at the jump, or pinned)
  AlignedTrivial  // aligned preferences: any maximal signal is optimal
};

const char* design_regime_name(DesignRegime regime);

struct DesignSolution {
  Belief low_posterior = 0.0;
  Belief high_posterior = 0.0;
  BinarySignal signal = BinarySignal::uninformative();
  double expected_payoff = 0.0;
  DesignRegime regime = DesignRegime::Uninformative;
};

// Closed-form optimal design. The stage payoff is convex on each side of the
// indifference interim, so the only candidates are the maximal pair, the two
// one-sided pairs pinned at the jump, and no signal at all; the chord test
// at the jump decides between them. Equality within kBeliefEps counts as
// convexifiable and the most informative optimum is returned.
DesignSolution optimal_design(const Scenario& scenario);

// Hot-loop overload: `curve` must be the stage-payoff curve of the
// scenario's agent signal and preferences.
DesignSolution optimal_design(const Scenario& scenario,
                              const StagePayoffCurve& curve);

}  // namespace delib
