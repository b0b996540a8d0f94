#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delib/design.hpp"
#include "delib/policy_fwd.hpp"
#include "delib/types.hpp"

namespace delib {

// Ex-ante principal payoff of a regime. OptimalJoint weakly dominates every
// other regime by construction.
double evaluate_regime(const Scenario& scenario, PolicyRegime regime);

// Best always-delegate design and its value: maximizes the ex-ante
// delegation payoff over feasible posterior pairs. Exact, by enumerating the
// finite candidate set where the piecewise-affine delegation payoff can kink
// or jump.
struct DelegationDesign {
  Belief low_posterior = 0.0;
  Belief high_posterior = 0.0;
  double expected_payoff = 0.0;
};
DelegationDesign best_delegation_design(const Scenario& scenario);

struct RegimeRow {
  PolicyRegime regime = PolicyRegime::OptimalJoint;
  double payoff = 0.0;
  int rank = 1;  // competition ranking, ties within kBeliefEps share a rank
};

// All five regimes evaluated and ranked, best first. Throws std::logic_error
// if any regime exceeds OptimalJoint beyond tolerance: that would mean the
// closed-form design solver is wrong.
std::vector<RegimeRow> regime_report(const Scenario& scenario);

struct Witness {
  Scenario scenario;
  Belief location = 0.0;   // interim (delegation claim) or prior (design claim)
  double payoff_gap = 0.0;  // strictly positive when found
};

struct WitnessSearchResult {
  std::optional<Witness> witness;
  std::string none_reason;  // set when witness is empty
  // True once the existence preconditions were satisfied; an empty witness
  // with this set means the search itself failed, not the preconditions.
  bool preconditions_hold = false;
};

// Searches for an interim belief at which always delegating is strictly
// worse than the optimal delegate-vs-direct rule. Exists whenever the
// cutoffs are distinct and the agent's signal is noisy in both directions
// (q0 < 1 and q1 < 1); otherwise returns a structured reason instead.
// Deterministic for fixed inputs and seed.
WitnessSearchResult find_delegation_witness(const Preferences& prefs,
                                            const BinarySignal& agent_signal,
                                            std::uint64_t seed);

// Searches for a (prior, constraint) pair at which the constrained-optimal
// design strictly beats the maximal feasible signal. Exists if and only if
// the stage payoff has an upward jump; distinct cutoffs and a noisy agent
// signal alone do not guarantee that, and the search reports the continuous
// case as a structured reason.
WitnessSearchResult find_design_witness(const Preferences& prefs,
                                        const BinarySignal& agent_signal,
                                        std::uint64_t seed);

}  // namespace delib
