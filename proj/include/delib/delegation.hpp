#pragma once

#include "delib/model.hpp"
#include "delib/types.hpp"

// The delegation stage: given an interim belief, should the principal act
// directly or hand the decision to the agent, who will refine the belief
// with one private realization and then play their own cutoff rule?

namespace delib {

// Posteriors the agent may reach from `interim` after one private
// realization, with the probability of the high one.
PosteriorPair final_posteriors(Belief interim, const BinarySignal& agent_signal);

// Principal's expected payoff from delegating at `interim`: the average of
// the delegation envelope over the agent's final posteriors.
double exante_delegation_payoff(Belief interim, const BinarySignal& agent_signal,
                                const Preferences& prefs);

// Geometric test for delegation being strictly better than acting directly:
// the agent's finals must induce different actions and both lie strictly
// beyond the principal's own cutoff. Equivalent to
// exante_delegation_payoff > non_delegation_envelope away from ties.
bool strict_delegation(Belief interim, const BinarySignal& agent_signal,
                       const Preferences& prefs);

// Cheap screen: delegation can only be strictly valuable when the spread
// between the agent's finals exceeds the length of the disagreement
// interval. Necessary, not sufficient.
bool necessary_condition(const BinarySignal& agent_signal, Belief interim,
                         const Preferences& prefs);

struct DelegationDecision {
  bool delegate = false;      // payoff rule: delegate only on a strict gain
  bool strict = false;        // geometric strict-delegation test
  double delegation_payoff = 0.0;
  double direct_payoff = 0.0;

  double stage_payoff() const {
    return delegate ? delegation_payoff : direct_payoff;
  }
};

// Resolve the stage at `interim`. Ties (within kBeliefEps) go to acting
// directly.
DelegationDecision optimal_delegation(Belief interim,
                                      const BinarySignal& agent_signal,
                                      const Preferences& prefs);

struct InformativenessComparison {
  double weak_delegation = 0.0;
  double strong_delegation = 0.0;
  double weak_optimal = 0.0;   // max(delegation, direct) under the weak signal
  double strong_optimal = 0.0;
  bool delegation_dropped = false;       // strictly, beyond kBeliefEps
  bool optimal_weakly_improved = false;  // the stage optimum never falls
  bool nonmonotonicity = false;  // delegation fell while the optimum held
};

// Effect of replacing the agent's signal with a Blackwell-stronger one at a
// fixed interim. Throws NotBlackwellOrdered unless weak <= strong at
// `interim`. A more informative agent can be worse to delegate to, but never
// hurts a principal who may also act directly.
InformativenessComparison compare_agent_informativeness(
    Belief interim, const BinarySignal& weak, const BinarySignal& strong,
    const Preferences& prefs);

struct MisalignmentComparison {
  double base_delegation = 0.0;
  double shifted_delegation = 0.0;
  double base_optimal = 0.0;
  double shifted_optimal = 0.0;
  bool weakly_decreased = false;  // both payoffs fell or held, within kBeliefEps
};

// Effect of widening the agent's disagreement with a fixed principal.
// Requires the same principal payoffs and
// disagreement_interval(base) contained in disagreement_interval(shifted)
// (NotMoreMisaligned otherwise; equality is allowed and changes nothing).
MisalignmentComparison compare_misalignment(Belief interim,
                                            const BinarySignal& agent_signal,
                                            const Preferences& base,
                                            const Preferences& shifted);

struct PrincipalShiftComparison {
  double base_delegation = 0.0;
  double shifted_delegation = 0.0;
  double base_optimal = 0.0;
  double shifted_optimal = 0.0;
  bool direction_holds = false;
};

// Comparative statics in the principal's own payoffs, agent fixed.
// shift_case 1: the entries of the agent-leaning action are weakly lowered,
// and every payoff weakly falls. shift_case 2: the entries of the
// principal-preferred action are weakly raised, and every payoff weakly
// rises. Throws CaseMismatch when the matrices do not fit the declared case,
// AlignedPreferences when there is no preferred action to anchor the cases.
PrincipalShiftComparison principal_shift_comparison(
    Belief interim, const BinarySignal& agent_signal, const Preferences& base,
    const Preferences& shifted, int shift_case);

}  // namespace delib
