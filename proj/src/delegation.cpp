#include "delib/delegation.hpp"

#include <algorithm>
#include <cmath>

namespace delib {

PosteriorPair final_posteriors(Belief interim, const BinarySignal& agent_signal) {
  return posteriors_of_signal(interim, agent_signal);
}

double exante_delegation_payoff(Belief interim, const BinarySignal& agent_signal,
                                const Preferences& prefs) {
  PosteriorPair finals = final_posteriors(interim, agent_signal);
  double low_value = delegation_envelope(prefs, finals.low);
  double high_value = delegation_envelope(prefs, finals.high);
  return (1.0 - finals.prob_high) * low_value + finals.prob_high * high_value;
}

namespace {

int agent_action_at(const Preferences& prefs, Belief belief) {
  Belief agent_cut = cutoff(prefs.agent);
  if (belief > agent_cut + kBeliefEps) return 1;
  if (belief < agent_cut - kBeliefEps) return 0;
  return principal_preferred_action(prefs).value_or(1);
}

}  // namespace

bool strict_delegation(Belief interim, const BinarySignal& agent_signal,
                       const Preferences& prefs) {
  PosteriorPair finals = final_posteriors(interim, agent_signal);
  if (finals.prob_high <= 0.0 || finals.prob_high >= 1.0) return false;
  if (agent_action_at(prefs, finals.low) != 0 ||
      agent_action_at(prefs, finals.high) != 1) {
    return false;  // agent ignores their signal; delegation adds nothing
  }
  // With the agent responding, the gain over each direct action is carried by
  // the final on that action's side; it is strict exactly when that final is
  // strictly beyond the principal's own cutoff.
  Belief principal_cut = cutoff(prefs.principal);
  return finals.low < principal_cut - kBeliefEps &&
         finals.high > principal_cut + kBeliefEps;
}

bool necessary_condition(const BinarySignal& agent_signal, Belief interim,
                         const Preferences& prefs) {
  PosteriorPair finals = final_posteriors(interim, agent_signal);
  auto [lo, hi] = disagreement_interval(prefs);
  return finals.high - finals.low > hi - lo;
}

DelegationDecision optimal_delegation(Belief interim,
                                      const BinarySignal& agent_signal,
                                      const Preferences& prefs) {
  DelegationDecision decision;
  decision.delegation_payoff = exante_delegation_payoff(interim, agent_signal, prefs);
  decision.direct_payoff = non_delegation_envelope(prefs, interim);
  decision.strict = strict_delegation(interim, agent_signal, prefs);
  decision.delegate =
      decision.delegation_payoff - decision.direct_payoff > kBeliefEps;
  return decision;
}

InformativenessComparison compare_agent_informativeness(
    Belief interim, const BinarySignal& weak, const BinarySignal& strong,
    const Preferences& prefs) {
  if (!blackwell_leq(weak, strong, interim)) {
    throw ModelError(ErrorCode::NotBlackwellOrdered,
                     "weak signal's posterior interval is not contained in "
                     "the strong signal's");
  }
  InformativenessComparison cmp;
  double direct = non_delegation_envelope(prefs, interim);
  cmp.weak_delegation = exante_delegation_payoff(interim, weak, prefs);
  cmp.strong_delegation = exante_delegation_payoff(interim, strong, prefs);
  cmp.weak_optimal = std::max(cmp.weak_delegation, direct);
  cmp.strong_optimal = std::max(cmp.strong_delegation, direct);
  cmp.delegation_dropped = cmp.strong_delegation < cmp.weak_delegation - kBeliefEps;
  cmp.optimal_weakly_improved = cmp.strong_optimal >= cmp.weak_optimal - kBeliefEps;
  cmp.nonmonotonicity = cmp.delegation_dropped && cmp.optimal_weakly_improved;
  return cmp;
}

namespace {

bool same_matrix(const PayoffMatrix& a, const PayoffMatrix& b) {
  return a.u00 == b.u00 && a.u01 == b.u01 && a.u10 == b.u10 && a.u11 == b.u11;
}

}  // namespace

MisalignmentComparison compare_misalignment(Belief interim,
                                            const BinarySignal& agent_signal,
                                            const Preferences& base,
                                            const Preferences& shifted) {
  if (!same_matrix(base.principal, shifted.principal)) {
    throw ModelError(ErrorCode::NotMoreMisaligned,
                     "misalignment comparison holds the principal fixed");
  }
  auto [base_lo, base_hi] = disagreement_interval(base);
  auto [shift_lo, shift_hi] = disagreement_interval(shifted);
  if (shift_lo > base_lo + kBeliefEps || shift_hi < base_hi - kBeliefEps) {
    throw ModelError(ErrorCode::NotMoreMisaligned,
                     "shifted agent's disagreement interval must contain the "
                     "base agent's");
  }
  MisalignmentComparison cmp;
  double direct = non_delegation_envelope(base, interim);
  cmp.base_delegation = exante_delegation_payoff(interim, agent_signal, base);
  cmp.shifted_delegation = exante_delegation_payoff(interim, agent_signal, shifted);
  cmp.base_optimal = std::max(cmp.base_delegation, direct);
  cmp.shifted_optimal = std::max(cmp.shifted_delegation, direct);
  cmp.weakly_decreased =
      cmp.shifted_delegation <= cmp.base_delegation + kBeliefEps &&
      cmp.shifted_optimal <= cmp.base_optimal + kBeliefEps;
  return cmp;
}

PrincipalShiftComparison principal_shift_comparison(
    Belief interim, const BinarySignal& agent_signal, const Preferences& base,
    const Preferences& shifted, int shift_case) {
  if (shift_case != 1 && shift_case != 2) {
    throw ModelError(ErrorCode::CaseMismatch,
                     "shift_case must be 1 or 2, got " +
                         std::to_string(shift_case));
  }
  if (!same_matrix(base.agent, shifted.agent)) {
    throw ModelError(ErrorCode::CaseMismatch,
                     "principal shift comparison holds the agent fixed");
  }
  std::optional<int> preferred = principal_preferred_action(base);
  if (!preferred) {
    throw ModelError(ErrorCode::AlignedPreferences,
                     "aligned preferences have no agent-leaning action to "
                     "anchor the shift cases");
  }
  const PayoffMatrix& b = base.principal;
  const PayoffMatrix& s = shifted.principal;
  // Entry deltas by action column.
  double d0_low = s.u00 - b.u00, d0_high = s.u10 - b.u10;   // action 0 column
  double d1_low = s.u01 - b.u01, d1_high = s.u11 - b.u11;   // action 1 column
  int target = shift_case == 1 ? 1 - *preferred : *preferred;
  double target_low = target == 0 ? d0_low : d1_low;
  double target_high = target == 0 ? d0_high : d1_high;
  double other_low = target == 0 ? d1_low : d0_low;
  double other_high = target == 0 ? d1_high : d0_high;
  bool target_ok = shift_case == 1 ? (target_low <= 0.0 && target_high <= 0.0)
                                   : (target_low >= 0.0 && target_high >= 0.0);
  if (!target_ok || other_low != 0.0 || other_high != 0.0) {
    throw ModelError(
        ErrorCode::CaseMismatch,
        shift_case == 1
            ? "case 1 weakly lowers the agent-leaning action's entries only"
            : "case 2 weakly raises the preferred action's entries only");
  }

  PrincipalShiftComparison cmp;
  cmp.base_delegation = exante_delegation_payoff(interim, agent_signal, base);
  cmp.shifted_delegation = exante_delegation_payoff(interim, agent_signal, shifted);
  cmp.base_optimal = std::max(cmp.base_delegation,
                              non_delegation_envelope(base, interim));
  cmp.shifted_optimal = std::max(cmp.shifted_delegation,
                                 non_delegation_envelope(shifted, interim));
  if (shift_case == 1) {
    cmp.direction_holds =
        cmp.shifted_delegation <= cmp.base_delegation + kBeliefEps &&
        cmp.shifted_optimal <= cmp.base_optimal + kBeliefEps;
  } else {
    cmp.direction_holds =
        cmp.shifted_delegation >= cmp.base_delegation - kBeliefEps &&
        cmp.shifted_optimal >= cmp.base_optimal - kBeliefEps;
  }
  return cmp;
}

}  // namespace delib
