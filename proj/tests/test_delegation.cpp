#include <cmath>

#include "doctest.h"

#include "delib/delegation.hpp"
#include "delib/model.hpp"
#include "delib/oracle.hpp"
#include "support.hpp"

using namespace delib;

TEST_CASE("strict delegation needs a split beyond the principal cutoff") {
  Preferences prefs = support::running_prefs();
  BinarySignal signal(0.8, 0.8);

  // Finals 0.2 and 0.8 straddle both cutoffs.
  CHECK(strict_delegation(0.5, signal, prefs));
  // Finals 9/13 and 36/37: the low one stays above the principal cutoff.
  CHECK_FALSE(strict_delegation(0.9, signal, prefs));
  // Below the responsive interval the agent never acts high.
  CHECK_FALSE(strict_delegation(0.2, signal, prefs));
  CHECK_FALSE(strict_delegation(0.5, BinarySignal::uninformative(), prefs));
}

TEST_CASE("delegation payoffs at locked beliefs") {
  Preferences prefs = support::running_prefs();
  BinarySignal signal(0.8, 0.8);

  PosteriorPair finals = final_posteriors(0.9, signal);
  CHECK(finals.low == doctest::Approx(9.0 / 13.0).epsilon(1e-15));
  CHECK(finals.high == doctest::Approx(36.0 / 37.0).epsilon(1e-15));
  CHECK(finals.prob_high == doctest::Approx(0.74).epsilon(1e-15));

  CHECK(exante_delegation_payoff(0.9, signal, prefs) ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(exante_delegation_payoff(0.5, signal, prefs) ==
        doctest::Approx(0.8).epsilon(1e-12));

  DelegationDecision at_half = optimal_delegation(0.5, signal, prefs);
  CHECK(at_half.delegate);
  CHECK(at_half.strict);
  CHECK(at_half.stage_payoff() == doctest::Approx(0.8).epsilon(1e-12));

  DelegationDecision at_ninety = optimal_delegation(0.9, signal, prefs);
  CHECK_FALSE(at_ninety.delegate);
  CHECK(at_ninety.direct_payoff == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(at_ninety.stage_payoff() == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("payoff ties resolve to acting directly") {
  Preferences prefs = support::running_prefs();
  // Above the agent cutoff an uninformative refinement changes nothing:
  // delegation and direct payoffs coincide exactly.
  DelegationDecision tie =
      optimal_delegation(0.9, BinarySignal::uninformative(), prefs);
  CHECK(tie.delegation_payoff == tie.direct_payoff);
  CHECK_FALSE(tie.delegate);
  CHECK_FALSE(tie.strict);
}

TEST_CASE("necessary condition compares spread with the disagreement interval") {
  Preferences prefs = support::running_prefs();
  BinarySignal signal(0.8, 0.8);

  CHECK(necessary_condition(signal, 0.5, prefs));
  CHECK(necessary_condition(signal, 0.9, prefs));

  // Near certainty the finals collapse: spread 1485/40891, far below 0.25.
  PosteriorPair finals = final_posteriors(0.99, signal);
  CHECK(finals.high - finals.low ==
        doctest::Approx(0.03631605976865325).epsilon(1e-12));
  CHECK_FALSE(necessary_condition(signal, 0.99, prefs));
  CHECK_FALSE(necessary_condition(BinarySignal::uninformative(), 0.6, prefs));
}

TEST_CASE("strict test agrees with the brute-force re-decision") {
  support::Rng rng(303);
  int checked = 0;
  while (checked < 200) {
    Preferences prefs = support::random_prefs(rng, 1e-6);
    BinarySignal signal = support::random_signal(rng);
    double interim = rng.uniform(0.02, 0.98);

    Belief principal_cut = cutoff(prefs.principal);
    Belief agent_cut = cutoff(prefs.agent);
    PosteriorPair finals = final_posteriors(interim, signal);
    double margin = 1e-9;
    if (std::abs(finals.low - agent_cut) < margin) continue;
    if (std::abs(finals.high - agent_cut) < margin) continue;
    if (std::abs(finals.low - principal_cut) < margin) continue;
    if (std::abs(finals.high - principal_cut) < margin) continue;
    if (std::abs(interim - principal_cut) < margin) continue;
    double gap = exante_delegation_payoff(interim, signal, prefs) -
                 non_delegation_envelope(prefs, interim);
    if (std::abs(gap) < margin) continue;

    CHECK(strict_delegation(interim, signal, prefs) ==
          brute_check_delegation(interim, signal, prefs));
    ++checked;
  }
}

TEST_CASE("a stronger agent signal can hurt delegation but not the optimum") {
  Preferences prefs = support::running_prefs();
  BinarySignal weak(0.55, 0.55);
  BinarySignal strong(0.8, 0.8);

  InformativenessComparison at_ninety =
      compare_agent_informativeness(0.9, weak, strong, prefs);
  CHECK(at_ninety.weak_delegation == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(at_ninety.strong_delegation == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(at_ninety.weak_optimal == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(at_ninety.strong_optimal == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(at_ninety.delegation_dropped);
  CHECK(at_ninety.optimal_weakly_improved);
  CHECK(at_ninety.nonmonotonicity);

  InformativenessComparison at_half =
      compare_agent_informativeness(0.5, weak, strong, prefs);
  CHECK(at_half.weak_delegation == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(at_half.strong_delegation == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_FALSE(at_half.delegation_dropped);
  CHECK(at_half.optimal_weakly_improved);
  CHECK_FALSE(at_half.nonmonotonicity);

  CHECK_THROWS_AS(compare_agent_informativeness(0.9, strong, weak, prefs),
                  ModelError);
}

TEST_CASE("widening the disagreement weakly hurts the principal") {
  Preferences base = support::running_prefs();
  BinarySignal signal(0.8, 0.8);

  // Cutoff 0.98 pushes the responsive interval past 0.9: the agent now
  // always acts low there and delegation collapses to the low action line.
  Preferences far{base.principal, support::cutoff_matrix(0.98)};
  MisalignmentComparison collapsed = compare_misalignment(0.9, signal, base, far);
  CHECK(collapsed.base_delegation == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(collapsed.shifted_delegation == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(collapsed.base_optimal == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(collapsed.shifted_optimal == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(collapsed.weakly_decreased);

  // Cutoff 0.9 keeps 0.9 responsive; the intermediate value is unchanged,
  // and equality counts as weakly decreasing.
  Preferences mild{base.principal, support::cutoff_matrix(0.9)};
  MisalignmentComparison unchanged = compare_misalignment(0.9, signal, base, mild);
  CHECK(unchanged.shifted_delegation ==
        doctest::Approx(unchanged.base_delegation).epsilon(1e-12));
  CHECK(unchanged.weakly_decreased);

  // A narrower disagreement interval is rejected.
  Preferences narrower{base.principal, support::cutoff_matrix(0.6)};
  CHECK_THROWS_AS(compare_misalignment(0.9, signal, base, narrower), ModelError);
  // So is touching the principal's own payoffs.
  Preferences other{support::mirrored_prefs().principal,
                    support::cutoff_matrix(0.98)};
  CHECK_THROWS_AS(compare_misalignment(0.9, signal, base, other), ModelError);
}

TEST_CASE("principal payoff shifts move both payoffs in the stated direction") {
  Preferences base = support::running_prefs();
  BinarySignal signal(0.8, 0.8);

  // Case 1: lower the agent-leaning action (action 0) entries.
  Preferences lowered = base;
  lowered.principal.u00 -= 0.5;
  lowered.principal.u10 -= 0.3;
  PrincipalShiftComparison down =
      principal_shift_comparison(0.9, signal, base, lowered, 1);
  CHECK(down.base_delegation == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(down.shifted_delegation == doctest::Approx(0.706).epsilon(1e-12));
  CHECK(down.base_optimal == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(down.shifted_optimal == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(down.direction_holds);

  // Case 2: raise the preferred action (action 1) entries.
  Preferences raised = base;
  raised.principal.u01 += 0.3;
  raised.principal.u11 += 0.5;
  PrincipalShiftComparison up =
      principal_shift_comparison(0.9, signal, base, raised, 2);
  CHECK(up.shifted_delegation == doctest::Approx(1.166).epsilon(1e-12));
  CHECK(up.shifted_optimal == doctest::Approx(1.38).epsilon(1e-12));
  CHECK(up.direction_holds);

  // Declaring the wrong case, shifting the wrong column, or touching the
  // agent all fail loudly.
  CHECK_THROWS_AS(principal_shift_comparison(0.9, signal, base, lowered, 2),
                  ModelError);
  CHECK_THROWS_AS(principal_shift_comparison(0.9, signal, base, raised, 1),
                  ModelError);
  Preferences agent_touched = base;
  agent_touched.agent.u00 += 0.1;
  CHECK_THROWS_AS(
      principal_shift_comparison(0.9, signal, base, agent_touched, 1),
      ModelError);
  CHECK_THROWS_AS(principal_shift_comparison(0.9, signal, base, lowered, 3),
                  ModelError);
  CHECK_THROWS_AS(principal_shift_comparison(
                      0.9, signal, support::aligned_prefs(),
                      support::aligned_prefs(), 1),
                  ModelError);
}
