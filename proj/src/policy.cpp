#include "delib/policy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "delib/delegation.hpp"
#include "delib/oracle.hpp"

namespace delib {

const char* policy_regime_name(PolicyRegime regime) {
  switch (regime) {
    case PolicyRegime::OptimalJoint:
      return "OptimalJoint";
    case PolicyRegime::MandatedDelegation:
      return "MandatedDelegation";
    case PolicyRegime::MandatedMaximalSignal:
      return "MandatedMaximalSignal";
    case PolicyRegime::NoAlgorithm:
      return "NoAlgorithm";
    case PolicyRegime::NoHuman:
      return "NoHuman";
  }
  return "Unknown";
}

std::optional<PolicyRegime> parse_policy_regime(std::string_view name) {
  for (PolicyRegime r :
       {PolicyRegime::OptimalJoint, PolicyRegime::MandatedDelegation,
        PolicyRegime::MandatedMaximalSignal, PolicyRegime::NoAlgorithm,
        PolicyRegime::NoHuman}) {
    if (name == policy_regime_name(r)) return r;
  }
  return std::nullopt;
}

namespace {

// Mixture weight on the high posterior; callers guard low < high.
double mix(Belief prior, Belief low, double low_value, Belief high,
           double high_value) {
  double w = (prior - low) / (high - low);
  return low_value + w * (high_value - low_value);
}

bool degenerate_bracket(const Scenario& s) {
  return s.prior - s.constraint.max_low <= kBeliefEps ||
         s.constraint.max_high - s.prior <= kBeliefEps;
}

}  // namespace

DelegationDesign best_delegation_design(const Scenario& scenario) {
  const Belief prior = scenario.prior;
  auto payoff_at = [&](Belief b) {
    return exante_delegation_payoff(b, scenario.agent_signal, scenario.prefs);
  };
  DelegationDesign best{prior, prior, payoff_at(prior)};
  if (degenerate_bracket(scenario)) return best;

  // The ex-ante delegation payoff is piecewise affine with upward jumps only
  // at the responsive-interval bounds, so some pair of candidate beliefs
  // supports the optimal chord.
  auto [resp_lo, resp_hi] =
      responsive_interval(scenario.agent_signal, scenario.prefs);
  std::vector<Belief> lows = {scenario.constraint.max_low, prior};
  std::vector<Belief> highs = {prior, scenario.constraint.max_high};
  for (Belief b : {resp_lo, resp_hi}) {
    if (b > scenario.constraint.max_low && b < prior) lows.push_back(b);
    if (b > prior && b < scenario.constraint.max_high) highs.push_back(b);
  }
  double best_width = 0.0;
  for (Belief low : lows) {
    for (Belief high : highs) {
      if (high - low <= kBeliefEps || prior - low <= 0.0 || high - prior <= 0.0) {
        continue;  // zero-weight pairs are the no-signal design above
      }
      double payoff = mix(prior, low, payoff_at(low), high, payoff_at(high));
      double width = high - low;
      if (payoff > best.expected_payoff + kBeliefEps ||
          (payoff > best.expected_payoff - kBeliefEps && width > best_width)) {
        best = {low, high, payoff};
        best_width = width;
      }
    }
  }
  return best;
}

double evaluate_regime(const Scenario& scenario, PolicyRegime regime) {
  const Belief prior = scenario.prior;
  const BlackwellConstraint& cap = scenario.constraint;
  switch (regime) {
    case PolicyRegime::OptimalJoint:
      return optimal_design(scenario).expected_payoff;
    case PolicyRegime::MandatedDelegation:
      return best_delegation_design(scenario).expected_payoff;
    case PolicyRegime::MandatedMaximalSignal: {
      auto stage = [&](Belief b) {
        return stage_payoff(b, scenario.agent_signal, scenario.prefs);
      };
      if (degenerate_bracket(scenario)) return stage(prior);
      return mix(prior, cap.max_low, stage(cap.max_low), cap.max_high,
                 stage(cap.max_high));
    }
    case PolicyRegime::NoAlgorithm:
      return stage_payoff(prior, scenario.agent_signal, scenario.prefs);
    case PolicyRegime::NoHuman: {
      auto direct = [&](Belief b) {
        return non_delegation_envelope(scenario.prefs, b);
      };
      if (degenerate_bracket(scenario)) return direct(prior);
      return mix(prior, cap.max_low, direct(cap.max_low), cap.max_high,
                 direct(cap.max_high));
    }
  }
  throw std::logic_error("unknown policy regime");
}

std::vector<RegimeRow> regime_report(const Scenario& scenario) {
  std::vector<RegimeRow> rows;
  for (PolicyRegime r :
       {PolicyRegime::OptimalJoint, PolicyRegime::MandatedDelegation,
        PolicyRegime::MandatedMaximalSignal, PolicyRegime::NoAlgorithm,
        PolicyRegime::NoHuman}) {
    rows.push_back({r, evaluate_regime(scenario, r), 1});
  }
  double joint = rows.front().payoff;
  for (const RegimeRow& row : rows) {
    if (row.payoff > joint + 1e-9) {
      throw std::logic_error(
          std::string(policy_regime_name(row.regime)) +
          " exceeds OptimalJoint; the design solver is inconsistent");
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const RegimeRow& a, const RegimeRow& b) {
                     return a.payoff > b.payoff;
                   });
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i - 1].payoff - rows[i].payoff <= kBeliefEps) {
      rows[i].rank = rows[i - 1].rank;
    } else {
      rows[i].rank = static_cast<int>(i) + 1;
    }
  }
  return rows;
}

namespace {

Scenario witness_scenario(const Preferences& prefs, const BinarySignal& signal,
                          Belief prior, Belief max_low, Belief max_high) {
  Scenario s;
  s.prior = prior;
  s.prefs = prefs;
  s.agent_signal = signal;
  s.constraint = {max_low, max_high};
  return s;
}

std::optional<std::string> witness_preconditions(const Preferences& prefs,
                                                 const BinarySignal& signal) {
  if (!principal_preferred_action(prefs)) {
    return "aligned preferences: delegation is never strictly harmful and the "
           "stage payoff is continuous";
  }
  if (signal.t0() >= 1.0 - kBeliefEps || signal.t1() >= 1.0 - kBeliefEps) {
    return "state-revealing private signal: a realization pins the state, so "
           "the required strict gap cannot open";
  }
  return std::nullopt;
}

}  // namespace

WitnessSearchResult find_delegation_witness(const Preferences& prefs,
                                            const BinarySignal& agent_signal,
                                            std::uint64_t seed) {
  if (auto reason = witness_preconditions(prefs, agent_signal)) {
    return {std::nullopt, *reason};
  }
  auto gap_at = [&](Belief b) {
    return non_delegation_envelope(prefs, b) -
           exante_delegation_payoff(b, agent_signal, prefs);
  };
  auto [resp_lo, resp_hi] = responsive_interval(agent_signal, prefs);
  int preferred = *principal_preferred_action(prefs);

  std::vector<Belief> candidates;
  for (int k = 1; k <= 99; ++k) candidates.push_back(k / 100.0);
  // The gap opens next to the responsive bound on the agent-leaning side,
  // where the agent still follows one more realization the principal would
  // already override.
  double span = resp_hi - resp_lo;
  for (int k = 1; k <= 20; ++k) {
    double step = span * std::ldexp(1.0, -k);
    candidates.push_back(preferred == 1 ? resp_hi - step : resp_lo + step);
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 200; ++k) {
    candidates.push_back(resp_lo + span * canonical_uniform(rng()));
  }

  Belief best_at = 0.0;
  double best_gap = 0.0;
  for (Belief b : candidates) {
    if (b <= kBeliefEps || b >= 1.0 - kBeliefEps) continue;
    double gap = gap_at(b);
    if (gap > best_gap) {
      best_gap = gap;
      best_at = b;
    }
  }
  if (best_gap <= kBeliefEps) {
    return {std::nullopt,
            "search exhausted without a positive gap despite preconditions",
            true};
  }
  Witness w{witness_scenario(prefs, agent_signal, best_at, best_at, best_at),
            best_at, best_gap};
  return {w, "", true};
}

WitnessSearchResult find_design_witness(const Preferences& prefs,
                                        const BinarySignal& agent_signal,
                                        std::uint64_t seed) {
  if (auto reason = witness_preconditions(prefs, agent_signal)) {
    return {std::nullopt, *reason};
  }
  StagePayoffCurve curve = stage_payoff_curve(agent_signal, prefs);
  if (!curve.discontinuity) {
    return {std::nullopt,
            "stage payoff is continuous: maximal designs are always weakly "
            "optimal, no constraint can be strictly binding"};
  }
  const Belief jump = curve.discontinuity->at;

  // Edge of the region beside the jump where the stage payoff strictly
  // exceeds the direct envelope: the crossing of the intermediate section
  // with the action line it hands over to. Priors there let a one-sided
  // design pinned at the jump keep its value while the maximal chord cannot.
  int preferred = *principal_preferred_action(prefs);
  double mid_slope = intermediate_slope(agent_signal, prefs);
  double mid_at_jump = curve.discontinuity->value;
  double action_slope = preferred == 1
                            ? prefs.principal.u11 - prefs.principal.u01
                            : prefs.principal.u10 - prefs.principal.u00;
  double action_at_jump =
      action_payoff(prefs.principal, preferred, jump);
  // The slope sandwich makes the denominators nonzero and the crossing land
  // strictly on the preferred side of the jump.
  double edge =
      jump + (mid_at_jump - action_at_jump) / (action_slope - mid_slope);
  edge = std::clamp(edge, 0.0, 1.0);

  auto gap_of = [&](Belief prior, Belief max_low, Belief max_high) -> double {
    if (prior - max_low <= kBeliefEps || max_high - prior <= kBeliefEps) {
      return 0.0;
    }
    Scenario s = witness_scenario(prefs, agent_signal, prior, max_low, max_high);
    double maximal = mix(prior, max_low, curve.value(max_low), max_high,
                         curve.value(max_high));
    return optimal_design(s, curve).expected_payoff - maximal;
  };

  std::vector<Belief> priors, lows, highs;
  double inner = std::abs(edge - jump);
  for (int k = 1; k <= 16; ++k) {
    double step = std::ldexp(1.0, -k);
    priors.push_back(jump + (edge - jump) * step);
    if (preferred == 1) {
      lows.push_back(jump * (1.0 - step));
      highs.push_back(std::min(1.0, edge + (1.0 - edge) * step));
      highs.push_back(std::min(1.0, jump + inner * (1.0 + step)));
    } else {
      highs.push_back(jump + (1.0 - jump) * step);
      lows.push_back(std::max(0.0, edge - edge * step));
      lows.push_back(std::max(0.0, jump - inner * (1.0 + step)));
    }
  }

  Witness best;
  double best_gap = 0.0;
  auto scan = [&]() {
    for (Belief prior : priors) {
      if (prior <= kBeliefEps || prior >= 1.0 - kBeliefEps) continue;
      for (Belief low : lows) {
        for (Belief high : highs) {
          if (low < 0.0 || high > 1.0 || low >= prior || high <= prior) continue;
          double gap = gap_of(prior, low, high);
          if (gap > best_gap) {
            best_gap = gap;
            best = Witness{
                witness_scenario(prefs, agent_signal, prior, low, high), prior,
                gap};
          }
        }
      }
    }
  };
  scan();
  // The deterministic ladders already bracket the jump tightly; widen the
  // net with seeded samples only when they came up short.
  if (best_gap <= 1e-6) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 60; ++k) {
      priors.push_back(jump + (edge - jump) * canonical_uniform(rng()));
      if (preferred == 1) {
        lows.push_back(jump * canonical_uniform(rng()));
        highs.push_back(edge + (1.0 - edge) * canonical_uniform(rng()));
      } else {
        highs.push_back(jump + (1.0 - jump) * canonical_uniform(rng()));
        lows.push_back(edge * canonical_uniform(rng()));
      }
    }
    scan();
  }
  if (best_gap <= kBeliefEps) {
    return {std::nullopt,
            "search exhausted without a positive gap despite a discontinuity",
            true};
  }
  return {best, "", true};
}

}  // namespace delib
