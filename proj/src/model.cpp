#include "delib/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace delib {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroProbabilityRealization:
      return "ZeroProbabilityRealization";
    case ErrorCode::InvalidBracket:
      return "InvalidBracket";
    case ErrorCode::DegeneratePrior:
      return "DegeneratePrior";
    case ErrorCode::AssumptionViolated:
      return "AssumptionViolated";
    case ErrorCode::AlignedPreferences:
      return "AlignedPreferences";
    case ErrorCode::NotBlackwellOrdered:
      return "NotBlackwellOrdered";
    case ErrorCode::NotMoreMisaligned:
      return "NotMoreMisaligned";
    case ErrorCode::CaseMismatch:
      return "CaseMismatch";
    case ErrorCode::InvalidSampleCount:
      return "InvalidSampleCount";
    case ErrorCode::UnsortedPoints:
      return "UnsortedPoints";
    case ErrorCode::InvalidProbability:
      return "InvalidProbability";
  }
  return "UnknownError";
}

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

void require_probability(double x, const char* what) {
  if (!is_probability(x)) {
    throw ModelError(ErrorCode::InvalidProbability,
                     std::string(what) + " must lie in [0, 1], got " +
                         std::to_string(x));
  }
}

}  // namespace

BinarySignal::BinarySignal(double t0, double t1) : t0_(t0), t1_(t1) {
  require_probability(t0, "t0");
  require_probability(t1, "t1");
  double sum = t0_ + t1_;
  if (sum < 1.0 - kBeliefEps) {
    throw ModelError(ErrorCode::InvalidProbability,
                     "t0 + t1 = " + std::to_string(sum) +
                         " < 1; relabel realizations so high raises the belief");
  }
  if (sum <= 1.0 + kBeliefEps) {
    // No information either way; normalize so uninformative signals compare
    // equal regardless of parameterization.
    t0_ = 0.5;
    t1_ = 0.5;
  }
}

Belief update_belief(Belief prior, const BinarySignal& signal, int realization) {
  require_probability(prior, "prior");
  if (realization != 0 && realization != 1) {
    throw ModelError(ErrorCode::InvalidProbability,
                     "realization must be 0 or 1, got " +
                         std::to_string(realization));
  }
  double t0 = signal.t0();
  double t1 = signal.t1();
  double likely_high = realization == 1 ? t1 : 1.0 - t1;
  double likely_low = realization == 1 ? 1.0 - t0 : t0;
  double prob = likely_high * prior + likely_low * (1.0 - prior);
  if (prob == 0.0) {
    throw ModelError(ErrorCode::ZeroProbabilityRealization,
                     "realization " + std::to_string(realization) +
                         " has probability 0 at prior " + std::to_string(prior));
  }
  if (prior == 0.0 || prior == 1.0) return prior;
  return likely_high * prior / prob;
}

PosteriorPair posteriors_of_signal(Belief prior, const BinarySignal& signal) {
  require_probability(prior, "prior");
  double t0 = signal.t0();
  double t1 = signal.t1();
  PosteriorPair out;
  out.prob_high = (1.0 - t0) * (1.0 - prior) + t1 * prior;
  double prob_low = 1.0 - out.prob_high;
  if (prior == 0.0 || prior == 1.0) {
    out.low = prior;
    out.high = prior;
    return out;
  }
  out.high = out.prob_high > 0.0 ? t1 * prior / out.prob_high : prior;
  out.low = prob_low > 0.0 ? (1.0 - t1) * prior / prob_low : prior;
  return out;
}

BinarySignal signal_from_posteriors(Belief prior, Belief low, Belief high) {
  require_probability(prior, "prior");
  require_probability(low, "low posterior");
  require_probability(high, "high posterior");
  if (prior <= kBeliefEps || prior >= 1.0 - kBeliefEps) {
    throw ModelError(ErrorCode::DegeneratePrior,
                     "no informative signal exists at prior " +
                         std::to_string(prior));
  }
  if (low > high || low > prior + kBeliefEps || high < prior - kBeliefEps) {
    throw ModelError(ErrorCode::InvalidBracket,
                     "posteriors must bracket the prior: low " +
                         std::to_string(low) + ", prior " +
                         std::to_string(prior) + ", high " +
                         std::to_string(high));
  }
  if (high - low <= kBeliefEps) return BinarySignal::uninformative();
  double w = (prior - low) / (high - low);  // probability of the high posterior
  w = std::clamp(w, 0.0, 1.0);
  double t1 = w * high / prior;
  double t0 = (1.0 - w) * (1.0 - low) / (1.0 - prior);
  return BinarySignal(std::clamp(t0, 0.0, 1.0), std::clamp(t1, 0.0, 1.0));
}

Belief cutoff(const PayoffMatrix& m) {
  double gain0 = m.u00 - m.u01;  // value of the correct action in state 0
  double gain1 = m.u11 - m.u10;  // value of the correct action in state 1
  if (!(gain0 > 0.0) || !(gain1 > 0.0)) {
    throw ModelError(ErrorCode::AssumptionViolated,
                     "payoffs must satisfy u00 > u01 and u11 > u10 (gains " +
                         std::to_string(gain0) + ", " + std::to_string(gain1) +
                         ")");
  }
  return gain0 / (gain0 + gain1);
}

double action_payoff(const PayoffMatrix& m, int action, Belief belief) {
  if (action != 0 && action != 1) {
    throw ModelError(ErrorCode::InvalidProbability,
                     "action must be 0 or 1, got " + std::to_string(action));
  }
  double in_low = action == 1 ? m.u01 : m.u00;
  double in_high = action == 1 ? m.u11 : m.u10;
  return (1.0 - belief) * in_low + belief * in_high;
}

double non_delegation_envelope(const Preferences& prefs, Belief belief) {
  return std::max(action_payoff(prefs.principal, 0, belief),
                  action_payoff(prefs.principal, 1, belief));
}

namespace {

// Agent's action at `belief`, ties resolved toward the principal.
int agent_action(const Preferences& prefs, Belief belief) {
  Belief agent_cut = cutoff(prefs.agent);
  if (belief > agent_cut + kBeliefEps) return 1;
  if (belief < agent_cut - kBeliefEps) return 0;
  std::optional<int> preferred = principal_preferred_action(prefs);
  // Aligned and indifferent: both actions give the principal the same payoff.
  return preferred.value_or(1);
}

}  // namespace

double delegation_envelope(const Preferences& prefs, Belief belief) {
  return action_payoff(prefs.principal, agent_action(prefs, belief), belief);
}

std::pair<Belief, Belief> disagreement_interval(const Preferences& prefs) {
  Belief a = cutoff(prefs.principal);
  Belief b = cutoff(prefs.agent);
  return std::minmax(a, b);
}

std::optional<int> principal_preferred_action(const Preferences& prefs) {
  Belief principal_cut = cutoff(prefs.principal);
  Belief agent_cut = cutoff(prefs.agent);
  if (principal_cut < agent_cut - kBeliefEps) return 1;
  if (principal_cut > agent_cut + kBeliefEps) return 0;
  return std::nullopt;
}

bool blackwell_leq(const BinarySignal& weak, const BinarySignal& strong,
                   Belief prior) {
  if (prior <= kBeliefEps || prior >= 1.0 - kBeliefEps) {
    throw ModelError(ErrorCode::DegeneratePrior,
                     "Blackwell comparison needs an interior prior");
  }
  PosteriorPair a = posteriors_of_signal(prior, weak);
  PosteriorPair b = posteriors_of_signal(prior, strong);
  return a.low >= b.low - kBeliefEps && a.high <= b.high + kBeliefEps;
}

namespace {

void classify_payoffs(const PayoffMatrix& m, const std::string& field,
                      std::vector<ValidationIssue>& issues) {
  double gain0 = m.u00 - m.u01;
  double gain1 = m.u11 - m.u10;
  if (gain0 > 0.0 && gain1 > 0.0) return;
  if (gain0 <= 0.0 && gain1 <= 0.0) {
    issues.push_back({field, "StateMismatching",
                      "both correct-action gains are non-positive; the labeled "
                      "actions are swapped relative to the states"});
    return;
  }
  int dominant = gain0 <= 0.0 ? 1 : 0;
  issues.push_back({field, std::string("DominantAction") + (dominant ? "1" : "0"),
                    "action " + std::to_string(dominant) +
                        " is weakly optimal in both states; no cutoff exists"});
}

}  // namespace

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report;
  auto& issues = report.issues;

  if (!is_probability(scenario.prior)) {
    issues.push_back({"prior", "InvalidProbability", "prior must lie in [0, 1]"});
  }
  classify_payoffs(scenario.prefs.principal, "principal", issues);
  classify_payoffs(scenario.prefs.agent, "agent", issues);

  const BinarySignal& q = scenario.agent_signal;
  if (!q.informative()) {
    issues.push_back({"agent_signal", "UninformativeAgentSignal",
                      "agent signal needs q0 + q1 > 1; an uninformative agent "
                      "makes delegation equivalent to acting directly"});
  }

  const BlackwellConstraint& c = scenario.constraint;
  if (!is_probability(c.max_low) || !is_probability(c.max_high) ||
      c.max_low > c.max_high + kBeliefEps) {
    issues.push_back({"constraint", "InvalidBracket",
                      "constraint posteriors must satisfy 0 <= max_low <= "
                      "max_high <= 1"});
  } else if (is_probability(scenario.prior) &&
             (c.max_low > scenario.prior + kBeliefEps ||
              c.max_high < scenario.prior - kBeliefEps)) {
    issues.push_back({"constraint", "PriorOutsideBracket",
                      "constraint must bracket the prior: no feasible signal "
                      "otherwise"});
  }
  return report;
}

}  // namespace delib
