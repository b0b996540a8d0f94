#include "delib/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "delib/delegation.hpp"

namespace delib {

namespace {

// Axis of `n` evenly spaced points with exact endpoints, optionally followed
// by one injected interior point. Scan order is array order.
std::vector<double> axis_points(double lo, double hi, int n,
                                std::optional<double> inject) {
  std::vector<double> pts(static_cast<size_t>(n));
  pts.front() = lo;
  pts.back() = hi;
  for (int i = 1; i + 1 < n; ++i) {
    pts[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  if (inject && *inject > lo && *inject < hi) pts.push_back(*inject);
  return pts;
}

}  // namespace

GridResult grid_optimal_design(const Scenario& scenario, int grid_n) {
  if (grid_n < 2) {
    throw ModelError(ErrorCode::InvalidSampleCount,
                     "grid needs at least 2 points per axis");
  }
  const Belief prior = scenario.prior;
  const BlackwellConstraint& cap = scenario.constraint;

  std::optional<double> jump;
  if (principal_preferred_action(scenario.prefs)) {
    jump = indifference_interim(scenario.agent_signal, scenario.prefs);
  }
  std::vector<double> lows = axis_points(cap.max_low, prior, grid_n, jump);
  std::vector<double> highs = axis_points(prior, cap.max_high, grid_n, jump);

  auto stage = [&](Belief b) {
    return std::max(
        exante_delegation_payoff(b, scenario.agent_signal, scenario.prefs),
        non_delegation_envelope(scenario.prefs, b));
  };
  std::vector<double> low_values(lows.size()), high_values(highs.size());
  for (size_t i = 0; i < lows.size(); ++i) low_values[i] = stage(lows[i]);
  for (size_t i = 0; i < highs.size(); ++i) high_values[i] = stage(highs[i]);

  GridResult best;
  best.grid_step = std::max((prior - cap.max_low) / (grid_n - 1),
                            (cap.max_high - prior) / (grid_n - 1));
  // The no-signal design; pairs with zero weight on one side reduce to it.
  best.best_low = prior;
  best.best_high = prior;
  best.best_payoff = stage(prior);

  const double tie = kBeliefEps;
  double best_width = 0.0;
  for (size_t il = 0; il < lows.size(); ++il) {
    double low = lows[il];
    double weight_num = prior - low;
    if (weight_num <= 0.0) continue;  // low == prior: no-signal pair
    double low_value = low_values[il];
    // Reject via cross-multiplication: payoff < best - tie iff
    // weight_num * (high_value - low_value) < (best - tie - low_value) * span.
    double reject = best.best_payoff - tie - low_value;
    for (size_t ih = 0; ih < highs.size(); ++ih) {
      double high = highs[ih];
      double span = high - low;
      if (high - prior <= 0.0) continue;  // high == prior: no-signal pair
      double rise = weight_num * (high_values[ih] - low_value);
      if (rise < reject * span) continue;
      double payoff = low_value + rise / span;
      if (payoff > best.best_payoff + tie ||
          (payoff > best.best_payoff - tie && span > best_width)) {
        best.best_low = low;
        best.best_high = high;
        best.best_payoff = payoff;
        best_width = span;
        reject = best.best_payoff - tie - low_value;
      }
    }
  }
  return best;
}

McEstimate mc_pipeline_payoff(const Scenario& scenario,
                              const DesignSolution& design, PolicyRegime regime,
                              long samples, std::uint64_t seed) {
  if (samples < 1000) {
    throw ModelError(ErrorCode::InvalidSampleCount,
                     "Monte Carlo needs at least 1000 samples, got " +
                         std::to_string(samples));
  }
  const Preferences& prefs = scenario.prefs;
  const PayoffMatrix& m = prefs.principal;
  const double prior = scenario.prior;
  const double p0 = design.signal.t0();
  const double p1 = design.signal.t1();
  const double q0 = scenario.agent_signal.t0();
  const double q1 = scenario.agent_signal.t1();

  // Interims and finals take four values; resolve every decision up front so
  // the sample loop only draws and accumulates.
  PosteriorPair interims = posteriors_of_signal(prior, design.signal);
  double interim_of[2] = {interims.low, interims.high};
  bool delegate_at[2];
  int direct_action[2];
  int agent_action[2][2];  // [public realization][private realization]
  Belief agent_cut = cutoff(prefs.agent);
  std::optional<int> preferred = principal_preferred_action(prefs);
  for (int s1 = 0; s1 < 2; ++s1) {
    double interim = interim_of[s1];
    switch (regime) {
      case PolicyRegime::MandatedDelegation:
        delegate_at[s1] = true;
        break;
      case PolicyRegime::NoHuman:
        delegate_at[s1] = false;
        break;
      default:
        delegate_at[s1] =
            optimal_delegation(interim, scenario.agent_signal, prefs).delegate;
        break;
    }
    direct_action[s1] =
        action_payoff(m, 1, interim) > action_payoff(m, 0, interim) ? 1 : 0;
    PosteriorPair finals = posteriors_of_signal(interim, scenario.agent_signal);
    double final_of[2] = {finals.low, finals.high};
    for (int s2 = 0; s2 < 2; ++s2) {
      double refined = final_of[s2];
      if (refined > agent_cut + kBeliefEps) {
        agent_action[s1][s2] = 1;
      } else if (refined < agent_cut - kBeliefEps) {
        agent_action[s1][s2] = 0;
      } else {
        agent_action[s1][s2] = preferred.value_or(1);
      }
    }
  }

  std::mt19937_64 rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    double u_state = canonical_uniform(rng());
    double u_public = canonical_uniform(rng());
    double u_private = canonical_uniform(rng());
    int state = u_state < prior ? 1 : 0;
    int s1 = state == 1 ? (u_public < p1 ? 1 : 0) : (u_public < p0 ? 0 : 1);
    int action;
    if (delegate_at[s1]) {
      int s2 = state == 1 ? (u_private < q1 ? 1 : 0) : (u_private < q0 ? 0 : 1);
      action = agent_action[s1][s2];
    } else {
      action = direct_action[s1];
    }
    double payoff = state == 1 ? (action == 1 ? m.u11 : m.u10)
                               : (action == 1 ? m.u01 : m.u00);
    sum += payoff;
    sum_sq += payoff * payoff;
  }

  McEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.mean = sum / static_cast<double>(samples);
  double n = static_cast<double>(samples);
  double variance = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
  est.half_width = 2.5758293035489004 * std::sqrt(variance / n);
  return est;
}

bool brute_check_delegation(Belief interim, const BinarySignal& agent_signal,
                            const Preferences& prefs) {
  // Joint probabilities of (state, private realization), no posterior algebra.
  double q0 = agent_signal.t0();
  double q1 = agent_signal.t1();
  double joint[2][2];  // [state][realization]
  joint[0][0] = (1.0 - interim) * q0;
  joint[0][1] = (1.0 - interim) * (1.0 - q0);
  joint[1][0] = interim * (1.0 - q1);
  joint[1][1] = interim * q1;

  const PayoffMatrix& r = prefs.principal;
  const PayoffMatrix& v = prefs.agent;
  double delegation_total = 0.0;
  for (int s2 = 0; s2 < 2; ++s2) {
    double mass0 = joint[0][s2];
    double mass1 = joint[1][s2];
    // Agent's conditional expected payoffs for each action, scaled by the
    // realization's probability; scaling preserves the comparison.
    double agent0 = mass0 * v.u00 + mass1 * v.u10;
    double agent1 = mass0 * v.u01 + mass1 * v.u11;
    double principal0 = mass0 * r.u00 + mass1 * r.u10;
    double principal1 = mass0 * r.u01 + mass1 * r.u11;
    double scale = std::max({1.0, std::abs(agent0), std::abs(agent1)});
    int action;
    if (std::abs(agent1 - agent0) <= kBeliefEps * scale) {
      action = principal1 >= principal0 ? 1 : 0;
    } else {
      action = agent1 > agent0 ? 1 : 0;
    }
    delegation_total += action == 1 ? principal1 : principal0;
  }
  double direct0 = (1.0 - interim) * r.u00 + interim * r.u10;
  double direct1 = (1.0 - interim) * r.u01 + interim * r.u11;
  return delegation_total > std::max(direct0, direct1);
}

}  // namespace delib
