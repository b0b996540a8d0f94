#include "delib/design.hpp"

#include <algorithm>
#include <cmath>

namespace delib {

namespace {

struct Affine {
  double intercept = 0.0;
  double slope = 0.0;

  double at(double x) const { return intercept + slope * x; }
};

Affine action_line(const PayoffMatrix& m, int action) {
  double in_low = action == 1 ? m.u01 : m.u00;
  double in_high = action == 1 ? m.u11 : m.u10;
  return {in_low, in_high - in_low};
}

Affine intermediate_line(const BinarySignal& q, const PayoffMatrix& m) {
  double q0 = q.t0();
  double q1 = q.t1();
  return {m.u00 * q0 + m.u01 * (1.0 - q0),
          (m.u10 - m.u01) + (m.u01 - m.u00) * q0 + (m.u11 - m.u10) * q1};
}

// Upper envelope of a few affine pieces over [lo, hi], exact coefficients.
std::vector<AffineSection> upper_envelope(const std::vector<Affine>& lines,
                                          Belief lo, Belief hi) {
  std::vector<double> cuts = {lo, hi};
  for (size_t i = 0; i < lines.size(); ++i) {
    for (size_t j = i + 1; j < lines.size(); ++j) {
      double ds = lines[i].slope - lines[j].slope;
      if (ds == 0.0) continue;
      double x = (lines[j].intercept - lines[i].intercept) / ds;
      if (x > lo && x < hi) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a <= 1e-15; }),
             cuts.end());

  std::vector<AffineSection> sections;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    size_t best = 0;
    for (size_t k = 1; k < lines.size(); ++k) {
      if (lines[k].at(mid) > lines[best].at(mid)) best = k;
    }
    if (!sections.empty() &&
        sections.back().intercept == lines[best].intercept &&
        sections.back().slope == lines[best].slope) {
      sections.back().hi = cuts[i + 1];
    } else {
      sections.push_back(
          {cuts[i], cuts[i + 1], lines[best].intercept, lines[best].slope});
    }
  }
  if (sections.empty()) {
    // Degenerate region (lo == hi); represent it with the best line there.
    size_t best = 0;
    for (size_t k = 1; k < lines.size(); ++k) {
      if (lines[k].at(lo) > lines[best].at(lo)) best = k;
    }
    sections.push_back({lo, hi, lines[best].intercept, lines[best].slope});
  }
  return sections;
}

}  // namespace

std::pair<Belief, Belief> responsive_interval(const BinarySignal& agent_signal,
                                              const Preferences& prefs) {
  Belief agent_cut = cutoff(prefs.agent);
  double q0 = agent_signal.t0();
  double q1 = agent_signal.t1();
  // Interims whose high (resp. low) final lands exactly on the agent cutoff.
  Belief lo = (1.0 - q0) * agent_cut /
              ((1.0 - q0) * agent_cut + q1 * (1.0 - agent_cut));
  Belief hi = q0 * agent_cut / (q0 * agent_cut + (1.0 - q1) * (1.0 - agent_cut));
  return {lo, hi};
}

Belief indifference_interim(const BinarySignal& agent_signal,
                            const Preferences& prefs) {
  std::optional<int> preferred = principal_preferred_action(prefs);
  if (!preferred) {
    throw ModelError(ErrorCode::AlignedPreferences,
                     "aligned preferences: the stage payoff has no "
                     "indifference interim");
  }
  auto [lo, hi] = responsive_interval(agent_signal, prefs);
  return *preferred == 1 ? lo : hi;
}

double stage_payoff(Belief interim, const BinarySignal& agent_signal,
                    const Preferences& prefs) {
  return std::max(exante_delegation_payoff(interim, agent_signal, prefs),
                  non_delegation_envelope(prefs, interim));
}

double intermediate_slope(const BinarySignal& agent_signal,
                          const Preferences& prefs) {
  return intermediate_line(agent_signal, prefs.principal).slope;
}

double StagePayoffCurve::value(Belief b) const {
  if (discontinuity && std::abs(b - discontinuity->at) <= kBeliefEps) {
    return discontinuity->value;
  }
  // Sections are contiguous over [0, 1]; find the one whose range holds b.
  size_t lo = 0, hi = sections.size();
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    if (b < sections[mid].lo) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return sections[lo].at(b);
}

StagePayoffCurve stage_payoff_curve(const BinarySignal& agent_signal,
                                    const Preferences& prefs) {
  const PayoffMatrix& m = prefs.principal;
  Affine low_line = action_line(m, 0);
  Affine high_line = action_line(m, 1);
  Affine mid_line = intermediate_line(agent_signal, m);
  auto [resp_lo, resp_hi] = responsive_interval(agent_signal, prefs);
  std::optional<int> preferred = principal_preferred_action(prefs);

  StagePayoffCurve curve;
  if (!preferred) {
    // Aligned: delegation is free information, the stage payoff is the
    // continuous convex envelope of all three lines.
    curve.sections = upper_envelope({low_line, high_line, mid_line}, 0.0, 1.0);
  } else {
    // The intermediate section can only beat acting directly on the closed
    // side of the indifference interim that contains the responsive
    // interval's principal-preferred end; the other side is the direct
    // envelope alone.
    Belief jump_at = *preferred == 1 ? resp_lo : resp_hi;
    std::vector<AffineSection> left, right;
    if (*preferred == 1) {
      left = upper_envelope({low_line, high_line}, 0.0, jump_at);
      right = upper_envelope({low_line, high_line, mid_line}, jump_at, 1.0);
    } else {
      left = upper_envelope({low_line, high_line, mid_line}, 0.0, jump_at);
      right = upper_envelope({low_line, high_line}, jump_at, 1.0);
    }
    double left_at = left.back().at(jump_at);
    double right_at = right.front().at(jump_at);
    double upper = std::max(left_at, right_at);
    double lower = std::min(left_at, right_at);
    if (upper - lower > kBeliefEps) {
      curve.discontinuity = StageDiscontinuity{
          jump_at, lower, upper, /*limit_from_left=*/*preferred == 1};
    }
    curve.sections = std::move(left);
    curve.sections.insert(curve.sections.end(), right.begin(), right.end());
  }

  curve.breakpoints.reserve(curve.sections.size() + 3);
  for (const AffineSection& s : curve.sections) curve.breakpoints.push_back(s.lo);
  curve.breakpoints.push_back(curve.sections.back().hi);
  curve.breakpoints.push_back(resp_lo);
  curve.breakpoints.push_back(resp_hi);
  curve.breakpoints.push_back(cutoff(m));
  std::sort(curve.breakpoints.begin(), curve.breakpoints.end());
  curve.breakpoints.erase(
      std::unique(curve.breakpoints.begin(), curve.breakpoints.end(),
                  [](double a, double b) { return b - a <= kBeliefEps; }),
      curve.breakpoints.end());
  return curve;
}

bool convexifiable(Belief left, double left_value, Belief mid, double mid_value,
                   Belief right, double right_value) {
  if (!(left < mid && mid < right)) {
    throw ModelError(ErrorCode::UnsortedPoints,
                     "chord test needs left < mid < right");
  }
  double chord = left_value +
                 (right_value - left_value) * (mid - left) / (right - left);
  return mid_value <= chord + kBeliefEps;
}

namespace {

DesignSolution uninformative_solution(Belief prior, double payoff) {
  DesignSolution s;
  s.low_posterior = prior;
  s.high_posterior = prior;
  s.signal = BinarySignal::uninformative();
  s.expected_payoff = payoff;
  s.regime = DesignRegime::Uninformative;
  return s;
}

double mix_at(Belief prior, Belief low, double low_value, Belief high,
              double high_value) {
  double w = (prior - low) / (high - low);
  return low_value + w * (high_value - low_value);
}

}  // namespace

const char* design_regime_name(DesignRegime regime) {
  switch (regime) {
    case DesignRegime::Maximal:
      return "Maximal";
    case DesignRegime::OneSidedHigh:
      return "OneSidedHigh";
    case DesignRegime::OneSidedLow:
      return "OneSidedLow";
    case DesignRegime::Uninformative:
      return "Uninformative";
    case DesignRegime::AlignedTrivial:
      return "AlignedTrivial";
  }
  return "Unknown";
}

DesignSolution optimal_design(const Scenario& scenario) {
  return optimal_design(scenario,
                        stage_payoff_curve(scenario.agent_signal, scenario.prefs));
}

DesignSolution optimal_design(const Scenario& scenario,
                              const StagePayoffCurve& curve) {
  const Belief prior = scenario.prior;
  const BlackwellConstraint& cap = scenario.constraint;

  if (prior <= kBeliefEps || prior >= 1.0 - kBeliefEps) {
    // Nothing to learn, or no signal can move the belief.
    return uninformative_solution(prior, curve.value(prior));
  }
  bool low_pinned = prior - cap.max_low <= kBeliefEps;
  bool high_pinned = cap.max_high - prior <= kBeliefEps;
  if (low_pinned || high_pinned) {
    // Every feasible signal keeps one realization at the prior with
    // probability one, so no feasible signal carries information.
    return uninformative_solution(prior, curve.value(prior));
  }

  double value_low = curve.value(cap.max_low);
  double value_high = curve.value(cap.max_high);
  double maximal_payoff =
      mix_at(prior, cap.max_low, value_low, cap.max_high, value_high);

  if (!principal_preferred_action(scenario.prefs)) {
    DesignSolution s;
    s.low_posterior = cap.max_low;
    s.high_posterior = cap.max_high;
    s.signal = signal_from_posteriors(prior, cap.max_low, cap.max_high);
    s.expected_payoff = maximal_payoff;
    s.regime = DesignRegime::AlignedTrivial;
    return s;
  }

  Belief jump_at = indifference_interim(scenario.agent_signal, scenario.prefs);
  bool jump_inside = jump_at > cap.max_low + kBeliefEps &&
                     jump_at < cap.max_high - kBeliefEps;
  bool maximal_best =
      !jump_inside ||
      convexifiable(cap.max_low, value_low, jump_at, curve.value(jump_at),
                    cap.max_high, value_high);
  if (maximal_best) {
    DesignSolution s;
    s.low_posterior = cap.max_low;
    s.high_posterior = cap.max_high;
    s.signal = signal_from_posteriors(prior, cap.max_low, cap.max_high);
    s.expected_payoff = maximal_payoff;
    s.regime = DesignRegime::Maximal;
    return s;
  }

  double value_jump = curve.value(jump_at);
  if (std::abs(prior - jump_at) <= kBeliefEps) {
    // The prior already sits on the jump; any spread loses its value.
    return uninformative_solution(prior, value_jump);
  }
  DesignSolution s;
  if (prior > jump_at) {
    s.low_posterior = jump_at;
    s.high_posterior = cap.max_high;
    s.expected_payoff = mix_at(prior, jump_at, value_jump, cap.max_high, value_high);
    s.regime = DesignRegime::OneSidedHigh;
  } else {
    s.low_posterior = cap.max_low;
    s.high_posterior = jump_at;
    s.expected_payoff = mix_at(prior, cap.max_low, value_low, jump_at, value_jump);
    s.regime = DesignRegime::OneSidedLow;
  }
  s.signal = signal_from_posteriors(prior, s.low_posterior, s.high_posterior);
  return s;
}

}  // namespace delib
