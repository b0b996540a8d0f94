#include "delib/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

#include "delib/delegation.hpp"

namespace delib {

namespace {

const std::pair<const char*, SweepField> kFieldNames[] = {
    {"prior", SweepField::Prior},   {"q", SweepField::Q},
    {"q0", SweepField::Q0},         {"q1", SweepField::Q1},
    {"max_low", SweepField::MaxLow}, {"max_high", SweepField::MaxHigh},
    {"agent_cutoff", SweepField::AgentCutoff},
    {"r00", SweepField::R00},       {"r01", SweepField::R01},
    {"r10", SweepField::R10},       {"r11", SweepField::R11},
    {"v00", SweepField::V00},       {"v01", SweepField::V01},
    {"v10", SweepField::V10},       {"v11", SweepField::V11},
};

Scenario with_value(const Scenario& base, SweepField field, double v) {
  Scenario s = base;
  switch (field) {
    case SweepField::Prior: s.prior = v; break;
    case SweepField::Q: s.agent_signal = BinarySignal(v, v); break;
    case SweepField::Q0:
      s.agent_signal = BinarySignal(v, base.agent_signal.t1());
      break;
    case SweepField::Q1:
      s.agent_signal = BinarySignal(base.agent_signal.t0(), v);
      break;
    case SweepField::MaxLow: s.constraint.max_low = v; break;
    case SweepField::MaxHigh: s.constraint.max_high = v; break;
    case SweepField::AgentCutoff: {
      if (v <= 0.0 || v >= 1.0) {
        throw ModelError(ErrorCode::InvalidProbability,
                         "agent_cutoff must be interior, got " +
                             std::to_string(v));
      }
      // Keep the state-0 gain, rescale the state-1 gain so the cutoff is v.
      PayoffMatrix& a = s.prefs.agent;
      double gain0 = a.u00 - a.u01;
      a.u11 = a.u10 + gain0 * (1.0 - v) / v;
      break;
    }
    case SweepField::R00: s.prefs.principal.u00 = v; break;
    case SweepField::R01: s.prefs.principal.u01 = v; break;
    case SweepField::R10: s.prefs.principal.u10 = v; break;
    case SweepField::R11: s.prefs.principal.u11 = v; break;
    case SweepField::V00: s.prefs.agent.u00 = v; break;
    case SweepField::V01: s.prefs.agent.u01 = v; break;
    case SweepField::V10: s.prefs.agent.u10 = v; break;
    case SweepField::V11: s.prefs.agent.u11 = v; break;
  }
  return s;
}

void require_valid(const Scenario& s, double value) {
  ValidationReport report = validate_scenario(s);
  if (report.ok()) return;
  const ValidationIssue& issue = report.issues.front();
  throw ModelError(ErrorCode::AssumptionViolated,
                   "swept value " + std::to_string(value) +
                       " produces an invalid scenario (" + issue.field + ": " +
                       issue.message + ")");
}

const char* classify_pair(const Scenario& s, Belief low, Belief high) {
  auto near = [](Belief a, Belief b) { return std::abs(a - b) <= kBeliefEps; };
  bool at_low = near(low, s.constraint.max_low);
  bool at_high = near(high, s.constraint.max_high);
  if (near(low, high)) return "Uninformative";
  if (at_low && at_high) return "Maximal";
  if (at_high) return "OneSidedHigh";
  if (at_low) return "OneSidedLow";
  return "Interior";
}

bool delegates_at(const Scenario& s, Belief interim) {
  return optimal_delegation(interim, s.agent_signal, s.prefs).delegate;
}

SweepRow regime_row(const Scenario& s, double value, PolicyRegime regime) {
  SweepRow row;
  row.value = value;
  row.series = policy_regime_name(regime);
  row.payoff = evaluate_regime(s, regime);
  switch (regime) {
    case PolicyRegime::OptimalJoint: {
      DesignSolution d = optimal_design(s);
      row.design_tag = design_regime_name(d.regime);
      PosteriorPair reach = posteriors_of_signal(s.prior, d.signal);
      row.delegates = (reach.prob_high < 1.0 && delegates_at(s, reach.low)) ||
                      (reach.prob_high > 0.0 && delegates_at(s, reach.high));
      break;
    }
    case PolicyRegime::MandatedDelegation: {
      DelegationDesign d = best_delegation_design(s);
      row.design_tag = classify_pair(s, d.low_posterior, d.high_posterior);
      row.delegates = true;
      break;
    }
    case PolicyRegime::MandatedMaximalSignal:
      row.design_tag = "Maximal";
      row.delegates = delegates_at(s, s.constraint.max_low) ||
                      delegates_at(s, s.constraint.max_high);
      break;
    case PolicyRegime::NoAlgorithm:
      row.design_tag = "Uninformative";
      row.delegates = delegates_at(s, s.prior);
      break;
    case PolicyRegime::NoHuman:
      row.design_tag = "Maximal";
      row.delegates = false;
      break;
  }
  return row;
}

}  // namespace

std::optional<SweepField> parse_sweep_field(const std::string& name) {
  for (const auto& [text, field] : kFieldNames) {
    if (name == text) return field;
  }
  return std::nullopt;
}

const char* sweep_field_name(SweepField field) {
  for (const auto& [text, f] : kFieldNames) {
    if (f == field) return text;
  }
  return "?";
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepRequest& request) {
  if (request.steps < 1) {
    throw ModelError(ErrorCode::InvalidSampleCount,
                     "sweep needs at least 1 step");
  }
  std::vector<PolicyRegime> regimes = request.regimes;
  if (regimes.empty()) {
    regimes = {PolicyRegime::OptimalJoint, PolicyRegime::MandatedDelegation,
               PolicyRegime::MandatedMaximalSignal, PolicyRegime::NoAlgorithm,
               PolicyRegime::NoHuman};
  }

  std::vector<SweepRow> rows;
  for (int i = 0; i < request.steps; ++i) {
    double value =
        request.steps == 1
            ? request.from
            : request.from +
                  (request.to - request.from) * i / (request.steps - 1);
    Scenario s = with_value(base, request.field, value);
    require_valid(s, value);

    if (request.interim) {
      Belief interim = *request.interim;
      DelegationDecision d =
          optimal_delegation(interim, s.agent_signal, s.prefs);
      rows.push_back({value, "delegation", d.delegation_payoff, "-", true});
      rows.push_back({value, "direct", d.direct_payoff, "-", false});
      rows.push_back(
          {value, "stage_optimal", d.stage_payoff(), "-", d.delegate});
    } else {
      for (PolicyRegime regime : regimes) {
        rows.push_back(regime_row(s, value, regime));
      }
    }
  }
  return rows;
}

FigureData figure_data(const Scenario& scenario, int grid_points) {
  if (grid_points < 2) {
    throw ModelError(ErrorCode::InvalidSampleCount,
                     "figure grid needs at least 2 points");
  }
  FigureData data;
  data.curve = stage_payoff_curve(scenario.agent_signal, scenario.prefs);
  data.principal_cutoff = cutoff(scenario.prefs.principal);
  data.agent_cutoff = cutoff(scenario.prefs.agent);
  data.responsive = responsive_interval(scenario.agent_signal, scenario.prefs);
  if (principal_preferred_action(scenario.prefs)) {
    data.jump_location =
        indifference_interim(scenario.agent_signal, scenario.prefs);
  }

  data.points.reserve(static_cast<size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) {
    Belief b = i == grid_points - 1
                   ? 1.0
                   : static_cast<double>(i) / (grid_points - 1);
    FigurePoint p;
    p.belief = b;
    p.direct_envelope = non_delegation_envelope(scenario.prefs, b);
    p.delegation_envelope = delegation_envelope(scenario.prefs, b);
    p.exante_delegation =
        exante_delegation_payoff(b, scenario.agent_signal, scenario.prefs);
    p.stage_payoff = data.curve.value(b);
    data.points.push_back(p);
  }
  return data;
}

namespace {

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_figure_csv(std::ostream& out, const FigureData& data) {
  out << "belief,direct_envelope,delegation_envelope,exante_delegation,"
         "stage_payoff\n";
  for (const auto& p : data.points) {
    out << num17(p.belief) << "," << num17(p.direct_envelope) << ","
        << num17(p.delegation_envelope) << "," << num17(p.exante_delegation)
        << "," << num17(p.stage_payoff) << "\n";
  }
}

std::string figure_annotations(const FigureData& data) {
  using json = nlohmann::ordered_json;
  json sections = json::array();
  for (const auto& sec : data.curve.sections) {
    sections.push_back(json{{"lo", sec.lo},
                            {"hi", sec.hi},
                            {"intercept", sec.intercept},
                            {"slope", sec.slope}});
  }
  json jump(nullptr);
  if (data.curve.discontinuity) {
    const auto& d = *data.curve.discontinuity;
    jump = json{{"at", d.at},
                {"limit_value", d.limit_value},
                {"value", d.value},
                {"limit_from_left", d.limit_from_left}};
  }
  json doc{
      {"principal_cutoff", data.principal_cutoff},
      {"agent_cutoff", data.agent_cutoff},
      {"responsive_interval", {data.responsive.first, data.responsive.second}},
      {"jump", jump},
      {"breakpoints", data.curve.breakpoints},
      {"sections", sections},
  };
  return doc.dump(2) + "\n";
}

}  // namespace delib
