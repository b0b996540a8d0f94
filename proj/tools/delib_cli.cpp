#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "delib/delegation.hpp"
#include "delib/design.hpp"
#include "delib/model.hpp"
#include "delib/oracle.hpp"
#include "delib/policy.hpp"
#include "delib/report.hpp"
#include "delib/scenario_io.hpp"

namespace {

using delib::Belief;
using delib::BinarySignal;
using delib::Scenario;
using json = nlohmann::ordered_json;

struct CliError {
  int code;
  std::string message;
};

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string show(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string yesno(bool v) { return v ? "yes" : "no"; }

Scenario load_scenario(const std::string& path) {
  delib::ScenarioDoc doc = delib::parse_scenario_file(path);
  Scenario s = delib::build_scenario(doc);
  delib::ValidationReport report = delib::validate_scenario(s);
  if (!report.issues.empty()) {
    std::string msg = "invalid scenario in " + path;
    for (const auto& issue : report.issues) {
      msg += "\n  " + issue.field + ": " + issue.message + " [" + issue.code + "]";
    }
    throw CliError{2, msg};
  }
  return s;
}

json signal_json(const BinarySignal& s) {
  return json{{"t0", s.t0()}, {"t1", s.t1()}, {"informative", s.informative()}};
}

json scenario_json(const Scenario& s) {
  const auto& r = s.prefs.principal;
  const auto& v = s.prefs.agent;
  return json{
      {"prior", s.prior},
      {"principal", {{"r00", r.u00}, {"r01", r.u01}, {"r10", r.u10}, {"r11", r.u11}}},
      {"agent", {{"v00", v.u00}, {"v01", v.u01}, {"v10", v.u10}, {"v11", v.u11}}},
      {"agent_signal", {{"q0", s.agent_signal.t0()}, {"q1", s.agent_signal.t1()}}},
      {"constraint",
       {{"max_low", s.constraint.max_low}, {"max_high", s.constraint.max_high}}},
  };
}

std::string scenario_toml(const Scenario& s) {
  const auto& r = s.prefs.principal;
  const auto& v = s.prefs.agent;
  std::ostringstream out;
  out << "prior = " << num17(s.prior) << "\n\n[principal]\n";
  out << "r00 = " << num17(r.u00) << "\nr01 = " << num17(r.u01) << "\n";
  out << "r10 = " << num17(r.u10) << "\nr11 = " << num17(r.u11) << "\n";
  out << "\n[agent]\n";
  out << "v00 = " << num17(v.u00) << "\nv01 = " << num17(v.u01) << "\n";
  out << "v10 = " << num17(v.u10) << "\nv11 = " << num17(v.u11) << "\n";
  out << "\n[agent_signal]\n";
  out << "q0 = " << num17(s.agent_signal.t0()) << "\n";
  out << "q1 = " << num17(s.agent_signal.t1()) << "\n";
  out << "\n[constraint]\nposteriors = [" << num17(s.constraint.max_low) << ", "
      << num17(s.constraint.max_high) << "]\n";
  return out.str();
}

int cmd_delegate(const std::string& path, std::optional<double> interim_opt,
                 bool as_json) {
  delib::ScenarioDoc doc = delib::parse_scenario_file(path);
  auto [prefs, signal] = delib::build_witness_inputs(doc);
  std::optional<Belief> interim = interim_opt ? interim_opt : doc.prior;
  if (!interim) {
    throw CliError{2, "no interim belief: pass --interim or set prior in " + path};
  }
  if (!(*interim >= 0.0 && *interim <= 1.0)) {
    throw CliError{2, "interim belief must lie in [0, 1]"};
  }

  Belief principal_cutoff = delib::cutoff(prefs.principal);
  Belief agent_cutoff = delib::cutoff(prefs.agent);
  auto disagreement = delib::disagreement_interval(prefs);
  delib::PosteriorPair finals = delib::final_posteriors(*interim, signal);
  delib::DelegationDecision decision =
      delib::optimal_delegation(*interim, signal, prefs);
  bool necessary = delib::necessary_condition(signal, *interim, prefs);

  if (as_json) {
    json out{
        {"interim", *interim},
        {"principal_cutoff", principal_cutoff},
        {"agent_cutoff", agent_cutoff},
        {"disagreement_interval", {disagreement.first, disagreement.second}},
        {"final_posteriors",
         {{"low", finals.low}, {"high", finals.high}, {"prob_high", finals.prob_high}}},
        {"delegation_payoff", decision.delegation_payoff},
        {"direct_payoff", decision.direct_payoff},
        {"delegate", decision.delegate},
        {"strict", decision.strict},
        {"necessary_condition", necessary},
        {"stage_payoff", decision.stage_payoff()},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << "interim belief         " << show(*interim) << "\n";
  std::cout << "principal cutoff       " << show(principal_cutoff) << "\n";
  std::cout << "agent cutoff           " << show(agent_cutoff) << "\n";
  std::cout << "disagreement interval  [" << show(disagreement.first) << ", "
            << show(disagreement.second) << "]\n";
  std::cout << "final posteriors       " << show(finals.low) << " / "
            << show(finals.high) << " (prob high " << show(finals.prob_high)
            << ")\n";
  std::cout << "delegation payoff      " << show(decision.delegation_payoff)
            << "\n";
  std::cout << "direct payoff          " << show(decision.direct_payoff) << "\n";
  std::cout << "decision               "
            << (decision.delegate ? "delegate" : "act directly") << "\n";
  std::cout << "strict gain            " << yesno(decision.strict) << "\n";
  std::cout << "necessary condition    " << yesno(necessary)
            << " (final spread vs disagreement interval)\n";
  return 0;
}

int cmd_design(const std::string& path, bool as_json) {
  Scenario s = load_scenario(path);
  delib::DesignSolution sol = delib::optimal_design(s);
  delib::StagePayoffCurve curve =
      delib::stage_payoff_curve(s.agent_signal, s.prefs);
  bool aligned = !delib::principal_preferred_action(s.prefs).has_value();
  std::optional<Belief> rho;
  if (!aligned) rho = delib::indifference_interim(s.agent_signal, s.prefs);

  const Belief lo = s.constraint.max_low;
  const Belief hi = s.constraint.max_high;
  double h_lo = curve.value(lo);
  double h_prior = curve.value(s.prior);
  double h_hi = curve.value(hi);
  double maximal = delib::evaluate_regime(s, delib::PolicyRegime::MandatedMaximalSignal);
  delib::PosteriorPair realized = delib::posteriors_of_signal(s.prior, sol.signal);

  std::optional<bool> convex;
  if (rho && lo + delib::kBeliefEps < *rho && *rho < hi - delib::kBeliefEps) {
    convex = delib::convexifiable(lo, h_lo, *rho, curve.value(*rho), hi, h_hi);
  }
  std::vector<delib::RegimeRow> regimes = delib::regime_report(s);

  if (as_json) {
    json rows = json::array();
    for (const auto& row : regimes) {
      rows.push_back(json{{"regime", delib::policy_regime_name(row.regime)},
                          {"payoff", row.payoff},
                          {"rank", row.rank}});
    }
    json out{
        {"regime", delib::design_regime_name(sol.regime)},
        {"low_posterior", sol.low_posterior},
        {"high_posterior", sol.high_posterior},
        {"signal", signal_json(sol.signal)},
        {"prob_high", realized.prob_high},
        {"expected_payoff", sol.expected_payoff},
        {"maximal_signal_payoff", maximal},
        {"indifference_interim", rho ? json(*rho) : json(nullptr)},
        {"convexifiable", convex ? json(*convex) : json(nullptr)},
        {"stage_payoff",
         {{"at_max_low", h_lo}, {"at_prior", h_prior}, {"at_max_high", h_hi}}},
        {"regimes", rows},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
  }

  std::cout << "design regime          " << delib::design_regime_name(sol.regime)
            << "\n";
  std::cout << "posteriors             " << show(sol.low_posterior) << ", "
            << show(sol.high_posterior) << "\n";
  std::cout << "signal                 t0=" << show(sol.signal.t0())
            << ", t1=" << show(sol.signal.t1()) << " (prob high "
            << show(realized.prob_high) << ")\n";
  std::cout << "expected payoff        " << show(sol.expected_payoff) << "\n";
  std::cout << "maximal signal payoff  " << show(maximal) << " (gap "
            << show(sol.expected_payoff - maximal) << ")\n";
  std::cout << "indifference interim   "
            << (rho ? show(*rho) : std::string("none (aligned preferences)"))
            << "\n";
  std::cout << "convexifiable bracket  "
            << (convex ? yesno(*convex)
                       : std::string("trivially (no interior jump)"))
            << "\n";
  std::cout << "stage payoff           low=" << show(h_lo) << " prior="
            << show(h_prior) << " high=" << show(h_hi) << "\n";
  std::cout << "\nregime comparison\n";
  for (const auto& row : regimes) {
    std::printf("  %d  %-22s %s\n", row.rank, delib::policy_regime_name(row.regime),
                show(row.payoff).c_str());
  }
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& vary, double from,
              std::optional<double> to, int steps,
              const std::vector<std::string>& regime_names,
              std::optional<double> interim, const std::string& out_path) {
  Scenario s = load_scenario(path);
  std::optional<delib::SweepField> field = delib::parse_sweep_field(vary);
  if (!field) {
    throw CliError{2,
                   "unknown sweep field '" + vary +
                       "' (expected one of: prior, q, q0, q1, max_low, "
                       "max_high, agent_cutoff, r00, r01, r10, r11, v00, v01, "
                       "v10, v11)"};
  }
  if (steps > 1 && !to) {
    throw CliError{2, "--steps > 1 requires --to"};
  }
  delib::SweepRequest req;
  req.field = *field;
  req.from = from;
  req.to = to.value_or(from);
  req.steps = steps;
  req.interim = interim;
  for (const auto& name : regime_names) {
    auto regime = delib::parse_policy_regime(name);
    if (!regime) {
      throw CliError{2,
                     "unknown regime '" + name +
                         "' (expected OptimalJoint, MandatedDelegation, "
                         "MandatedMaximalSignal, NoAlgorithm, NoHuman)"};
    }
    req.regimes.push_back(*regime);
  }

  std::vector<delib::SweepRow> rows = delib::run_sweep(s, req);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw CliError{2, "cannot write " + out_path};
    out = &file;
  }
  *out << "value,regime,payoff,design_regime,delegate\n";
  for (const auto& row : rows) {
    *out << num17(row.value) << "," << row.series << "," << num17(row.payoff)
         << "," << row.design_tag << "," << (row.delegates ? "true" : "false")
         << "\n";
  }
  if (!out_path.empty()) {
    std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
  }
  return 0;
}

int cmd_figures(const std::string& path, std::string out_dir, int points) {
  Scenario s = load_scenario(path);
  delib::FigureData fd = delib::figure_data(s, points);
  if (out_dir.empty()) {
    const char* env = std::getenv("DELIB_OUT_DIR");
    out_dir = (env && *env) ? env : ".";
  }
  std::filesystem::create_directories(out_dir);
  std::string csv_path =
      (std::filesystem::path(out_dir) / "envelopes.csv").string();
  std::string json_path =
      (std::filesystem::path(out_dir) / "annotations.json").string();
  std::ofstream cf(csv_path);
  if (!cf) throw CliError{2, "cannot write " + csv_path};
  delib::write_figure_csv(cf, fd);
  std::ofstream jf(json_path);
  if (!jf) throw CliError{2, "cannot write " + json_path};
  jf << delib::figure_annotations(fd);
  std::cout << "wrote " << csv_path << " (" << fd.points.size() << " points)\n";
  std::cout << "wrote " << json_path << "\n";
  return 0;
}

int cmd_witness(const std::string& path, const std::string& claim,
                std::uint64_t seed, bool as_json) {
  delib::ScenarioDoc doc = delib::parse_scenario_file(path);
  auto [prefs, signal] = delib::build_witness_inputs(doc);
  delib::WitnessSearchResult result =
      claim == "delegation" ? delib::find_delegation_witness(prefs, signal, seed)
                            : delib::find_design_witness(prefs, signal, seed);

  if (!result.witness) {
    if (as_json) {
      json out{{"found", false},
               {"claim", claim},
               {"reason", result.none_reason},
               {"search_failed", result.preconditions_hold}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "no witness: " << result.none_reason << "\n";
    }
    return result.preconditions_hold ? 1 : 0;
  }

  const delib::Witness& w = *result.witness;
  if (as_json) {
    json out{{"found", true},
             {"claim", claim},
             {"location", w.location},
             {"payoff_gap", w.payoff_gap},
             {"scenario", scenario_json(w.scenario)}};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "witness found\n";
  std::cout << "claim       " << claim << "\n";
  std::cout << "location    " << show(w.location)
            << (claim == "delegation" ? " (interim belief)" : " (prior)") << "\n";
  std::cout << "payoff gap  " << show(w.payoff_gap) << "\n";
  if (claim == "delegation") {
    std::cout << "meaning     always delegating loses this much versus acting "
                 "directly at that belief\n";
  } else {
    std::cout << "meaning     the constrained-optimal design beats every "
                 "maximal design by this much\n";
  }
  std::cout << "\nscenario\n";
  std::istringstream lines(scenario_toml(w.scenario));
  for (std::string line; std::getline(lines, line);) {
    std::cout << "  " << line << "\n";
  }
  return 0;
}

delib::DesignSolution as_design(const Scenario& s, Belief lo, Belief hi,
                                double payoff) {
  delib::DesignSolution d;
  d.low_posterior = lo;
  d.high_posterior = hi;
  d.signal = (hi - lo <= delib::kBeliefEps)
                 ? BinarySignal::uninformative()
                 : delib::signal_from_posteriors(s.prior, lo, hi);
  d.expected_payoff = payoff;
  return d;
}

int cmd_check(const std::string& path, int grid_n, long mc_samples,
              std::uint64_t seed) {
  Scenario s = load_scenario(path);
  bool all_pass = true;
  auto report = [&](bool pass, const std::string& label, double delta,
                    double tol) {
    all_pass = all_pass && pass;
    std::printf("[%s] %s: delta %.3g (tolerance %.3g)\n", pass ? "PASS" : "FAIL",
                label.c_str(), delta, tol);
  };

  delib::DesignSolution sol = delib::optimal_design(s);
  delib::GridResult grid = delib::grid_optimal_design(s, grid_n);
  double payoff_delta = std::abs(sol.expected_payoff - grid.best_payoff);
  report(payoff_delta <= 1e-9,
         "closed-form design payoff vs grid(" + std::to_string(grid_n) + ")",
         payoff_delta, 1e-9);
  double pair_delta = std::max(std::abs(sol.low_posterior - grid.best_low),
                               std::abs(sol.high_posterior - grid.best_high));
  report(pair_delta <= 1e-9, "closed-form posteriors vs grid argmax", pair_delta,
         1e-9);

  struct McCase {
    delib::PolicyRegime regime;
    delib::DesignSolution design;
  };
  delib::DelegationDesign dd = delib::best_delegation_design(s);
  std::vector<McCase> cases = {
      {delib::PolicyRegime::OptimalJoint, sol},
      {delib::PolicyRegime::MandatedDelegation,
       as_design(s, dd.low_posterior, dd.high_posterior, dd.expected_payoff)},
      {delib::PolicyRegime::NoHuman,
       as_design(s, s.constraint.max_low, s.constraint.max_high, 0.0)},
  };
  std::uint64_t case_seed = seed;
  for (const auto& c : cases) {
    double analytic = delib::evaluate_regime(s, c.regime);
    delib::McEstimate est =
        delib::mc_pipeline_payoff(s, c.design, c.regime, mc_samples, case_seed);
    ++case_seed;
    double tol = std::max(3.0 * est.half_width, 1e-9);
    report(std::abs(est.mean - analytic) <= tol,
           std::string("simulation vs analytic (") +
               delib::policy_regime_name(c.regime) + ", n=" +
               std::to_string(mc_samples) + ")",
           std::abs(est.mean - analytic), tol);
  }

  std::cout << (all_pass ? "all checks passed" : "CHECKS FAILED") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "delib: optimal public-signal design and delegation analysis for a "
      "binary decision shared between a principal and a better-informed agent"};
  app.require_subcommand(1);

  std::string file;
  bool as_json = false;

  auto* delegate = app.add_subcommand(
      "delegate", "Resolve the delegation stage at an interim belief");
  std::optional<double> interim;
  delegate->add_option("file", file, "scenario file")->required();
  delegate->add_option("--interim", interim,
                       "interim belief (default: the file's prior)");
  delegate->add_flag("--json", as_json, "emit JSON");

  auto* design = app.add_subcommand(
      "design", "Solve the constrained-optimal public signal");
  design->add_option("file", file, "scenario file")->required();
  design->add_flag("--json", as_json, "emit JSON");

  auto* sweep = app.add_subcommand(
      "sweep", "Evaluate regimes or the delegation stage along one parameter "
               "axis; emits CSV");
  std::string vary;
  double from = 0.0;
  std::optional<double> to;
  int steps = 21;
  std::vector<std::string> regime_names;
  std::optional<double> sweep_interim;
  std::string sweep_out;
  sweep->add_option("file", file, "scenario file")->required();
  sweep->add_option("--vary", vary, "field to vary (e.g. q, prior, max_high)")
      ->required();
  sweep->add_option("--from", from, "first value")->required();
  sweep->add_option("--to", to, "last value (required when --steps > 1)");
  sweep->add_option("--steps", steps, "number of values")
      ->check(CLI::Range(1, 100000));
  sweep->add_option("--regimes", regime_names,
                    "comma-separated regime names (default: all five)")
      ->delimiter(',');
  sweep->add_option("--interim", sweep_interim,
                    "sweep the delegation stage at this belief instead of "
                    "the policy regimes");
  sweep->add_option("--out", sweep_out, "write CSV here instead of stdout");

  auto* figures = app.add_subcommand(
      "figures", "Tabulate payoff envelopes and the stage-payoff curve");
  std::string fig_out;
  int points = 1000;
  figures->add_option("file", file, "scenario file")->required();
  figures->add_option("--out", fig_out,
                      "output directory (default: $DELIB_OUT_DIR or .)");
  figures->add_option("--points", points, "grid points in the CSV")
      ->check(CLI::Range(2, 2000000));

  auto* witness = app.add_subcommand(
      "witness", "Search for a scenario certifying one of the strict claims");
  std::string claim;
  std::uint64_t seed = 7;
  witness->add_option("file", file,
                      "scenario file (prior and constraint may be omitted)")
      ->required();
  witness
      ->add_option("--claim", claim,
                   "delegation: always-delegate is strictly harmful somewhere; "
                   "design: a capped design strictly beats every maximal one")
      ->required()
      ->check(CLI::IsMember({"delegation", "design"}));
  witness->add_option("--seed", seed, "search seed");
  witness->add_flag("--json", as_json, "emit JSON");

  auto* check = app.add_subcommand(
      "check", "Cross-check the closed-form solver against grid and "
               "simulation oracles");
  int grid_n = 2001;
  long mc_samples = 1000000;
  std::uint64_t check_seed = 42;
  check->add_option("file", file, "scenario file")->required();
  check->add_option("--grid-n", grid_n, "grid points per posterior axis")
      ->check(CLI::Range(2, 100000));
  check->add_option("--mc-samples", mc_samples, "simulation sample count")
      ->check(CLI::Range(1000L, 2000000000L));
  check->add_option("--seed", check_seed, "simulation seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(delegate)) return cmd_delegate(file, interim, as_json);
    if (app.got_subcommand(design)) return cmd_design(file, as_json);
    if (app.got_subcommand(sweep)) {
      return cmd_sweep(file, vary, from, to, steps, regime_names, sweep_interim,
                       sweep_out);
    }
    if (app.got_subcommand(figures)) return cmd_figures(file, fig_out, points);
    if (app.got_subcommand(witness)) return cmd_witness(file, claim, seed, as_json);
    if (app.got_subcommand(check)) {
      return cmd_check(file, grid_n, mc_samples, check_seed);
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const delib::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const delib::ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
