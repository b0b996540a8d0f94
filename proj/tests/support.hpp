#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "delib/design.hpp"
#include "delib/model.hpp"
#include "delib/oracle.hpp"
#include "delib/types.hpp"

// Shared builders and generators for the test suites. All randomness flows
// through mt19937_64 and canonical_uniform under fixed seeds, so every run
// sees the same cases.

namespace support {

using delib::Belief;
using delib::BinarySignal;
using delib::PayoffMatrix;
using delib::Preferences;
using delib::Scenario;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return delib::canonical_uniform(gen_()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

// Cutoffs 0.5 (principal) and 0.75 (agent): the principal wants the high
// action on weaker evidence than the agent will act on.
inline Preferences running_prefs() {
  return {{1.0, 0.0, 0.0, 1.0}, {1.25, -0.25, 0.25, 0.75}};
}

// The same matrices swapped: cutoffs 0.75 / 0.5.
inline Preferences mirrored_prefs() {
  return {{1.25, -0.25, 0.25, 0.75}, {1.0, 0.0, 0.0, 1.0}};
}

inline Preferences aligned_prefs() {
  return {{1.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}};
}

// Distinct cutoffs and a noisy signal, yet no stage-payoff jump: acting on
// weak evidence costs this principal far too much.
inline Preferences steep_loss_prefs() {
  return {{1.0, 0.0, -8.0, 1.0}, {1.25, -0.25, 0.25, 0.75}};
}

// Matched-action payoffs (c, 1 - c) put the cutoff exactly at c.
inline PayoffMatrix cutoff_matrix(Belief c) { return {c, 0.0, 0.0, 1.0 - c}; }

inline Scenario narrow_scenario() {
  Scenario s;
  s.prior = 0.5;
  s.prefs = running_prefs();
  s.agent_signal = BinarySignal(0.8, 0.8);
  s.constraint = {0.35, 0.55};
  return s;
}

inline Scenario wide_scenario() {
  Scenario s = narrow_scenario();
  s.constraint = {0.1, 0.9};
  return s;
}

inline Scenario mirrored_scenario() {
  Scenario s;
  s.prior = 0.7;
  s.prefs = mirrored_prefs();
  s.agent_signal = BinarySignal(0.8, 0.8);
  s.constraint = {0.5, 0.9};
  return s;
}

inline Scenario aligned_scenario() {
  Scenario s;
  s.prior = 0.5;
  s.prefs = aligned_prefs();
  s.agent_signal = BinarySignal(0.8, 0.8);
  s.constraint = {0.2, 0.8};
  return s;
}

// Both actions keep a gain of at least 0.1, so the cutoff is well defined
// and stays clear of 0 and 1.
inline PayoffMatrix random_matrix(Rng& rng) {
  double gain0 = rng.uniform(0.1, 2.0);
  double gain1 = rng.uniform(0.1, 2.0);
  double u01 = rng.uniform(-1.0, 1.0);
  double u10 = rng.uniform(-1.0, 1.0);
  return {u01 + gain0, u01, u10, u10 + gain1};
}

inline BinarySignal random_signal(Rng& rng) {
  for (;;) {
    double q0 = rng.uniform(0.52, 0.98);
    double q1 = rng.uniform(0.52, 0.98);
    if (q0 + q1 > 1.05) return BinarySignal(q0, q1);
  }
}

inline Preferences random_prefs(Rng& rng, double min_cutoff_gap) {
  for (;;) {
    Preferences p{random_matrix(rng), random_matrix(rng)};
    if (std::abs(delib::cutoff(p.principal) - delib::cutoff(p.agent)) >
        min_cutoff_gap) {
      return p;
    }
  }
}

// A full scenario keeping the prior at least 0.02 inside the bracket and
// resampling every knife edge the closed-form solver decides by epsilon:
// prior or bracket ends near the indifference interim, and a chord that
// touches the stage payoff there.
inline Scenario random_scenario(Rng& rng) {
  for (;;) {
    Scenario s;
    s.prefs = random_prefs(rng, 1e-9);
    s.agent_signal = random_signal(rng);
    s.prior = rng.uniform(0.05, 0.95);
    s.constraint.max_low = s.prior - rng.uniform(0.02, s.prior);
    s.constraint.max_high = s.prior + rng.uniform(0.02, 1.0 - s.prior);

    Belief rho = delib::indifference_interim(s.agent_signal, s.prefs);
    if (std::abs(s.prior - rho) < 1e-6) continue;
    if (std::abs(rho - s.constraint.max_low) < 1e-6) continue;
    if (std::abs(rho - s.constraint.max_high) < 1e-6) continue;
    if (rho > s.constraint.max_low && rho < s.constraint.max_high) {
      delib::StagePayoffCurve curve =
          delib::stage_payoff_curve(s.agent_signal, s.prefs);
      double lo = curve.value(s.constraint.max_low);
      double hi = curve.value(s.constraint.max_high);
      double w = (rho - s.constraint.max_low) /
                 (s.constraint.max_high - s.constraint.max_low);
      double chord = lo + w * (hi - lo);
      if (std::abs(chord - curve.value(rho)) < 1e-9) continue;
    }
    return s;
  }
}

// Preferences and a signal whose stage payoff jumps by more than `min_jump`
// at the indifference interim.
inline std::pair<Preferences, BinarySignal> random_jump_inputs(
    Rng& rng, double min_jump) {
  for (;;) {
    Preferences prefs = random_prefs(rng, 0.05);
    BinarySignal signal = random_signal(rng);
    if (signal.t0() > 0.95 || signal.t1() > 0.95) continue;
    delib::StagePayoffCurve curve = delib::stage_payoff_curve(signal, prefs);
    if (!curve.discontinuity) continue;
    if (curve.discontinuity->value - curve.discontinuity->limit_value <
        min_jump) {
      continue;
    }
    return {prefs, signal};
  }
}

}  // namespace support
