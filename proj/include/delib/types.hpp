#pragma once

#include <optional>
#include <stdexcept>
#include <string>

// Core value types for a two-action decision problem with a binary hidden
// state. Beliefs are probabilities of the high state. A principal observes a
// public binary signal, forms an interim belief, and either acts directly or
// delegates to an agent who refines the belief with a private binary signal.
//
// Both signals are conditionally independent given the state; the two-stage
// posterior updates below rely on that.

namespace delib {

using Belief = double;

// Absolute tolerance for belief and payoff comparisons throughout the
// library: cutoff ties, bracket membership, alignment detection.
inline constexpr double kBeliefEps = 1e-12;

enum class ErrorCode {
  ZeroProbabilityRealization,
  InvalidBracket,
  DegeneratePrior,
  AssumptionViolated,
  AlignedPreferences,
  NotBlackwellOrdered,
  NotMoreMisaligned,
  CaseMismatch,
  InvalidSampleCount,
  UnsortedPoints,
  InvalidProbability,
};

const char* error_code_name(ErrorCode code);

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Payoffs u[state][action]; u10 is the payoff of action 0 in state 1.
// Sensible decision problems satisfy u00 > u01 and u11 > u10 (each state has
// a distinct correct action); ops that need a cutoff enforce this.
struct PayoffMatrix {
  double u00 = 0.0;
  double u01 = 0.0;
  double u10 = 0.0;
  double u11 = 0.0;
};

// Conditional distribution of a binary signal: t0 = P(s=0 | state 0),
// t1 = P(s=1 | state 1). Informative signals satisfy t0 + t1 > 1 (high
// realizations raise the belief). Blackwell-dominated parameterizations with
// t0 + t1 < 1 are rejected at construction; the boundary t0 + t1 = 1 carries
// no information and is normalized to the canonical (0.5, 0.5).
class BinarySignal {
 public:
  BinarySignal(double t0, double t1);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  bool informative() const { return t0_ + t1_ > 1.0 + kBeliefEps; }

  static BinarySignal uninformative() { return BinarySignal(0.5, 0.5); }

 private:
  double t0_;
  double t1_;
};

// Posterior support of a binary signal at some belief: the posterior after a
// low realization, after a high realization, and the total probability of
// the high realization. Always low <= high.
struct PosteriorPair {
  Belief low = 0.0;
  Belief high = 0.0;
  double prob_high = 0.0;
};

struct Preferences {
  PayoffMatrix principal;
  PayoffMatrix agent;
};

// Feasibility cap on the public signal, stored as the extreme posteriors it
// may induce: every feasible design keeps posteriors inside
// [max_low, max_high], and the bracket must contain the prior.
struct BlackwellConstraint {
  Belief max_low = 0.0;
  Belief max_high = 1.0;
};

struct Scenario {
  Belief prior = 0.5;
  Preferences prefs;
  BinarySignal agent_signal = BinarySignal::uninformative();
  BlackwellConstraint constraint;
};

}  // namespace delib
