#pragma once

#include <cstdint>

#include "delib/design.hpp"
#include "delib/policy_fwd.hpp"
#include "delib/types.hpp"

// Independent verification paths. Nothing here reuses the closed-form curve
// machinery: the grid search evaluates the stage payoff pointwise, the
// Monte Carlo runner simulates the generative pipeline draw by draw, and the
// brute delegation check re-derives the delegate-vs-direct comparison from
// joint state/realization probabilities.

namespace delib {

struct GridResult {
  Belief best_low = 0.0;
  Belief best_high = 0.0;
  double best_payoff = 0.0;
  double grid_step = 0.0;  // max of the two per-axis steps
};

// Exhaustive search over posterior pairs on [max_low, prior] x [prior,
// max_high] with grid_n points per axis. The prior is an exact endpoint of
// both axes and the stage payoff's jump point is appended exactly when it
// falls strictly inside an axis, so the closed-form optimum's posteriors are
// always grid points. Pairs that put zero weight on one posterior are
// canonicalized to the no-signal pair (prior, prior); payoff ties within
// 1e-12 break toward the widest interval, scanned low-then-high ascending.
GridResult grid_optimal_design(const Scenario& scenario, int grid_n);

struct McEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 99% normal-approximation half width
  long samples = 0;
  std::uint64_t seed = 0;
};

// Simulates the full pipeline: state ~ Bernoulli(prior), public realization
// from `design`'s signal, private realization from the scenario's agent
// signal, then the regime's decision rule (OptimalJoint, MandatedMaximalSignal
// and NoAlgorithm delegate exactly when delegation strictly beats acting
// directly at the interim; MandatedDelegation always delegates; NoHuman
// never does). The caller supplies the design consistent with the regime.
// Each sample consumes exactly three RNG draws (state, public, private) from
// mt19937_64 seeded with `seed`; reruns are bit-identical. Throws
// InvalidSampleCount when samples < 1000.
McEstimate mc_pipeline_payoff(const Scenario& scenario,
                              const DesignSolution& design, PolicyRegime regime,
                              long samples, std::uint64_t seed);

// Re-decides delegate-vs-direct at `interim` from scratch: joint
// probabilities of (state, private realization), agent actions from expected
// agent payoffs, totals compared directly. Returns whether delegation is
// strictly better.
bool brute_check_delegation(Belief interim, const BinarySignal& agent_signal,
                            const Preferences& prefs);

// Uniform double in [0, 1) built from the top 53 bits of one mt19937_64
// draw; unlike std::uniform_real_distribution the mapping is pinned down.
inline double canonical_uniform(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

}  // namespace delib
