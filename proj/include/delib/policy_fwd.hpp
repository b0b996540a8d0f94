#pragma once

#include <optional>
#include <string_view>

namespace delib {

// Deployment regimes compared by the policy layer. OptimalJoint designs the
// public signal for the optimally-played delegation stage; the others remove
// one instrument: MandatedDelegation re-optimizes the signal but the human
// must always delegate, MandatedMaximalSignal fixes the signal at the
// constraint cap, NoAlgorithm provides no public signal, NoHuman drops the
// delegation option and acts on the capped signal directly.
enum class PolicyRegime {
  OptimalJoint,
  MandatedDelegation,
  MandatedMaximalSignal,
  NoAlgorithm,
  NoHuman,
};

const char* policy_regime_name(PolicyRegime regime);
std::optional<PolicyRegime> parse_policy_regime(std::string_view name);

}  // namespace delib
