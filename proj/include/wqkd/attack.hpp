#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "wqkd/state.hpp"
#include "wqkd/wigner.hpp"

namespace wqkd {

struct NoAttack {};

// Eve replaces the source with a separable pair polarized along (phi_a, phi_b).
struct SourceControlProduct {
  PolarizationAngle phi_a;
  PolarizationAngle phi_b;
};

enum class Channel { A, B };

// Eve measures one channel's photon in her basis and resends the eigenstate she
// found; the partner photon collapses to the orthogonal polarization. The
// resulting mixture is the same for either channel.
struct InterceptResendOne {
  PolarizationAngle eve_basis;
  Channel channel = Channel::A;
};

// Eve detects both photons and reprepares each channel deterministically along
// her chosen basis direction, which yields the separable pair
// (eve_basis_a, eve_basis_b). Unlike the one-channel attack, no positive floor
// on W survives: suitable directions drive W below zero.
struct InterceptResendBoth {
  PolarizationAngle eve_basis_a;
  PolarizationAngle eve_basis_b;
};

using AttackStrategy =
    std::variant<NoAttack, SourceControlProduct, InterceptResendOne, InterceptResendBoth>;

// The two-photon state Alice and Bob actually share under the attack.
TwoPhotonState realize_attack(const AttackStrategy& strategy);

enum class Objective { MinW, MinWTilde, MaxW, MaxWTilde };
enum class StrategyFamily { SourceControlProduct, InterceptResendOne, InterceptResendBoth };

// Number of free angles (degrees) parametrizing a family.
int family_dimension(StrategyFamily family);

AttackStrategy strategy_from_params(StrategyFamily family, const std::vector<double>& params_deg);

struct OptimizationReport {
  Objective objective;
  StrategyFamily family;
  double best_value = 0.0;
  std::vector<double> best_params_deg;  // canonical, in [0, 180)
  double grid_step_deg = 0.0;
  int refinement_sweeps = 0;
  std::uint64_t evaluations = 0;
};

// Exhaustive grid scan over [0, 180) per angle, optionally refined by
// coordinate descent with step halving down to 1e-4 degrees. Ties on the grid
// resolve to the lexicographically smallest parameters, and the result does
// not depend on the thread count.
OptimizationReport optimize_attack(Objective objective, StrategyFamily family,
                                   double grid_step_deg = 0.5, bool refine = true,
                                   const WignerSettings& settings = {}, int threads = 1);

std::string objective_name(Objective objective);
std::string family_name(StrategyFamily family);

}  // namespace wqkd
