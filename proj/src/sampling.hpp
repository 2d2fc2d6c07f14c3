#pragma once

#include <cstdint>

#include "wqkd/montecarlo.hpp"
#include "wqkd/rng.hpp"
#include "wqkd/state.hpp"

// Shared per-pair sampling helpers. The Monte Carlo sampler and the protocol
// session must apply identical outcome and detection semantics.
namespace wqkd::detail {

namespace slots {
inline constexpr std::uint32_t kOutcome = 0;
inline constexpr std::uint32_t kEfficiencyA = 1;
inline constexpr std::uint32_t kEfficiencyB = 2;
inline constexpr std::uint32_t kDarkAPlus = 3;
inline constexpr std::uint32_t kDarkAMinus = 4;
inline constexpr std::uint32_t kDarkBPlus = 5;
inline constexpr std::uint32_t kDarkBMinus = 6;
}  // namespace slots

inline Outcome pick_outcome(double u, const OutcomeDistribution& dist) {
  const double c0 = dist.p_pp;
  const double c1 = c0 + dist.p_pm;
  const double c2 = c1 + dist.p_mp;
  if (u < c0) return Outcome::PlusPlus;
  if (u < c1) return Outcome::PlusMinus;
  if (u < c2) return Outcome::MinusPlus;
  return Outcome::MinusMinus;
}

struct PortRead {
  bool fired = false;
  bool minus = false;
};

// One party's detection for one pair: the photon registers on the port the
// joint outcome assigned it with probability detector_efficiency; otherwise a
// lone dark count can still register on either port.
inline PortRead read_party(bool photon_minus, const NoiseModel& noise,
                           const rng::CounterRng& rng, std::uint64_t pair,
                           std::uint32_t slot_eff, std::uint32_t slot_dark_plus,
                           std::uint32_t slot_dark_minus) {
  const bool detected =
      noise.detector_efficiency >= 1.0 || rng.uniform(pair, slot_eff) < noise.detector_efficiency;
  if (detected) {
    return {true, photon_minus};
  }
  if (noise.dark_count_probability <= 0.0) {
    return {false, false};
  }
  const bool plus_fired = rng.uniform(pair, slot_dark_plus) < noise.dark_count_probability;
  const bool minus_fired = rng.uniform(pair, slot_dark_minus) < noise.dark_count_probability;
  if (plus_fired == minus_fired) {
    return {false, false};
  }
  return {true, minus_fired};
}

// Applies detection noise to a sampled joint outcome. Returns false when the
// pair is lost; otherwise stores the registered outcome.
inline bool register_pair(Outcome sampled, const NoiseModel& noise, const rng::CounterRng& rng,
                          std::uint64_t pair, Outcome& registered) {
  const int idx = static_cast<int>(sampled);
  const PortRead a = read_party(idx / 2 == 1, noise, rng, pair, slots::kEfficiencyA,
                                slots::kDarkAPlus, slots::kDarkAMinus);
  if (!a.fired) {
    return false;
  }
  const PortRead b = read_party(idx % 2 == 1, noise, rng, pair, slots::kEfficiencyB,
                                slots::kDarkBPlus, slots::kDarkBMinus);
  if (!b.fired) {
    return false;
  }
  registered = static_cast<Outcome>((a.minus ? 2 : 0) + (b.minus ? 1 : 0));
  return true;
}

}  // namespace wqkd::detail
