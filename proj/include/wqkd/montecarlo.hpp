#pragma once

#include <cstdint>
#include <map>

#include "wqkd/state.hpp"
#include "wqkd/wigner.hpp"

namespace wqkd {

// Detector imperfections applied to each generated pair:
//  - depolarization d mixes the state with white noise before sampling,
//    rho' = (1-d) rho + d I/4;
//  - detector_efficiency is the chance that a photon registers on the port the
//    state assigned it;
//  - dark_count_probability is the chance, per port and per pair window, that
//    an undetected photon's party still records a click. A party registers a
//    dark-count outcome only when exactly one of its two ports fires.
// Pairs where either party registers nothing are dropped and never enter the
// coincidence counters.
struct NoiseModel {
  double detector_efficiency = 1.0;
  double dark_count_probability = 0.0;
  double depolarization = 0.0;

  bool is_ideal() const {
    return detector_efficiency >= 1.0 && dark_count_probability <= 0.0;
  }
  void validate() const;
};

struct SamplerConfig {
  std::uint64_t n_pairs = 1;
  std::uint64_t seed = 0;
  NoiseModel noise{};
  int threads = 1;

  void validate() const;
};

// Samples coincidence counts for n_pairs identical pairs measured at one
// setting. Each pair's randomness is indexed by its pair number within the
// given substream, so results are bit-identical for a fixed seed regardless
// of thread count.
CoincidenceCounts sample_counts(const TwoPhotonState& state, const MeasurementSetting& setting,
                                const SamplerConfig& config, std::uint64_t substream = 0);

// Samples all four Wigner settings, n_pairs at each, on separate substreams.
std::map<MeasurementSetting, CoincidenceCounts> run_wigner_experiment(
    const TwoPhotonState& state, const WignerSettings& settings, const SamplerConfig& config);

}  // namespace wqkd
