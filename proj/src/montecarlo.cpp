#include "wqkd/montecarlo.hpp"

#include <stdexcept>

#include "sampling.hpp"
#include "wqkd/parallel.hpp"
#include "wqkd/rng.hpp"

namespace wqkd {

namespace {
// Philox stream ids: one substream per analyzer setting.
constexpr std::uint64_t kSampleStreamBase = 0x100;
}  // namespace

void NoiseModel::validate() const {
  if (detector_efficiency < 0.0 || detector_efficiency > 1.0) {
    throw std::invalid_argument("detector efficiency must be in [0, 1]");
  }
  if (dark_count_probability < 0.0 || dark_count_probability > 1.0) {
    throw std::invalid_argument("dark count probability must be in [0, 1]");
  }
  if (depolarization < 0.0 || depolarization > 1.0) {
    throw std::invalid_argument("depolarization must be in [0, 1]");
  }
}

void SamplerConfig::validate() const {
  if (n_pairs < 1) {
    throw std::invalid_argument("sampler needs at least one pair");
  }
  if (threads < 1) {
    throw std::invalid_argument("thread count must be at least one");
  }
  noise.validate();
}

CoincidenceCounts sample_counts(const TwoPhotonState& state, const MeasurementSetting& setting,
                                const SamplerConfig& config, std::uint64_t substream) {
  config.validate();
  const OutcomeDistribution dist =
      outcome_distribution(depolarized(state, config.noise.depolarization), setting);
  const rng::CounterRng rng(config.seed, kSampleStreamBase + substream);
  const bool ideal = config.noise.is_ideal();
  const NoiseModel& noise = config.noise;

  const auto chunk_counts = [&](std::uint64_t lo, std::uint64_t hi) {
    CoincidenceCounts local;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const Outcome sampled = detail::pick_outcome(rng.uniform(i, detail::slots::kOutcome), dist);
      if (ideal) {
        local.add(sampled);
        continue;
      }
      Outcome registered = sampled;
      if (detail::register_pair(sampled, noise, rng, i, registered)) {
        local.add(registered);
      }
    }
    return local;
  };

  CoincidenceCounts counts;
  for (const CoincidenceCounts& c : parallel_chunks(config.n_pairs, config.threads, chunk_counts)) {
    counts += c;
  }
  return counts;
}

std::map<MeasurementSetting, CoincidenceCounts> run_wigner_experiment(
    const TwoPhotonState& state, const WignerSettings& settings, const SamplerConfig& config) {
  const auto all = settings.all_settings();
  std::map<MeasurementSetting, CoincidenceCounts> counts;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (counts.contains(all[k])) {
      throw std::invalid_argument("analyzer settings must be pairwise distinct");
    }
    counts[all[k]] = sample_counts(state, all[k], config, k);
  }
  return counts;
}

}  // namespace wqkd
