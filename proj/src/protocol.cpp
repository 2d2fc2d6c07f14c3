#include "wqkd/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sampling.hpp"
#include "wqkd/errors.hpp"
#include "wqkd/parallel.hpp"
#include "wqkd/rng.hpp"

namespace wqkd {

namespace {

// Philox stream ids; each independent decision in a session gets its own.
constexpr std::uint64_t kAliceChoiceStream = 0x200;
constexpr std::uint64_t kBobChoiceStream = 0x201;
constexpr std::uint64_t kOutcomeStream = 0x202;
constexpr std::uint64_t kNoiseStream = 0x203;
constexpr std::uint64_t kSacrificeStream = 0x204;

void validate_weights(const std::vector<double>& weights, std::size_t n_choices,
                      const char* party) {
  if (weights.empty()) {
    return;
  }
  if (weights.size() != n_choices) {
    throw std::invalid_argument(std::string(party) + " weights must match the number of choices");
  }
  double total = 0.0;
  for (const double w : weights) {
    if (w < 0.0) {
      throw std::invalid_argument(std::string(party) + " weights must be nonnegative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(party) + " weights must sum to one");
  }
}

int choose(double u, const std::vector<double>& weights, int n) {
  if (weights.empty()) {
    return std::min(static_cast<int>(u * n), n - 1);
  }
  double cumulative = 0.0;
  for (int j = 0; j < n; ++j) {
    cumulative += weights[j];
    if (u < cumulative) {
      return j;
    }
  }
  return n - 1;
}

struct ChunkResult {
  std::array<std::array<CoincidenceCounts, 2>, 2> combos{};
  CoincidenceCounts sacrificed;
  std::vector<std::uint8_t> key_alice;
  std::vector<std::uint8_t> key_bob;
  std::vector<std::uint8_t> mask;
};

nlohmann::json counts_to_json(const CoincidenceCounts& c) {
  return {{"n_pp", c.n_pp}, {"n_pm", c.n_pm}, {"n_mp", c.n_mp},
          {"n_mm", c.n_mm}, {"total", c.total()}};
}

std::string bitstring(const std::vector<std::uint8_t>& bits) {
  std::string s;
  s.reserve(bits.size());
  for (const std::uint8_t b : bits) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

}  // namespace

void PartySettingsPolicy::validate() const {
  if (alice_choices.empty() || bob_choices.empty()) {
    throw std::invalid_argument("both parties need at least one analyzer choice");
  }
  validate_weights(alice_weights, alice_choices.size(), "alice");
  validate_weights(bob_weights, bob_choices.size(), "bob");
}

SessionRecord run_session(const AttackStrategy& strategy, const PartySettingsPolicy& policy,
                          const SamplerConfig& config, double sacrifice_fraction) {
  policy.validate();
  config.validate();
  if (policy.alice_choices.size() != 2 || policy.bob_choices.size() != 2) {
    throw std::invalid_argument("a session needs exactly two analyzer choices per party");
  }
  if (policy.alice_choices[0] == policy.alice_choices[1] ||
      policy.bob_choices[0] == policy.bob_choices[1]) {
    throw std::invalid_argument("each party's analyzer choices must be distinct");
  }
  if (sacrifice_fraction < 0.0 || sacrifice_fraction > 1.0) {
    throw std::invalid_argument("sacrifice fraction must be in [0, 1]");
  }

  SessionRecord record;
  record.n_pairs = config.n_pairs;
  record.sacrifice_fraction = sacrifice_fraction;
  record.settings = WignerSettings{policy.alice_choices[0], policy.alice_choices[1],
                                   policy.bob_choices[0], policy.bob_choices[1]};

  const TwoPhotonState shared = realize_attack(strategy);
  OutcomeDistribution dist[2][2];
  for (int ai = 0; ai < 2; ++ai) {
    for (int bi = 0; bi < 2; ++bi) {
      dist[ai][bi] =
          outcome_distribution(depolarized(shared, config.noise.depolarization),
                               {policy.alice_choices[ai], policy.bob_choices[bi]});
    }
  }

  const rng::CounterRng rng_alice(config.seed, kAliceChoiceStream);
  const rng::CounterRng rng_bob(config.seed, kBobChoiceStream);
  const rng::CounterRng rng_outcome(config.seed, kOutcomeStream);
  const rng::CounterRng rng_noise(config.seed, kNoiseStream);
  const rng::CounterRng rng_sacrifice(config.seed, kSacrificeStream);
  const bool ideal = config.noise.is_ideal();

  record.pair_log.resize(config.n_pairs);
  PairEvent* log = record.pair_log.data();

  const auto run_chunk = [&](std::uint64_t lo, std::uint64_t hi) {
    ChunkResult out;
    out.key_alice.reserve((hi - lo) / 3);
    out.key_bob.reserve((hi - lo) / 3);
    out.mask.reserve((hi - lo) / 3);
    for (std::uint64_t i = lo; i < hi; ++i) {
      const int ai = choose(rng_alice.uniform(i, 0), policy.alice_weights, 2);
      const int bi = choose(rng_bob.uniform(i, 0), policy.bob_weights, 2);
      const Outcome sampled =
          detail::pick_outcome(rng_outcome.uniform(i, detail::slots::kOutcome), dist[ai][bi]);

      Outcome registered = sampled;
      bool coincident = true;
      if (!ideal) {
        coincident = detail::register_pair(sampled, config.noise, rng_noise, i, registered);
      }

      PairEvent ev;
      ev.alice_idx = static_cast<std::uint8_t>(ai);
      ev.bob_idx = static_cast<std::uint8_t>(bi);
      if (coincident) {
        ev.outcome = static_cast<std::int8_t>(registered);
        out.combos[ai][bi].add(registered);
        if (ai == 1 && bi == 0) {
          const int idx = static_cast<int>(registered);
          const bool sacrificed = rng_sacrifice.uniform(i, 0) < sacrifice_fraction;
          ev.sacrificed = sacrificed;
          if (sacrificed) {
            out.sacrificed.add(registered);
          }
          out.key_alice.push_back(idx / 2 == 0 ? 1 : 0);
          out.key_bob.push_back(idx % 2 == 0 ? 0 : 1);
          out.mask.push_back(sacrificed ? 1 : 0);
        }
      }
      log[i] = ev;
    }
    return out;
  };

  for (ChunkResult& chunk : parallel_chunks(config.n_pairs, config.threads, run_chunk)) {
    for (int ai = 0; ai < 2; ++ai) {
      for (int bi = 0; bi < 2; ++bi) {
        record.combo_counts[ai][bi] += chunk.combos[ai][bi];
      }
    }
    record.sacrificed_counts += chunk.sacrificed;
    record.sifted_key_alice.insert(record.sifted_key_alice.end(), chunk.key_alice.begin(),
                                   chunk.key_alice.end());
    record.sifted_key_bob.insert(record.sifted_key_bob.end(), chunk.key_bob.begin(),
                                 chunk.key_bob.end());
    record.sacrificed_mask.insert(record.sacrificed_mask.end(), chunk.mask.begin(),
                                  chunk.mask.end());
  }

  const auto needed = record.settings.all_settings();
  std::map<MeasurementSetting, CoincidenceCounts> estimate_input;
  estimate_input[needed[0]] = record.combo_counts[0][0];
  estimate_input[needed[1]] = record.combo_counts[1][1];
  estimate_input[needed[2]] = record.combo_counts[0][1];
  estimate_input[needed[3]] = record.sacrificed_counts;
  for (const auto& [setting, counts] : estimate_input) {
    if (counts.total() == 0) {
      throw InsufficientStatistics(
          "no usable coincidences at setting (" + std::to_string(setting.alpha_a.degrees()) +
          ", " + std::to_string(setting.alpha_b.degrees()) +
          "); more pairs or a larger sacrifice fraction needed");
    }
  }
  record.wigner = estimate_wigner(estimate_input, record.settings);
  record.qber_estimate =
      static_cast<double>(record.sacrificed_counts.n_pp + record.sacrificed_counts.n_mm) /
      static_cast<double>(record.sacrificed_counts.total());

  record.key_fraction =
      static_cast<double>(record.sifted_key_alice.size()) / static_cast<double>(record.n_pairs);
  record.secret_key_length =
      record.sifted_key_alice.size() - record.sacrificed_counts.total();
  return record;
}

Verdict security_verdict(const EstimatedWigner& wigner, const VerdictPolicy& policy) {
  const bool tilde = policy.parameter == SecurityParameter::WTilde;
  const double estimate = tilde ? wigner.value.w_tilde : wigner.value.w;
  const double sigma = tilde ? wigner.w_tilde_sigma : wigner.w_sigma;
  if (!std::isfinite(estimate) || !std::isfinite(sigma)) {
    throw std::invalid_argument("verdict needs a finite estimate");
  }
  if (estimate + policy.sigma_margin * sigma < policy.threshold) {
    return Verdict::Secure;
  }
  if (estimate - policy.sigma_margin * sigma >= policy.threshold) {
    return Verdict::Compromised;
  }
  return Verdict::Inconclusive;
}

Verdict security_verdict(const SessionRecord& record, const VerdictPolicy& policy) {
  return security_verdict(record.wigner, policy);
}

const char* verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Secure: return "Secure";
    case Verdict::Compromised: return "Compromised";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "unknown";
}

KeyRateComparison key_rate_comparison() { return {}; }

KeyRateComparison key_rate_comparison(const SessionRecord& record) {
  KeyRateComparison out;
  out.realized_key_fraction = record.key_fraction;
  return out;
}

nlohmann::json session_to_json(const SessionRecord& record, bool include_pair_log) {
  nlohmann::json j;
  j["n_pairs"] = record.n_pairs;
  j["sacrifice_fraction"] = record.sacrifice_fraction;
  j["settings_deg"] = {{"a1", record.settings.a1.degrees()},
                       {"a2", record.settings.a2.degrees()},
                       {"b1", record.settings.b1.degrees()},
                       {"b2", record.settings.b2.degrees()}};

  nlohmann::json counts = nlohmann::json::array();
  const std::array alice{record.settings.a1, record.settings.a2};
  const std::array bob{record.settings.b1, record.settings.b2};
  for (int ai = 0; ai < 2; ++ai) {
    for (int bi = 0; bi < 2; ++bi) {
      nlohmann::json entry = counts_to_json(record.combo_counts[ai][bi]);
      entry["alpha_a_deg"] = alice[ai].degrees();
      entry["alpha_b_deg"] = bob[bi].degrees();
      counts.push_back(entry);
    }
  }
  j["combo_counts"] = counts;
  j["sacrificed_counts"] = counts_to_json(record.sacrificed_counts);

  j["wigner"] = {{"w", record.wigner.value.w},
                 {"w_sigma", record.wigner.w_sigma},
                 {"w_tilde", record.wigner.value.w_tilde},
                 {"w_tilde_sigma", record.wigner.w_tilde_sigma},
                 {"terms", record.wigner.value.terms}};
  j["qber_estimate"] = record.qber_estimate;
  j["key_fraction"] = record.key_fraction;
  j["sifted_key_length"] = record.sifted_key_alice.size();
  j["sacrificed_key_bits"] = record.sacrificed_counts.total();
  j["secret_key_length"] = record.secret_key_length;
  j["sifted_key_alice"] = bitstring(record.sifted_key_alice);
  j["sifted_key_bob"] = bitstring(record.sifted_key_bob);

  if (include_pair_log) {
    nlohmann::json log = nlohmann::json::array();
    for (const PairEvent& ev : record.pair_log) {
      log.push_back({{"alice_idx", ev.alice_idx},
                     {"bob_idx", ev.bob_idx},
                     {"outcome", ev.outcome},
                     {"sacrificed", ev.sacrificed}});
    }
    j["pair_log"] = log;
  }
  return j;
}

}  // namespace wqkd
