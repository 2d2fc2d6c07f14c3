#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "wqkd/attack.hpp"
#include "wqkd/montecarlo.hpp"
#include "wqkd/wigner.hpp"

namespace wqkd {

// Per-party analyzer choices and their selection probabilities. Empty weight
// vectors mean uniform choice.
struct PartySettingsPolicy {
  std::vector<PolarizationAngle> alice_choices = {PolarizationAngle::from_degrees(-30.0),
                                                  PolarizationAngle::from_degrees(0.0)};
  std::vector<PolarizationAngle> bob_choices = {PolarizationAngle::from_degrees(0.0),
                                                PolarizationAngle::from_degrees(30.0)};
  std::vector<double> alice_weights;
  std::vector<double> bob_weights;

  void validate() const;
};

struct PairEvent {
  std::uint8_t alice_idx = 0;
  std::uint8_t bob_idx = 0;
  // Registered Outcome (0..3), or -1 when the pair produced no coincidence.
  std::int8_t outcome = -1;
  bool sacrificed = false;
};

// Everything one protocol session produces. The key setting is
// (alice_choices[1], bob_choices[0]); with the defaults that is (0°, 0°).
// A key-setting coincidence yields a sifted bit for both parties (+ maps to 1;
// Bob flips his bit so that perfect anticorrelation gives identical keys).
// A seeded fraction of key-setting pairs is sacrificed: disclosed to estimate
// the (-,-) term and the QBER, then excluded from the secret key.
struct SessionRecord {
  std::uint64_t n_pairs = 0;
  WignerSettings settings;
  double sacrifice_fraction = 0.0;
  std::array<std::array<CoincidenceCounts, 2>, 2> combo_counts{};  // [alice_idx][bob_idx]
  CoincidenceCounts sacrificed_counts;
  std::vector<std::uint8_t> sifted_key_alice;
  std::vector<std::uint8_t> sifted_key_bob;
  std::vector<std::uint8_t> sacrificed_mask;  // parallel to the sifted keys
  EstimatedWigner wigner;
  double qber_estimate = 0.0;
  double key_fraction = 0.0;  // sifted bits / pairs
  std::uint64_t secret_key_length = 0;
  std::vector<PairEvent> pair_log;
};

// Runs one session: per pair, both parties draw a setting, the attack-realized
// state is sampled, and coincidences are sifted. The three mismatched setting
// combinations feed the W terms; the sacrificed key-setting subset feeds the
// (-,-) term and the QBER. Results are bit-identical for a fixed seed
// regardless of config.threads.
// Throws InsufficientStatistics when any required combination has no counts,
// std::invalid_argument on a malformed policy.
SessionRecord run_session(const AttackStrategy& strategy, const PartySettingsPolicy& policy,
                          const SamplerConfig& config, double sacrifice_fraction = 0.1);

enum class Verdict { Secure, Compromised, Inconclusive };
enum class SecurityParameter { W, WTilde };

// Secure means the estimate sits significantly below the local-realism
// threshold, where the quantum violation lives.
struct VerdictPolicy {
  SecurityParameter parameter = SecurityParameter::W;
  double threshold = 0.0;
  double sigma_margin = 3.0;
};

Verdict security_verdict(const EstimatedWigner& wigner, const VerdictPolicy& policy);
Verdict security_verdict(const SessionRecord& record, const VerdictPolicy& policy);

const char* verdict_name(Verdict verdict);

struct Fraction {
  int numerator = 0;
  int denominator = 1;
  double value() const { return static_cast<double>(numerator) / denominator; }
};

// Qubit bookkeeping of the CHSH-based protocol versus the three-setting
// Wigner-based variant, plus the realized fraction of a concrete session.
struct KeyRateComparison {
  Fraction chsh_key_fraction{2, 9};
  Fraction chsh_discard_fraction{1, 3};
  Fraction wigner3_key_fraction_max{1, 3};
  Fraction wigner3_discard_fraction{0, 1};
  std::optional<double> realized_key_fraction;
};

KeyRateComparison key_rate_comparison();
KeyRateComparison key_rate_comparison(const SessionRecord& record);

// Angles serialize in degrees; the pair log is included only on request.
nlohmann::json session_to_json(const SessionRecord& record, bool include_pair_log = false);

}  // namespace wqkd
