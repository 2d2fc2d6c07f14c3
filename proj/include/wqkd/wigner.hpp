#pragma once

#include <array>
#include <cstdint>
#include <map>

#include "wqkd/angles.hpp"
#include "wqkd/state.hpp"

namespace wqkd {

// Analyzer angles entering the Wigner parameter. With the defaults,
//   W = p(a1,b1)(+,+) + p(a2,b2)(+,+) - p(a1,b2)(+,+)
// and local realism requires W >= 0, while the singlet reaches -0.125.
// The modified parameter adds the (-,-) probability at the key setting:
//   W~ = W + p(a2,b1)(-,-).
struct WignerSettings {
  PolarizationAngle a1 = PolarizationAngle::from_degrees(-30.0);
  PolarizationAngle a2 = PolarizationAngle::from_degrees(0.0);
  PolarizationAngle b1 = PolarizationAngle::from_degrees(0.0);
  PolarizationAngle b2 = PolarizationAngle::from_degrees(30.0);

  MeasurementSetting term0_setting() const { return {a1, b1}; }
  MeasurementSetting term1_setting() const { return {a2, b2}; }
  MeasurementSetting term2_setting() const { return {a1, b2}; }
  // Also the key-generation setting.
  MeasurementSetting term3_setting() const { return {a2, b1}; }

  std::array<MeasurementSetting, 4> all_settings() const {
    return {term0_setting(), term1_setting(), term2_setting(), term3_setting()};
  }
};

// terms = {p(a1,b1)(+,+), p(a2,b2)(+,+), p(a1,b2)(+,+), p(a2,b1)(-,-)}
struct WignerResult {
  double w = 0.0;
  double w_tilde = 0.0;
  std::array<double, 4> terms{};
};

WignerResult wigner_w(const TwoPhotonState& state, const WignerSettings& settings = {});

// Fraction of anticorrelation failures at the key setting: p(+,+) + p(-,-).
double qber(const TwoPhotonState& state, const MeasurementSetting& key_setting);

struct CoincidenceCounts {
  std::uint64_t n_pp = 0;
  std::uint64_t n_pm = 0;
  std::uint64_t n_mp = 0;
  std::uint64_t n_mm = 0;

  std::uint64_t total() const { return n_pp + n_pm + n_mp + n_mm; }
  std::uint64_t count(Outcome o) const {
    const std::array<std::uint64_t, 4> c{n_pp, n_pm, n_mp, n_mm};
    return c[static_cast<int>(o)];
  }
  void add(Outcome o) {
    switch (o) {
      case Outcome::PlusPlus: ++n_pp; break;
      case Outcome::PlusMinus: ++n_pm; break;
      case Outcome::MinusPlus: ++n_mp; break;
      case Outcome::MinusMinus: ++n_mm; break;
    }
  }
  CoincidenceCounts& operator+=(const CoincidenceCounts& other) {
    n_pp += other.n_pp;
    n_pm += other.n_pm;
    n_mp += other.n_mp;
    n_mm += other.n_mm;
    return *this;
  }
};

// N(outcome) / N(total) for one setting's counts. Throws ZeroTotalCounts.
// Counts are never pooled across settings.
double estimate_probability(const CoincidenceCounts& counts, Outcome outcome);

struct EstimatedWigner {
  WignerResult value;
  // One-sigma binomial propagation for w and w_tilde.
  double w_sigma = 0.0;
  double w_tilde_sigma = 0.0;
};

// Estimates each term from the counts recorded at its own setting.
// Throws MissingSetting if a needed setting is absent or has zero total.
EstimatedWigner estimate_wigner(const std::map<MeasurementSetting, CoincidenceCounts>& counts,
                                const WignerSettings& settings = {});

}  // namespace wqkd
