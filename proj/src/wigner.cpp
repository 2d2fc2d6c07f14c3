#include "wqkd/wigner.hpp"

#include <cmath>

#include "wqkd/errors.hpp"

namespace wqkd {

WignerResult wigner_w(const TwoPhotonState& state, const WignerSettings& settings) {
  const double t0 = outcome_distribution(state, settings.term0_setting()).p_pp;
  const double t1 = outcome_distribution(state, settings.term1_setting()).p_pp;
  const double t2 = outcome_distribution(state, settings.term2_setting()).p_pp;
  const double t3 = outcome_distribution(state, settings.term3_setting()).p_mm;
  const double w = t0 + t1 - t2;
  return {w, w + t3, {t0, t1, t2, t3}};
}

double qber(const TwoPhotonState& state, const MeasurementSetting& key_setting) {
  const auto dist = outcome_distribution(state, key_setting);
  return dist.p_pp + dist.p_mm;
}

double estimate_probability(const CoincidenceCounts& counts, Outcome outcome) {
  const std::uint64_t total = counts.total();
  if (total == 0) {
    throw ZeroTotalCounts("cannot estimate a probability from zero counts");
  }
  return static_cast<double>(counts.count(outcome)) / static_cast<double>(total);
}

EstimatedWigner estimate_wigner(const std::map<MeasurementSetting, CoincidenceCounts>& counts,
                                const WignerSettings& settings) {
  const std::array<MeasurementSetting, 4> needed = settings.all_settings();

  std::array<double, 4> terms{};
  std::array<double, 4> variances{};
  for (int i = 0; i < 4; ++i) {
    const auto it = counts.find(needed[i]);
    if (it == counts.end() || it->second.total() == 0) {
      throw MissingSetting("no counts recorded for a required analyzer setting");
    }
    const Outcome o = (i == 3) ? Outcome::MinusMinus : Outcome::PlusPlus;
    const double p = estimate_probability(it->second, o);
    terms[i] = p;
    variances[i] = p * (1.0 - p) / static_cast<double>(it->second.total());
  }

  const double w = terms[0] + terms[1] - terms[2];
  EstimatedWigner est;
  est.value = {w, w + terms[3], terms};
  const double var_w = variances[0] + variances[1] + variances[2];
  est.w_sigma = std::sqrt(var_w);
  est.w_tilde_sigma = std::sqrt(var_w + variances[3]);
  return est;
}

}  // namespace wqkd
