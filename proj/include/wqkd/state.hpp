#pragma once

#include <Eigen/Dense>
#include <array>
#include <span>
#include <utility>

#include "wqkd/angles.hpp"

namespace wqkd {

// Joint polarization state of one photon pair as a 4x4 density matrix in the
// product basis |HH>, |HV>, |VH>, |VV> (Alice's photon first). Invariants:
// Hermitian, trace one, positive semidefinite up to a small numerical floor.
class TwoPhotonState {
 public:
  using Matrix = Eigen::Matrix4cd;

  // Trusts the caller; use from_density_matrix for untrusted input.
  explicit TwoPhotonState(const Matrix& rho) : rho_(rho) {}

  // Validates and throws std::invalid_argument on a bad matrix.
  static TwoPhotonState from_density_matrix(const Matrix& rho);

  const Matrix& density_matrix() const { return rho_; }

  void validate(double tol = 1e-12, double eigenvalue_floor = -1e-10) const;

 private:
  Matrix rho_;
};

TwoPhotonState make_product_state(PolarizationAngle phi_a, PolarizationAngle phi_b);
TwoPhotonState make_singlet_state();

// Convex combination of states; weights must be nonnegative and sum to one.
TwoPhotonState mix(std::span<const std::pair<double, TwoPhotonState>> components);

// (1 - d) * rho + d * I/4
TwoPhotonState depolarized(const TwoPhotonState& state, double d);

enum class Outcome : int {
  PlusPlus = 0,
  PlusMinus = 1,
  MinusPlus = 2,
  MinusMinus = 3,
};

// Joint probabilities for the four coincidence outcomes at one setting.
struct OutcomeDistribution {
  double p_pp = 0.0;
  double p_pm = 0.0;
  double p_mp = 0.0;
  double p_mm = 0.0;

  double probability(Outcome o) const { return as_array()[static_cast<int>(o)]; }
  std::array<double, 4> as_array() const { return {p_pp, p_pm, p_mp, p_mm}; }
  double sum() const { return p_pp + p_pm + p_mp + p_mm; }
};

OutcomeDistribution outcome_distribution(const TwoPhotonState& state,
                                         const MeasurementSetting& setting);

}  // namespace wqkd
