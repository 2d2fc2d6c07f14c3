#include "wqkd/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wqkd {

namespace {

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

TwoPhotonState TwoPhotonState::from_density_matrix(const Matrix& rho) {
  TwoPhotonState state(rho);
  state.validate();
  return state;
}

void TwoPhotonState::validate(double tol, double eigenvalue_floor) const {
  if (!rho_.allFinite()) {
    throw std::invalid_argument("density matrix has non-finite entries");
  }
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace().real() - 1.0) > tol || std::abs(rho_.trace().imag()) > tol) {
    throw std::invalid_argument("density matrix trace is not one");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < eigenvalue_floor) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

TwoPhotonState make_product_state(PolarizationAngle phi_a, PolarizationAngle phi_b) {
  const AnalyzerBasis a{phi_a};
  const AnalyzerBasis b{phi_b};
  return TwoPhotonState(kron2(a.projector_plus(), b.projector_plus()));
}

TwoPhotonState make_singlet_state() {
  // (|HV> - |VH|)/sqrt(2)
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi(1) = 1.0 / std::numbers::sqrt2;
  psi(2) = -1.0 / std::numbers::sqrt2;
  return TwoPhotonState(psi * psi.adjoint());
}

TwoPhotonState mix(std::span<const std::pair<double, TwoPhotonState>> components) {
  if (components.empty()) {
    throw std::invalid_argument("mixture needs at least one component");
  }
  double total = 0.0;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& [weight, state] : components) {
    if (weight < 0.0) {
      throw std::invalid_argument("mixture weights must be nonnegative");
    }
    total += weight;
    rho += weight * state.density_matrix();
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights must sum to one");
  }
  return TwoPhotonState(rho);
}

TwoPhotonState depolarized(const TwoPhotonState& state, double d) {
  if (d < 0.0 || d > 1.0) {
    throw std::invalid_argument("depolarization must be in [0, 1]");
  }
  if (d == 0.0) {
    return state;
  }
  return TwoPhotonState((1.0 - d) * state.density_matrix() +
                        (d / 4.0) * Eigen::Matrix4cd::Identity());
}

OutcomeDistribution outcome_distribution(const TwoPhotonState& state,
                                         const MeasurementSetting& setting) {
  const AnalyzerBasis a{setting.alpha_a};
  const AnalyzerBasis b{setting.alpha_b};
  const Eigen::Matrix2cd pa[2] = {a.projector_plus(), a.projector_minus()};
  const Eigen::Matrix2cd pb[2] = {b.projector_plus(), b.projector_minus()};

  double p[2][2];
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const double raw = (state.density_matrix() * kron2(pa[x], pb[y])).trace().real();
      p[x][y] = std::max(0.0, raw);
    }
  }
  return {p[0][0], p[0][1], p[1][0], p[1][1]};
}

}  // namespace wqkd
