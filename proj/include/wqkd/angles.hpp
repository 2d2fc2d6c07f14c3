#pragma once

#include <Eigen/Dense>
#include <compare>
#include <numbers>
#include <tuple>

namespace wqkd {

// Linear-polarization direction, normalized to [0, pi). Angles that differ by
// pi describe the same analyzer axis, so they normalize to the same value.
class PolarizationAngle {
 public:
  constexpr PolarizationAngle() = default;

  static PolarizationAngle from_radians(double rad);
  static PolarizationAngle from_degrees(double deg) {
    return from_radians(deg * std::numbers::pi / 180.0);
  }

  double radians() const { return rad_; }
  double degrees() const { return rad_ * 180.0 / std::numbers::pi; }

  PolarizationAngle orthogonal() const {
    return from_radians(rad_ + std::numbers::pi / 2.0);
  }
  PolarizationAngle rotated(double delta_rad) const {
    return from_radians(rad_ + delta_rad);
  }

  friend bool operator==(PolarizationAngle a, PolarizationAngle b) {
    return a.rad_ == b.rad_;
  }
  friend bool operator<(PolarizationAngle a, PolarizationAngle b) {
    return a.rad_ < b.rad_;
  }

 private:
  double rad_ = 0.0;
};

// Analyzer basis for one photon: |s> = cos(a)|H> + sin(a)|V| on the plus port,
// |s_perp> = sin(a)|H> - cos(a)|V> on the minus port.
struct AnalyzerBasis {
  PolarizationAngle angle;

  Eigen::Vector2cd ket_plus() const {
    return {std::cos(angle.radians()), std::sin(angle.radians())};
  }
  Eigen::Vector2cd ket_minus() const {
    return {std::sin(angle.radians()), -std::cos(angle.radians())};
  }
  Eigen::Matrix2cd projector_plus() const {
    const auto k = ket_plus();
    return k * k.adjoint();
  }
  Eigen::Matrix2cd projector_minus() const {
    const auto k = ket_minus();
    return k * k.adjoint();
  }
};

// One joint analyzer choice: Alice's angle and Bob's angle.
struct MeasurementSetting {
  PolarizationAngle alpha_a;
  PolarizationAngle alpha_b;

  friend bool operator==(const MeasurementSetting& x, const MeasurementSetting& y) {
    return x.alpha_a == y.alpha_a && x.alpha_b == y.alpha_b;
  }
  friend bool operator<(const MeasurementSetting& x, const MeasurementSetting& y) {
    return std::make_tuple(x.alpha_a.radians(), x.alpha_b.radians()) <
           std::make_tuple(y.alpha_a.radians(), y.alpha_b.radians());
  }
};

}  // namespace wqkd
