#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "wqkd/wigner.hpp"

namespace wqkd {

// Product-state surface W(phi_a, phi_b), sampled on a rectangular grid. The
// default one-period window [0, 180) x [0, 180) contains every extremum.
struct GridSpec {
  double phi_a_start_deg = 0.0;
  double phi_a_stop_deg = 180.0;
  double phi_b_start_deg = 0.0;
  double phi_b_stop_deg = 180.0;
  double step_deg = 0.5;

  void validate() const;
};

struct SectionSpec {
  double phi_b_deg = 0.0;
  double phi_a_start_deg = 0.0;
  double phi_a_stop_deg = 180.0;
  double step_deg = 0.5;

  void validate() const;
};

// Contour bands of the W surface: below the singlet value, negative (local
// realism violated), positive but under the one-channel intercept-resend
// floor, and at or above that floor.
enum class Band { Black, DarkGrey, LightGrey, White };

Band classify_w(double w);
const char* band_name(Band band);

struct GridRow {
  double phi_a_deg = 0.0;
  double phi_b_deg = 0.0;
  double w = 0.0;
  double w_tilde = 0.0;
  Band band = Band::White;
};

struct SectionRow {
  double phi_a_deg = 0.0;
  double w = 0.0;
  double w_tilde = 0.0;
};

// Rows in phi_a-major order, identical for any thread count.
std::vector<GridRow> contour_grid(const GridSpec& spec, const WignerSettings& settings = {},
                                  int threads = 1);

std::vector<SectionRow> section_curve(const SectionSpec& spec, const WignerSettings& settings = {});

// CSV with 9-significant-digit floats and LF line endings.
void write_grid_csv(std::ostream& out, std::span<const GridRow> rows);
void write_section_csv(std::ostream& out, std::span<const SectionRow> rows);

}  // namespace wqkd
