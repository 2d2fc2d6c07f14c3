#include "wqkd/repro.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

#include "wqkd/parallel.hpp"

namespace wqkd {

namespace {

std::vector<double> grid_axis(double start, double stop, double step) {
  std::vector<double> axis;
  for (std::uint64_t i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v >= stop - 1e-9) {
      break;
    }
    axis.push_back(v);
  }
  return axis;
}

void validate_range(double start, double stop, double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("grid step must be positive");
  }
  if (!(start < stop)) {
    throw std::invalid_argument("grid range must be non-empty");
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void GridSpec::validate() const {
  validate_range(phi_a_start_deg, phi_a_stop_deg, step_deg);
  validate_range(phi_b_start_deg, phi_b_stop_deg, step_deg);
}

void SectionSpec::validate() const {
  validate_range(phi_a_start_deg, phi_a_stop_deg, step_deg);
}

Band classify_w(double w) {
  if (w < -0.125) return Band::Black;
  if (w < 0.0) return Band::DarkGrey;
  if (w < 0.0625) return Band::LightGrey;
  return Band::White;
}

const char* band_name(Band band) {
  switch (band) {
    case Band::Black: return "black";
    case Band::DarkGrey: return "dark_grey";
    case Band::LightGrey: return "light_grey";
    case Band::White: return "white";
  }
  return "unknown";
}

std::vector<GridRow> contour_grid(const GridSpec& spec, const WignerSettings& settings,
                                  int threads) {
  spec.validate();
  const std::vector<double> axis_a =
      grid_axis(spec.phi_a_start_deg, spec.phi_a_stop_deg, spec.step_deg);
  const std::vector<double> axis_b =
      grid_axis(spec.phi_b_start_deg, spec.phi_b_stop_deg, spec.step_deg);

  std::vector<GridRow> rows(axis_a.size() * axis_b.size());
  GridRow* out = rows.data();
  parallel_chunks(axis_a.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double pa = axis_a[i];
      for (std::size_t j = 0; j < axis_b.size(); ++j) {
        const double pb = axis_b[j];
        const WignerResult wr =
            wigner_w(make_product_state(PolarizationAngle::from_degrees(pa),
                                        PolarizationAngle::from_degrees(pb)),
                     settings);
        out[i * axis_b.size() + j] = {pa, pb, wr.w, wr.w_tilde, classify_w(wr.w)};
      }
    }
    return 0;
  });
  return rows;
}

std::vector<SectionRow> section_curve(const SectionSpec& spec, const WignerSettings& settings) {
  spec.validate();
  const std::vector<double> axis =
      grid_axis(spec.phi_a_start_deg, spec.phi_a_stop_deg, spec.step_deg);
  const PolarizationAngle phi_b = PolarizationAngle::from_degrees(spec.phi_b_deg);

  std::vector<SectionRow> rows;
  rows.reserve(axis.size());
  for (const double pa : axis) {
    const WignerResult wr =
        wigner_w(make_product_state(PolarizationAngle::from_degrees(pa), phi_b), settings);
    rows.push_back({pa, wr.w, wr.w_tilde});
  }
  return rows;
}

void write_grid_csv(std::ostream& out, std::span<const GridRow> rows) {
  out << "phi_a_deg,phi_b_deg,w,w_tilde,band\n";
  for (const GridRow& r : rows) {
    out << format_double(r.phi_a_deg) << ',' << format_double(r.phi_b_deg) << ','
        << format_double(r.w) << ',' << format_double(r.w_tilde) << ',' << band_name(r.band)
        << '\n';
  }
}

void write_section_csv(std::ostream& out, std::span<const SectionRow> rows) {
  out << "phi_a_deg,w,w_tilde\n";
  for (const SectionRow& r : rows) {
    out << format_double(r.phi_a_deg) << ',' << format_double(r.w) << ',' << format_double(r.w_tilde)
        << '\n';
  }
}

}  // namespace wqkd
