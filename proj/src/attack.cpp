#include "wqkd/attack.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wqkd/parallel.hpp"

namespace wqkd {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double wrap180(double deg) {
  double r = std::fmod(deg, 180.0);
  if (r < 0.0) {
    r += 180.0;
  }
  if (r >= 180.0) {
    r = 0.0;
  }
  return r;
}

AttackStrategy make_strategy(StrategyFamily family, double p0_deg, double p1_deg) {
  switch (family) {
    case StrategyFamily::SourceControlProduct:
      return SourceControlProduct{PolarizationAngle::from_degrees(p0_deg),
                                  PolarizationAngle::from_degrees(p1_deg)};
    case StrategyFamily::InterceptResendOne:
      return InterceptResendOne{PolarizationAngle::from_degrees(p0_deg)};
    case StrategyFamily::InterceptResendBoth:
      return InterceptResendBoth{PolarizationAngle::from_degrees(p0_deg),
                                 PolarizationAngle::from_degrees(p1_deg)};
  }
  throw std::invalid_argument("unknown strategy family");
}

bool objective_uses_tilde(Objective o) {
  return o == Objective::MinWTilde || o == Objective::MaxWTilde;
}

bool objective_is_max(Objective o) {
  return o == Objective::MaxW || o == Objective::MaxWTilde;
}

// Internal objective is always minimized; maxima negate.
double internal_value(StrategyFamily family, Objective objective, double p0_deg, double p1_deg,
                      const WignerSettings& settings) {
  const WignerResult wr = wigner_w(realize_attack(make_strategy(family, p0_deg, p1_deg)), settings);
  const double v = objective_uses_tilde(objective) ? wr.w_tilde : wr.w;
  return objective_is_max(objective) ? -v : v;
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::array<double, 2> params{0.0, 0.0};

  bool better_than(const Candidate& other) const {
    if (value != other.value) {
      return value < other.value;
    }
    return params < other.params;
  }
};

}  // namespace

TwoPhotonState realize_attack(const AttackStrategy& strategy) {
  return std::visit(
      overloaded{
          [](const NoAttack&) { return make_singlet_state(); },
          [](const SourceControlProduct& a) { return make_product_state(a.phi_a, a.phi_b); },
          [](const InterceptResendOne& a) {
            const PolarizationAngle kept = a.eve_basis;
            const PolarizationAngle partner = a.eve_basis.orthogonal();
            const std::array<std::pair<double, TwoPhotonState>, 2> parts = {{
                {0.5, make_product_state(kept, partner)},
                {0.5, make_product_state(partner, kept)},
            }};
            return mix(parts);
          },
          [](const InterceptResendBoth& a) {
            return make_product_state(a.eve_basis_a, a.eve_basis_b);
          },
      },
      strategy);
}

int family_dimension(StrategyFamily family) {
  return family == StrategyFamily::InterceptResendOne ? 1 : 2;
}

AttackStrategy strategy_from_params(StrategyFamily family, const std::vector<double>& params_deg) {
  const int dim = family_dimension(family);
  if (static_cast<int>(params_deg.size()) != dim) {
    throw std::invalid_argument("wrong number of parameters for strategy family");
  }
  return make_strategy(family, params_deg[0], dim == 2 ? params_deg[1] : 0.0);
}

OptimizationReport optimize_attack(Objective objective, StrategyFamily family,
                                   double grid_step_deg, bool refine,
                                   const WignerSettings& settings, int threads) {
  if (!(grid_step_deg > 0.0) || grid_step_deg > 2.0) {
    throw std::invalid_argument("grid step must be in (0, 2] degrees");
  }
  const int dim = family_dimension(family);

  std::vector<double> axis;
  for (std::uint64_t i = 0;; ++i) {
    const double v = static_cast<double>(i) * grid_step_deg;
    if (v >= 180.0 - 1e-9) {
      break;
    }
    axis.push_back(v);
  }

  const auto chunk_best = [&](std::uint64_t lo, std::uint64_t hi) {
    Candidate best;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double p0 = axis[i];
      if (dim == 1) {
        Candidate c{internal_value(family, objective, p0, 0.0, settings), {p0, 0.0}};
        if (c.better_than(best)) {
          best = c;
        }
      } else {
        for (const double p1 : axis) {
          Candidate c{internal_value(family, objective, p0, p1, settings), {p0, p1}};
          if (c.better_than(best)) {
            best = c;
          }
        }
      }
    }
    return best;
  };

  Candidate best;
  for (const Candidate& c : parallel_chunks(axis.size(), threads, chunk_best)) {
    if (c.better_than(best)) {
      best = c;
    }
  }
  std::uint64_t evaluations = axis.size();
  if (dim == 2) {
    evaluations *= axis.size();
  }

  int sweeps = 0;
  if (refine) {
    constexpr double kMinStep = 1e-4;
    constexpr int kMaxSweeps = 10000;
    double step = grid_step_deg;
    while (step >= kMinStep && sweeps < kMaxSweeps) {
      bool improved = false;
      for (int d = 0; d < dim; ++d) {
        for (const double sign : {1.0, -1.0}) {
          Candidate cand = best;
          cand.params[d] = wrap180(best.params[d] + sign * step);
          cand.value = internal_value(family, objective, cand.params[0], cand.params[1], settings);
          ++evaluations;
          if (cand.value < best.value) {
            best = cand;
            improved = true;
          }
        }
      }
      ++sweeps;
      if (!improved) {
        step *= 0.5;
      }
    }
  }

  OptimizationReport report;
  report.objective = objective;
  report.family = family;
  report.grid_step_deg = grid_step_deg;
  report.refinement_sweeps = sweeps;
  report.evaluations = evaluations;
  report.best_params_deg.assign(best.params.begin(), best.params.begin() + dim);
  const WignerResult wr =
      wigner_w(realize_attack(strategy_from_params(family, report.best_params_deg)), settings);
  report.best_value = objective_uses_tilde(objective) ? wr.w_tilde : wr.w;
  return report;
}

std::string objective_name(Objective objective) {
  switch (objective) {
    case Objective::MinW: return "min-w";
    case Objective::MinWTilde: return "min-wtilde";
    case Objective::MaxW: return "max-w";
    case Objective::MaxWTilde: return "max-wtilde";
  }
  return "unknown";
}

std::string family_name(StrategyFamily family) {
  switch (family) {
    case StrategyFamily::SourceControlProduct: return "product";
    case StrategyFamily::InterceptResendOne: return "intercept-one";
    case StrategyFamily::InterceptResendBoth: return "intercept-both";
  }
  return "unknown";
}

}  // namespace wqkd
