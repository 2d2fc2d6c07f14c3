// Acceptance gate: exercises the full toolkit, one PASS/FAIL line per
// criterion, nonzero exit if anything fails. Usage:
//   acceptance <path-to-cli> [workdir]
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracle.hpp"
#include "wqkd/attack.hpp"
#include "wqkd/montecarlo.hpp"
#include "wqkd/protocol.hpp"
#include "wqkd/repro.hpp"
#include "wqkd/rng.hpp"
#include "wqkd/wigner.hpp"

using namespace wqkd;
using nlohmann::json;

namespace {

std::string g_cli;
std::string g_workdir = ".";

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  const std::string command = "\"" + g_cli + "\" " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  CommandResult result;
  if (!pipe) {
    result.output = "popen failed";
    return result;
  }
  std::array<char, 8192> buffer;
  size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return result;
}

json cli_json(const std::string& args, bool& ok, std::string& err) {
  const auto result = run_cli(args);
  if (result.exit_code != 0) {
    ok = false;
    err = "cli exit " + std::to_string(result.exit_code) + ": " + result.output.substr(0, 200);
    return {};
  }
  return json::parse(result.output, nullptr, false);
}

PolarizationAngle deg(double d) { return PolarizationAngle::from_degrees(d); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Gate {
  int failures = 0;

  void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %d  %-26s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

// ---- 1: analytic singlet value, library and CLI ----
void criterion_singlet(Gate& gate) {
  const auto wr = wigner_w(make_singlet_state());
  bool pass = std::abs(wr.w - (-0.125)) < 1e-12 && std::abs(wr.w_tilde - (-0.125)) < 1e-12;
  std::string detail = "library w=" + fmt(wr.w);

  bool ok = true;
  std::string err;
  const json j = cli_json("analyze", ok, err);
  if (!ok || j.is_discarded()) {
    pass = false;
    detail += " | cli: " + err;
  } else {
    const double w = j.at("w").get<double>();
    const double wt = j.at("w_tilde").get<double>();
    pass = pass && std::abs(w - (-0.125)) < 1e-12 && std::abs(wt - (-0.125)) < 1e-12;
    detail += " cli w=" + fmt(w) + " w_tilde=" + fmt(wt);
  }
  gate.report(1, "singlet-exactness", pass, detail);
}

// ---- 2: product-attack extrema vs reference values and a brute-force grid ----
void criterion_product_extrema(Gate& gate) {
  const auto t0 = std::chrono::steady_clock::now();

  // Independent 0.1-degree brute-force extrema from the closed form.
  double grid_min_w = 1e300, grid_max_w = -1e300;
  double grid_min_wt = 1e300, grid_max_wt = -1e300;
  for (int i = 0; i < 1800; ++i) {
    for (int j = 0; j < 1800; ++j) {
      const double w = oracle::w_product(i * 0.1, j * 0.1);
      const double wt = oracle::wt_product(i * 0.1, j * 0.1);
      grid_min_w = std::min(grid_min_w, w);
      grid_max_w = std::max(grid_max_w, w);
      grid_min_wt = std::min(grid_min_wt, wt);
      grid_max_wt = std::max(grid_max_wt, wt);
    }
  }

  const auto opt = [](Objective o) {
    return optimize_attack(o, StrategyFamily::SourceControlProduct, 0.5, true, WignerSettings{}, 4)
        .best_value;
  };
  const double min_w = opt(Objective::MinW);
  const double min_wt = opt(Objective::MinWTilde);
  const double max_w = opt(Objective::MaxW);
  const double max_wt = opt(Objective::MaxWTilde);

  const bool vs_reference = std::abs(min_w - (-0.2121)) < 5e-4 && std::abs(min_wt - 0.0443) < 5e-4 &&
                            std::abs(max_w - 0.9557) < 5e-4 && std::abs(max_wt - 0.9557) < 5e-4;
  const bool vs_grid = std::abs(min_w - grid_min_w) < 1e-4 && std::abs(min_wt - grid_min_wt) < 1e-4 &&
                       std::abs(max_w - grid_max_w) < 1e-4 && std::abs(max_wt - grid_max_wt) < 1e-4;
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0);
  const bool in_time = elapsed.count() < 60;

  gate.report(2, "product-extrema", vs_reference && vs_grid && in_time,
              "min_w=" + fmt(min_w) + " min_wt=" + fmt(min_wt) + " max_w=" + fmt(max_w) +
                  " max_wt=" + fmt(max_wt) + " grid_min_w=" + fmt(grid_min_w) + " (" +
                  std::to_string(elapsed.count()) + "s)");
}

// ---- 3: section curves at 98, 62, and 0 degrees ----
void criterion_sections(Gate& gate) {
  SectionSpec s98;
  s98.phi_b_deg = 98.0;
  s98.step_deg = 0.1;
  double min_wt = 1e300;
  for (const auto& row : section_curve(s98)) min_wt = std::min(min_wt, row.w_tilde);

  SectionSpec s62;
  s62.phi_b_deg = 62.0;
  s62.step_deg = 0.1;
  double min_w = 1e300;
  for (const auto& row : section_curve(s62)) min_w = std::min(min_w, row.w);

  SectionSpec s0;
  s0.phi_b_deg = 0.0;
  s0.step_deg = 0.1;
  double max_gap = 0.0;
  for (const auto& row : section_curve(s0)) {
    max_gap = std::max(max_gap, std::abs(row.w - row.w_tilde));
  }

  const bool pass = std::abs(min_wt - 0.0466) < 5e-4 && min_w < -0.125 && max_gap <= 1e-12;
  gate.report(3, "section-curves", pass,
              "98deg min_wt=" + fmt(min_wt) + " 62deg min_w=" + fmt(min_w) +
                  " 0deg max|w-wt|=" + fmt(max_gap));
}

// ---- 4: one-channel intercept-resend floor ----
void criterion_intercept_one(Gate& gate) {
  const auto state = realize_attack(InterceptResendOne{deg(0.0)});
  const double analytic = wigner_w(state).w;
  const bool exact = std::abs(analytic - 0.0625) < 1e-12;

  SamplerConfig config;
  config.n_pairs = 1000000;
  config.seed = 404;
  config.threads = 4;
  const WignerSettings settings;
  const auto est = estimate_wigner(run_wigner_experiment(state, settings, config), settings);
  const bool sampled = std::abs(est.value.w - 0.0625) < 3.0 * est.w_sigma;

  double grid_min = 1e300;
  for (int i = 0; i < 1800; ++i) {
    grid_min = std::min(grid_min, wigner_w(realize_attack(InterceptResendOne{deg(i * 0.1)})).w);
  }
  const bool floor = grid_min >= 0.0625 - 1e-6;

  gate.report(4, "intercept-one-floor", exact && sampled && floor,
              "analytic=" + fmt(analytic) + " sampled=" + fmt(est.value.w) + "+-" +
                  fmt(est.w_sigma) + " grid_min=" + fmt(grid_min));
}

// ---- 5: both-channel repreparation reaches negative w ----
void criterion_intercept_both(Gate& gate) {
  double min_w = 1e300;
  double best_a = 0.0, best_b = 0.0;
  for (int i = 0; i < 180; ++i) {
    for (int j = 0; j < 180; ++j) {
      const double w = wigner_w(realize_attack(InterceptResendBoth{deg(i), deg(j)})).w;
      if (w < min_w) {
        min_w = w;
        best_a = i;
        best_b = j;
      }
    }
  }
  gate.report(5, "intercept-both-negative", min_w < 0.0,
              "min_w=" + fmt(min_w) + " at (" + fmt(best_a) + "," + fmt(best_b) + ")");
}

// ---- 6: estimator consistency on exact and sampled counts ----
void criterion_estimator(Gate& gate) {
  const WignerSettings settings;
  std::map<MeasurementSetting, CoincidenceCounts> exact;
  exact[settings.term0_setting()] = {1250, 3750, 3750, 1250};
  exact[settings.term1_setting()] = {1250, 3750, 3750, 1250};
  exact[settings.term2_setting()] = {3750, 1250, 1250, 3750};
  exact[settings.term3_setting()] = {0, 5000, 5000, 0};
  const auto est_exact = estimate_wigner(exact, settings);
  const bool exact_ok = std::abs(est_exact.value.w - (-0.125)) < 1e-12 &&
                        std::abs(est_exact.value.w_tilde - (-0.125)) < 1e-12;

  SamplerConfig config;
  config.n_pairs = 1000000;
  config.seed = 505;
  config.threads = 4;
  const auto est_mc =
      estimate_wigner(run_wigner_experiment(make_singlet_state(), settings, config), settings);
  const bool mc_ok = std::abs(est_mc.value.w - (-0.125)) < 4.0 * est_mc.w_sigma;

  gate.report(6, "estimator-consistency", exact_ok && mc_ok,
              "exact w=" + fmt(est_exact.value.w) + " sampled w=" + fmt(est_mc.value.w) + "+-" +
                  fmt(est_mc.w_sigma));
}

// ---- 7: end-to-end detection of the strongest product attack ----
void criterion_end_to_end(Gate& gate) {
  const auto report =
      optimize_attack(Objective::MinW, StrategyFamily::SourceControlProduct, 1.0, true,
                      WignerSettings{}, 4);
  const double pa = report.best_params_deg[0];
  const double pb = report.best_params_deg[1];

  SamplerConfig config;
  config.n_pairs = 1000000;
  config.seed = 606;
  config.threads = 4;
  const auto record = run_session(SourceControlProduct{deg(pa), deg(pb)}, PartySettingsPolicy{},
                                  config, 0.1);
  const Verdict vw = security_verdict(record, {SecurityParameter::W, 0.0, 3.0});
  const Verdict vt = security_verdict(record, {SecurityParameter::WTilde, 0.0, 3.0});
  bool pass = vw == Verdict::Secure && vt == Verdict::Compromised;
  std::string detail = std::string("library w:") + verdict_name(vw) + " wt:" + verdict_name(vt);

  bool ok = true;
  std::string err;
  std::ostringstream args;
  args << "simulate --pairs 1000000 --seed 606 --threads 4 --attack product --phi-a " << fmt(pa)
       << " --phi-b " << fmt(pb);
  const json j = cli_json(args.str(), ok, err);
  if (!ok || j.is_discarded()) {
    pass = false;
    detail += " | cli: " + err;
  } else {
    const std::string cw = j.at("verdicts").at("w").get<std::string>();
    const std::string ct = j.at("verdicts").at("w_tilde").get<std::string>();
    pass = pass && cw == "Secure" && ct == "Compromised";
    detail += " cli w:" + cw + " wt:" + ct + " qber=" +
              fmt(j.at("session").at("qber_estimate").get<double>());
  }
  gate.report(7, "end-to-end-detection", pass, detail);
}

// ---- 8: key-rate constants as exact rationals ----
void criterion_keyrate(Gate& gate) {
  bool ok = true;
  std::string err;
  const json j = cli_json("keyrate", ok, err);
  bool pass = ok && !j.is_discarded();
  std::string detail;
  if (pass) {
    const auto frac = [&](const char* key) {
      return std::pair<int, int>(j.at(key).at("numerator").get<int>(),
                                 j.at(key).at("denominator").get<int>());
    };
    pass = frac("chsh_key_fraction") == std::pair(2, 9) &&
           frac("chsh_discard_fraction") == std::pair(1, 3) &&
           frac("wigner3_key_fraction_max") == std::pair(1, 3) &&
           frac("wigner3_discard_fraction") == std::pair(0, 1);
    detail = "2/9 1/3 1/3 0/1";
  } else {
    detail = err;
  }
  gate.report(8, "key-rate-constants", pass, detail);
}

// ---- 9: property suites, compact re-run ----
void criterion_properties(Gate& gate) {
  const rng::CounterRng angles(909, 0);
  bool pass = true;
  std::string detail = "ok";
  const auto fail = [&](const std::string& what) {
    if (pass) detail = what;
    pass = false;
  };

  for (std::uint64_t i = 0; i < 40 && pass; ++i) {
    const double pa = angles.uniform(i, 0) * 180.0;
    const double pb = angles.uniform(i, 1) * 180.0;
    const double ma = angles.uniform(i, 2) * 180.0;
    const double mb = angles.uniform(i, 3) * 180.0;
    const MeasurementSetting setting{deg(ma), deg(mb)};

    // Normalization over mixed and pure states.
    const auto product = make_product_state(deg(pa), deg(pb));
    const auto mixture = depolarized(make_singlet_state(), angles.uniform(i, 4));
    if (std::abs(outcome_distribution(product, setting).sum() - 1.0) > 1e-12) {
      fail("normalization (product)");
    }
    if (std::abs(outcome_distribution(mixture, setting).sum() - 1.0) > 1e-12) {
      fail("normalization (mixture)");
    }

    // Product states factorize into per-party Malus terms.
    const auto dist = outcome_distribution(product, setting);
    const double expected_pp = oracle::malus_plus(pa, ma) * oracle::malus_plus(pb, mb);
    if (std::abs(dist.p_pp - expected_pp) > 1e-12) fail("factorization");

    // Singlet closed forms and rotation invariance.
    const auto singlet = make_singlet_state();
    const auto sd = outcome_distribution(singlet, setting);
    if (std::abs(sd.p_pp - oracle::singlet_pp(ma, mb)) > 1e-12) fail("singlet closed form");
    const double shift = angles.uniform(i, 5) * 180.0;
    const MeasurementSetting rotated{deg(ma + shift), deg(mb + shift)};
    if (std::abs(outcome_distribution(singlet, rotated).p_pp - sd.p_pp) > 1e-12) {
      fail("rotation invariance");
    }

    // pi-periodicity of every angle argument.
    const auto periodic = make_product_state(deg(pa + 180.0), deg(pb));
    if ((periodic.density_matrix() - product.density_matrix()).cwiseAbs().maxCoeff() > 1e-12) {
      fail("pi-periodicity");
    }
  }

  // Seed determinism across thread counts, library and CLI.
  if (pass) {
    SamplerConfig config;
    config.n_pairs = 40001;
    config.seed = 42;
    config.threads = 1;
    const auto serial = sample_counts(make_singlet_state(), WignerSettings{}.term2_setting(), config);
    config.threads = 6;
    const auto parallel =
        sample_counts(make_singlet_state(), WignerSettings{}.term2_setting(), config);
    if (serial.n_pp != parallel.n_pp || serial.n_pm != parallel.n_pm ||
        serial.n_mp != parallel.n_mp || serial.n_mm != parallel.n_mm) {
      fail("thread determinism (sampler)");
    }
  }
  if (pass) {
    const auto first = run_cli("simulate --pairs 2000 --seed 11 --threads 2");
    const auto second = run_cli("simulate --pairs 2000 --seed 11 --threads 2");
    if (first.exit_code != 0 || first.output != second.output) {
      fail("cli rerun determinism");
    }
  }

  gate.report(9, "property-suites", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli> [workdir]\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  if (argc > 2) g_workdir = argv[2];

  Gate gate;
  criterion_singlet(gate);
  criterion_product_extrema(gate);
  criterion_sections(gate);
  criterion_intercept_one(gate);
  criterion_intercept_both(gate);
  criterion_estimator(gate);
  criterion_end_to_end(gate);
  criterion_keyrate(gate);
  criterion_properties(gate);

  if (gate.failures > 0) {
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", gate.failures);
    return 1;
  }
  std::printf("ACCEPTANCE: all 9 criteria passed\n");
  return 0;
}
