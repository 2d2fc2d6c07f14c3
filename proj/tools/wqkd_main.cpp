#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "wqkd/attack.hpp"
#include "wqkd/errors.hpp"
#include "wqkd/montecarlo.hpp"
#include "wqkd/protocol.hpp"
#include "wqkd/repro.hpp"
#include "wqkd/wigner.hpp"

using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

// Binds each option to a config-file key (the long flag name). Config values
// fill in only where the command line left the option untouched; unknown keys
// are rejected.
class ConfigBinder {
 public:
  template <class T>
  CLI::Option* add_option(CLI::App& app, const std::string& flag_spec, T& var,
                          const std::string& desc) {
    CLI::Option* opt = app.add_option(flag_spec, var, desc);
    entries_[key_of(opt)] = {opt, [&var](const json& j) { var = j.get<T>(); },
                             [&var] { return json(var); }};
    return opt;
  }

  template <class T>
  CLI::Option* add_optional(CLI::App& app, const std::string& flag_spec, std::optional<T>& var,
                            const std::string& desc) {
    CLI::Option* opt = app.add_option(flag_spec, var, desc);
    entries_[key_of(opt)] = {opt, [&var](const json& j) { var = j.get<T>(); },
                             [&var] { return var ? json(*var) : json(nullptr); }};
    return opt;
  }

  CLI::Option* add_flag(CLI::App& app, const std::string& flag_spec, bool& var,
                        const std::string& desc) {
    CLI::Option* opt = app.add_flag(flag_spec, var, desc);
    entries_[key_of(opt)] = {opt, [&var](const json& j) { var = j.get<bool>(); },
                             [&var] { return json(var); }};
    return opt;
  }

  void apply_config(const json& cfg) {
    if (!cfg.is_object()) {
      throw std::runtime_error("config file must hold a JSON object");
    }
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      const auto found = entries_.find(it.key());
      if (found == entries_.end()) {
        throw std::runtime_error("unknown config key: " + it.key());
      }
      if (found->second.option->count() == 0) {
        found->second.apply(it.value());
      }
    }
  }

  json echo_config() const {
    json out = json::object();
    for (const auto& [key, entry] : entries_) {
      out[key] = entry.echo();
    }
    return out;
  }

 private:
  struct Entry {
    CLI::Option* option = nullptr;
    std::function<void(const json&)> apply;
    std::function<json()> echo;
  };

  static std::string key_of(const CLI::Option* opt) {
    const auto& names = opt->get_lnames();
    if (names.empty()) {
      throw std::logic_error("every bound option needs a long name");
    }
    return names.front();
  }

  std::map<std::string, Entry> entries_;
};

// Options shared by every subcommand.
struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string config_path;
  std::string output_path;

  void bind(CLI::App& app, ConfigBinder& binder) {
    binder.add_option(app, "--seed", seed, "Seed for all randomness");
    binder.add_option(app, "--threads", threads, "Worker thread cap (results independent of it)");
    app.add_option("--config", config_path, "JSON config file; command-line flags win");
    binder.add_option(app, "-o,--output", output_path, "Output path (default: stdout)");
  }
};

// Analyzer angles for the Wigner terms; also the session setting choices.
struct SettingsOpts {
  double a1 = -30.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 30.0;

  void bind(CLI::App& app, ConfigBinder& binder) {
    binder.add_option(app, "--a1", a1, "Alice angle a1 in degrees");
    binder.add_option(app, "--a2", a2, "Alice angle a2 in degrees (key setting)");
    binder.add_option(app, "--b1", b1, "Bob angle b1 in degrees (key setting)");
    binder.add_option(app, "--b2", b2, "Bob angle b2 in degrees");
  }

  wqkd::WignerSettings settings() const {
    return {wqkd::PolarizationAngle::from_degrees(a1), wqkd::PolarizationAngle::from_degrees(a2),
            wqkd::PolarizationAngle::from_degrees(b1), wqkd::PolarizationAngle::from_degrees(b2)};
  }
};

struct AttackOpts {
  std::string attack = "none";
  std::optional<double> phi_a;
  std::optional<double> phi_b;
  std::optional<double> eve_basis;
  std::optional<double> eve_basis_a;
  std::optional<double> eve_basis_b;
  std::string channel = "a";

  void bind(CLI::App& app, ConfigBinder& binder) {
    binder.add_option(app, "--attack", attack,
                      "Attack: none, product, intercept-one, intercept-both");
    binder.add_optional(app, "--phi-a", phi_a, "Product-state angle for Alice's photon (degrees)");
    binder.add_optional(app, "--phi-b", phi_b, "Product-state angle for Bob's photon (degrees)");
    binder.add_optional(app, "--eve-basis", eve_basis,
                        "Eve's basis for the one-channel intercept-resend (degrees)");
    binder.add_optional(app, "--eve-basis-a", eve_basis_a,
                        "Eve's repreparation angle on channel A (degrees)");
    binder.add_optional(app, "--eve-basis-b", eve_basis_b,
                        "Eve's repreparation angle on channel B (degrees)");
    binder.add_option(app, "--channel", channel, "Intercepted channel for intercept-one: a or b");
  }

  wqkd::AttackStrategy strategy() const {
    using wqkd::PolarizationAngle;
    if (attack == "none") {
      return wqkd::NoAttack{};
    }
    if (attack == "product") {
      if (!phi_a || !phi_b) {
        throw std::runtime_error("attack 'product' requires --phi-a and --phi-b");
      }
      return wqkd::SourceControlProduct{PolarizationAngle::from_degrees(*phi_a),
                                        PolarizationAngle::from_degrees(*phi_b)};
    }
    if (attack == "intercept-one") {
      if (!eve_basis) {
        throw std::runtime_error("attack 'intercept-one' requires --eve-basis");
      }
      wqkd::Channel ch;
      if (channel == "a") {
        ch = wqkd::Channel::A;
      } else if (channel == "b") {
        ch = wqkd::Channel::B;
      } else {
        throw std::runtime_error("--channel must be 'a' or 'b'");
      }
      return wqkd::InterceptResendOne{PolarizationAngle::from_degrees(*eve_basis), ch};
    }
    if (attack == "intercept-both") {
      if (!eve_basis_a || !eve_basis_b) {
        throw std::runtime_error("attack 'intercept-both' requires --eve-basis-a and --eve-basis-b");
      }
      return wqkd::InterceptResendBoth{PolarizationAngle::from_degrees(*eve_basis_a),
                                       PolarizationAngle::from_degrees(*eve_basis_b)};
    }
    throw std::runtime_error("unknown attack: " + attack);
  }

  json describe() const {
    json j{{"kind", attack}};
    if (attack == "product") {
      j["phi_a_deg"] = phi_a ? json(*phi_a) : json(nullptr);
      j["phi_b_deg"] = phi_b ? json(*phi_b) : json(nullptr);
    } else if (attack == "intercept-one") {
      j["eve_basis_deg"] = eve_basis ? json(*eve_basis) : json(nullptr);
      j["channel"] = channel;
    } else if (attack == "intercept-both") {
      j["eve_basis_a_deg"] = eve_basis_a ? json(*eve_basis_a) : json(nullptr);
      j["eve_basis_b_deg"] = eve_basis_b ? json(*eve_basis_b) : json(nullptr);
    }
    return j;
  }
};

struct NoiseOpts {
  double efficiency = 1.0;
  double dark = 0.0;
  double depolarization = 0.0;

  void bind(CLI::App& app, ConfigBinder& binder) {
    binder.add_option(app, "--efficiency", efficiency, "Detector efficiency in [0, 1]");
    binder.add_option(app, "--dark", dark, "Dark count probability per port per window");
    binder.add_option(app, "--depolarization", depolarization, "White-noise admixture in [0, 1]");
  }

  wqkd::NoiseModel model() const { return {efficiency, dark, depolarization}; }
};

void load_config(const std::string& path, ConfigBinder& binder) {
  if (path.empty()) {
    return;
  }
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  json cfg;
  try {
    in >> cfg;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in " + path + ": " + e.what());
  }
  binder.apply_config(cfg);
}

void emit_text(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + output_path);
  }
  out << text;
  if (!out) {
    throw std::runtime_error("failed writing output file: " + output_path);
  }
}

void emit_report(json report, const ConfigBinder& binder, const std::string& config_path,
                 const std::string& output_path) {
  json cfg = binder.echo_config();
  cfg["config"] = config_path.empty() ? json(nullptr) : json(config_path);
  report["schema_version"] = kSchemaVersion;
  report["config"] = cfg;
  emit_text(report.dump(2) + "\n", output_path);
}

json settings_to_json(const wqkd::WignerSettings& s) {
  return {{"a1", s.a1.degrees()}, {"a2", s.a2.degrees()},
          {"b1", s.b1.degrees()}, {"b2", s.b2.degrees()}};
}

json fraction_to_json(const wqkd::Fraction& f) {
  return {{"numerator", f.numerator}, {"denominator", f.denominator}, {"value", f.value()}};
}

// ---- subcommand contexts ----

struct AnalyzeCmd {
  ConfigBinder binder;
  CommonOpts common;
  SettingsOpts settings;
  AttackOpts attack;

  void setup(CLI::App& app) {
    common.bind(app, binder);
    settings.bind(app, binder);
    attack.bind(app, binder);
  }

  int run() {
    load_config(common.config_path, binder);
    const wqkd::WignerSettings ws = settings.settings();
    const wqkd::TwoPhotonState state = wqkd::realize_attack(attack.strategy());
    const wqkd::WignerResult wr = wqkd::wigner_w(state, ws);

    json report{{"command", "analyze"},
                {"attack", attack.describe()},
                {"settings_deg", settings_to_json(ws)},
                {"w", wr.w},
                {"w_tilde", wr.w_tilde},
                {"terms",
                 {{"p_a1b1_pp", wr.terms[0]},
                  {"p_a2b2_pp", wr.terms[1]},
                  {"p_a1b2_pp", wr.terms[2]},
                  {"p_a2b1_mm", wr.terms[3]}}},
                {"qber", wqkd::qber(state, ws.term3_setting())}};
    emit_report(std::move(report), binder, common.config_path, common.output_path);
    return 0;
  }
};

struct SweepCmd {
  ConfigBinder binder;
  CommonOpts common;
  SettingsOpts settings;
  wqkd::GridSpec spec;

  void setup(CLI::App& app) {
    common.bind(app, binder);
    settings.bind(app, binder);
    binder.add_option(app, "--step", spec.step_deg, "Grid step in degrees");
    binder.add_option(app, "--phi-a-min", spec.phi_a_start_deg, "Grid start for phi_a (degrees)");
    binder.add_option(app, "--phi-a-max", spec.phi_a_stop_deg,
                      "Grid stop for phi_a (degrees, exclusive)");
    binder.add_option(app, "--phi-b-min", spec.phi_b_start_deg, "Grid start for phi_b (degrees)");
    binder.add_option(app, "--phi-b-max", spec.phi_b_stop_deg,
                      "Grid stop for phi_b (degrees, exclusive)");
  }

  int run() {
    load_config(common.config_path, binder);
    const auto rows = wqkd::contour_grid(spec, settings.settings(), common.threads);
    std::ostringstream csv;
    wqkd::write_grid_csv(csv, rows);
    emit_text(csv.str(), common.output_path);
    return 0;
  }
};

struct SectionCmd {
  ConfigBinder binder;
  CommonOpts common;
  SettingsOpts settings;
  wqkd::SectionSpec spec;

  void setup(CLI::App& app) {
    common.bind(app, binder);
    settings.bind(app, binder);
    binder.add_option(app, "--phi-b", spec.phi_b_deg, "Fixed phi_b for the section (degrees)")
        ->required();
    binder.add_option(app, "--step", spec.step_deg, "Sweep step in degrees");
    binder.add_option(app, "--phi-a-min", spec.phi_a_start_deg, "Sweep start for phi_a (degrees)");
    binder.add_option(app, "--phi-a-max", spec.phi_a_stop_deg,
                      "Sweep stop for phi_a (degrees, exclusive)");
  }

  int run() {
    load_config(common.config_path, binder);
    const auto rows = wqkd::section_curve(spec, settings.settings());
    std::ostringstream csv;
    wqkd::write_section_csv(csv, rows);
    emit_text(csv.str(), common.output_path);
    return 0;
  }
};

struct SimulateCmd {
  ConfigBinder binder;
  CommonOpts common;
  SettingsOpts settings;
  AttackOpts attack;
  NoiseOpts noise;
  std::uint64_t pairs = 10000;
  double sacrifice_fraction = 0.1;
  bool log_pairs = false;
  double sigma_margin = 3.0;

  void setup(CLI::App& app) {
    common.bind(app, binder);
    settings.bind(app, binder);
    attack.bind(app, binder);
    noise.bind(app, binder);
    binder.add_option(app, "--pairs", pairs, "Number of photon pairs in the session");
    binder.add_option(app, "--sacrifice-fraction", sacrifice_fraction,
                      "Fraction of key-setting pairs disclosed for the security estimate");
    binder.add_flag(app, "--log-pairs", log_pairs, "Include the per-pair log in the report");
    binder.add_option(app, "--sigma-margin", sigma_margin,
                      "Significance margin (in sigma) for the verdicts");
  }

  int run() {
    load_config(common.config_path, binder);
    wqkd::PartySettingsPolicy policy;
    policy.alice_choices = {wqkd::PolarizationAngle::from_degrees(settings.a1),
                            wqkd::PolarizationAngle::from_degrees(settings.a2)};
    policy.bob_choices = {wqkd::PolarizationAngle::from_degrees(settings.b1),
                          wqkd::PolarizationAngle::from_degrees(settings.b2)};
    wqkd::SamplerConfig config{pairs, common.seed, noise.model(), common.threads};
    const wqkd::SessionRecord record =
        wqkd::run_session(attack.strategy(), policy, config, sacrifice_fraction);

    const wqkd::Verdict vw = wqkd::security_verdict(
        record, {wqkd::SecurityParameter::W, 0.0, sigma_margin});
    const wqkd::Verdict vt = wqkd::security_verdict(
        record, {wqkd::SecurityParameter::WTilde, 0.0, sigma_margin});

    json report{{"command", "simulate"},
                {"attack", attack.describe()},
                {"noise",
                 {{"detector_efficiency", noise.efficiency},
                  {"dark_count_probability", noise.dark},
                  {"depolarization", noise.depolarization}}},
                {"session", wqkd::session_to_json(record, log_pairs)},
                {"verdicts",
                 {{"w", wqkd::verdict_name(vw)}, {"w_tilde", wqkd::verdict_name(vt)}}}};
    emit_report(std::move(report), binder, common.config_path, common.output_path);
    return 0;
  }
};

struct OptimizeCmd {
  ConfigBinder binder;
  CommonOpts common;
  SettingsOpts settings;
  std::string objective = "min-w";
  std::string family = "product";
  double grid_step = 0.5;
  bool refine = true;

  void setup(CLI::App& app) {
    common.bind(app, binder);
    settings.bind(app, binder);
    binder.add_option(app, "--objective", objective,
                      "Objective: min-w, min-wtilde, max-w, max-wtilde");
    binder.add_option(app, "--family", family,
                      "Strategy family: product, intercept-one, intercept-both");
    binder.add_option(app, "--grid-step", grid_step, "Grid step in degrees");
    binder.add_flag(app, "--refine,!--no-refine", refine,
                    "Polish the grid optimum by coordinate descent");
  }

  int run() {
    load_config(common.config_path, binder);
    wqkd::Objective obj;
    if (objective == "min-w") {
      obj = wqkd::Objective::MinW;
    } else if (objective == "min-wtilde") {
      obj = wqkd::Objective::MinWTilde;
    } else if (objective == "max-w") {
      obj = wqkd::Objective::MaxW;
    } else if (objective == "max-wtilde") {
      obj = wqkd::Objective::MaxWTilde;
    } else {
      throw std::runtime_error("unknown objective: " + objective);
    }
    wqkd::StrategyFamily fam;
    if (family == "product") {
      fam = wqkd::StrategyFamily::SourceControlProduct;
    } else if (family == "intercept-one") {
      fam = wqkd::StrategyFamily::InterceptResendOne;
    } else if (family == "intercept-both") {
      fam = wqkd::StrategyFamily::InterceptResendBoth;
    } else {
      throw std::runtime_error("unknown family: " + family);
    }

    const wqkd::OptimizationReport result = wqkd::optimize_attack(
        obj, fam, grid_step, refine, settings.settings(), common.threads);

    json report{{"command", "optimize"},
                {"objective", wqkd::objective_name(result.objective)},
                {"family", wqkd::family_name(result.family)},
                {"grid_step_deg", result.grid_step_deg},
                {"refine", refine},
                {"best_value", result.best_value},
                {"best_params_deg", result.best_params_deg},
                {"refinement_sweeps", result.refinement_sweeps},
                {"evaluations", result.evaluations}};
    emit_report(std::move(report), binder, common.config_path, common.output_path);
    return 0;
  }
};

struct KeyrateCmd {
  ConfigBinder binder;
  CommonOpts common;

  void setup(CLI::App& app) { common.bind(app, binder); }

  int run() {
    load_config(common.config_path, binder);
    const wqkd::KeyRateComparison kr = wqkd::key_rate_comparison();
    json report{{"command", "keyrate"},
                {"chsh_key_fraction", fraction_to_json(kr.chsh_key_fraction)},
                {"chsh_discard_fraction", fraction_to_json(kr.chsh_discard_fraction)},
                {"wigner3_key_fraction_max", fraction_to_json(kr.wigner3_key_fraction_max)},
                {"wigner3_discard_fraction", fraction_to_json(kr.wigner3_discard_fraction)}};
    emit_report(std::move(report), binder, common.config_path, common.output_path);
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner-inequality QKD simulator and attack analysis toolkit"};
  app.require_subcommand(1);

  AnalyzeCmd analyze_cmd;
  SweepCmd sweep_cmd;
  SectionCmd section_cmd;
  SimulateCmd simulate_cmd;
  OptimizeCmd optimize_cmd;
  KeyrateCmd keyrate_cmd;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Analytic W, W-tilde, and QBER for a state under an attack");
  analyze_cmd.setup(*analyze);
  CLI::App* sweep =
      app.add_subcommand("sweep", "Product-state W/W-tilde contour grid as CSV");
  sweep_cmd.setup(*sweep);
  CLI::App* section =
      app.add_subcommand("section", "Section curve W(phi_a) at fixed phi_b as CSV");
  section_cmd.setup(*section);
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a full key-distribution session (JSON report)");
  simulate_cmd.setup(*simulate);
  CLI::App* optimize =
      app.add_subcommand("optimize", "Search attack parameters for a W/W-tilde extremum");
  optimize_cmd.setup(*optimize);
  CLI::App* keyrate =
      app.add_subcommand("keyrate", "Key-rate bookkeeping of the protocol variants");
  keyrate_cmd.setup(*keyrate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (app.got_subcommand(analyze)) return analyze_cmd.run();
    if (app.got_subcommand(sweep)) return sweep_cmd.run();
    if (app.got_subcommand(section)) return section_cmd.run();
    if (app.got_subcommand(simulate)) return simulate_cmd.run();
    if (app.got_subcommand(optimize)) return optimize_cmd.run();
    if (app.got_subcommand(keyrate)) return keyrate_cmd.run();
    std::cerr << "error: no command given\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
