// Command-line front end: device config -> experiment -> TSV.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "schwinger/config.hpp"
#include "schwinger/errors.hpp"
#include "schwinger/perturbation.hpp"
#include "schwinger/spectroscopy.hpp"
#include "schwinger/steadystate.hpp"
#include "schwinger/tsv.hpp"
#include "schwinger/units.hpp"

#ifndef SCHWINGER_PRESET_DIR
#define SCHWINGER_PRESET_DIR "presets"
#endif

namespace fs = std::filesystem;
using namespace schwinger;

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::string outDir;
  std::vector<std::string> overrides;
  std::optional<double> dt;
  std::optional<double> tEnd;
  std::optional<long> stride;
  std::optional<double> sMax;
  std::optional<int> order;
  std::optional<int> jobs;
  // levels
  double gMinMHz = 0.0;
  double gMaxMHz = 500.0;
  int gPoints = 51;
  // steady
  bool noCheck = false;
};

fs::path preset_dir() {
  if (const char* env = std::getenv("SCHWINGER_PRESET_DIR")) return env;
  return SCHWINGER_PRESET_DIR;
}

RunConfig resolve_config(const std::string& command, const Options& o) {
  RunConfig cfg;
  if (!o.preset.empty()) load_config_file(preset_dir() / (o.preset + ".cfg"), cfg);
  if (!o.config.empty()) load_config_file(o.config, cfg);
  for (const std::string& kv : o.overrides) apply_override(cfg, kv);
  if (o.dt) cfg.plan.dt = *o.dt;
  if (o.tEnd) {
    // --tend sets whichever run length the command uses.
    if (command == "ladder" || command == "steady") {
      cfg.plan.tEnd = *o.tEnd * units::kMicrosecond;
    } else {
      cfg.plan.tReadout = *o.tEnd * units::kMicrosecond;
    }
  }
  if (o.stride) cfg.plan.stride = *o.stride;
  if (o.sMax) cfg.plan.sMax = *o.sMax;
  if (o.order) cfg.plan.order = *o.order;

  if (!cfg.experiment.empty() && cfg.experiment != command) {
    throw SimError(ErrorCode::kConfig,
                   "config is for '" + cfg.experiment + "', not '" + command + "'");
  }
  const bool explicitStates =
      std::find(cfg.keys.begin(), cfg.keys.end(), "states") != cfg.keys.end();
  if (command == "ladder") {
    cfg.plan.experiment = Experiment::kLadder;
    if (!explicitStates) cfg.plan.stateSet = {0, 1, 2};
  } else if (command == "gsweep") {
    cfg.plan.experiment = Experiment::kGSweep;
  } else {
    cfg.plan.experiment = Experiment::kTwoStateSweep;
  }
  cfg.device.validate();
  return cfg;
}

int resolve_jobs(const Options& o) {
  if (o.jobs) return std::max(1, *o.jobs);
  if (const char* env = std::getenv("SCHWINGER_SIM_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw SimError(ErrorCode::kConfig, std::string("bad SCHWINGER_SIM_JOBS: ") + env);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Output goes to DIR/<name>.tsv when --out is given, else stdout.
class Sink {
 public:
  Sink(const std::string& outDir, const std::string& name) {
    if (outDir.empty()) return;
    std::error_code ec;
    fs::create_directories(outDir, ec);
    const fs::path path = fs::path(outDir) / (name + ".tsv");
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw SimError(ErrorCode::kConfig, "cannot write " + path.string());
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void warn(const DeviceParams& params) {
  const CanonicalModes modes = derive_modes(params);
  for (const std::string& w : validity_warnings(params, modes)) std::cerr << "WARN " << w << "\n";
}

void write_header(std::ostream& os, const std::string& name, const RunConfig& cfg) {
  os << "# experiment=" << name << "\n";
  for (const std::string& line : parameter_echo(cfg.device)) os << "# " << line << "\n";
  os << "# order=" << cfg.plan.order << "\n";
  os << "# sMax=" << tsv::num(cfg.plan.sMax) << "\n";
}

void run_modes(const RunConfig& cfg, const Options& o) {
  const CanonicalModes m = derive_modes(cfg.device);
  const WeakCouplingResiduals weak = weak_coupling_check(m);
  Sink sink(o.outDir, "modes");
  std::ostream& os = sink.stream();
  os << "# experiment=modes\n";
  for (const std::string& line : parameter_echo(cfg.device)) os << "# " << line << "\n";
  os << "quantity\tvalue\n";
  auto row = [&](const char* name, double x) { os << name << '\t' << tsv::num(x) << '\n'; };
  row("omega_plus_GHz", m.omegaPlus);
  row("omega_minus_GHz", m.omegaMinus);
  row("g_tilde_GHz", m.gTilde);
  row("omega_up_GHz", m.omegaUp);
  row("omega_down_GHz", m.omegaDown);
  row("xi_up_plus", m.mixing(Ladder::kUp, BareMode::kPlus));
  row("xi_up_minus", m.mixing(Ladder::kUp, BareMode::kMinus));
  row("xi_down_plus", m.mixing(Ladder::kDown, BareMode::kPlus));
  row("xi_down_minus", m.mixing(Ladder::kDown, BareMode::kMinus));
  row("v_up_GHz_per_nV", m.drive(Ladder::kUp));
  row("v_down_GHz_per_nV", m.drive(Ladder::kDown));
  row("Z_ohm", m.Z);
  row("g_c_GHz", critical_coupling(cfg.device));
  row("weak_residual_up", weak.up);
  row("weak_residual_down", weak.down);
}

void run_levels(const RunConfig& cfg, const Options& o) {
  if (o.gPoints < 2 || !(o.gMaxMHz > o.gMinMHz)) {
    throw SimError(ErrorCode::kConfig, "levels needs g-points >= 2 and g-max > g-min");
  }
  std::vector<double> grid(o.gPoints);
  for (int i = 0; i < o.gPoints; ++i) {
    grid[i] = (o.gMinMHz + (o.gMaxMHz - o.gMinMHz) * i / (o.gPoints - 1)) * units::kMHz;
  }
  const auto rows = levels_vs_g(cfg.device, grid, cfg.plan.order, cfg.plan.sMax);
  Sink sink(o.outDir, "levels");
  std::ostream& os = sink.stream();
  write_header(os, "levels", cfg);
  write_levels_tsv(os, rows);
}

void run_heatmap(const RunConfig& cfg, const Options& o) {
  const DeviceModel model = prepare_model(cfg.device, cfg.plan.sMax, cfg.plan.order, {0, 1});
  Sink sink(o.outDir, "heatmap");
  std::ostream& os = sink.stream();
  write_header(os, "heatmap", cfg);
  write_heatmap_tsv(os, heatmap(model.eig, model.ham.dH));
}

void run_rabi2(const RunConfig& cfg, const Options& o, const std::string& name) {
  const int jobs = resolve_jobs(o);
  const SweepResult result = name == "gsweep" ? run_g_sweep(cfg.device, cfg.plan, jobs)
                                              : run_two_state(cfg.device, cfg.plan, jobs);
  Sink sink(o.outDir, name);
  write_sweep_tsv(sink.stream(), name, cfg.device, cfg.plan, result);
}

void run_ladder_cmd(const RunConfig& cfg, const Options& o) {
  const LadderResult result = run_ladder(cfg.device, cfg.plan);
  Sink sink(o.outDir, "ladder");
  write_ladder_tsv(sink.stream(), cfg.device, cfg.plan, result);
}

void run_steady(const RunConfig& cfg, const Options& o) {
  const DeviceModel model =
      prepare_model(cfg.device, cfg.plan.sMax, cfg.plan.order, cfg.plan.stateSet);
  const SteadyStateInputs in = steady_inputs(model.truncated, cfg.plan.Vo);
  const SteadyStateResult shape = steady_lineshape_parameters(in);
  LineshapeInfo info{cfg.device.g, in.eps21, shape.epsTilde21, shape.delta21, shape.tau};
  const std::vector<double> grid =
      cfg.plan.omegaGrid.empty() ? default_omega_grid(info, cfg.plan) : cfg.plan.omegaGrid;
  const SteadyStateResult result = steady_state(in, grid);

  Sink sink(o.outDir, "steady");
  std::ostream& os = sink.stream();
  write_header(os, "steady", cfg);
  os << "# Vo_nV=" << tsv::num(cfg.plan.Vo) << "\n";
  if (!o.noCheck) {
    // On-resonance RK4 run compared against the asymptote after 3 tau.
    DriveWaveform drive;
    drive.tones.push_back({cfg.plan.Vo, shape.epsTilde21});
    EvolveOptions opt;
    opt.tEnd = std::max(cfg.plan.tEnd, 4.0 * shape.tau);
    opt.dt = cfg.plan.dt;
    opt.stride = cfg.plan.stride > 0 ? cfg.plan.stride : 64;
    const DensityTrajectory traj =
        evolve(model.truncated, drive, ground_state_density(model.truncated.size()), opt);
    const SteadyStatePoint point = steady_point(in, shape, shape.epsTilde21);
    const ConsistencyReport rep = consistency_check(traj, point, 3.0 * shape.tau);
    os << "# check_rho22_inf=" << tsv::num(point.rho22Inf) << "\n";
    os << "# check_rho22_residual=" << tsv::num(rep.rho22Residual) << "\n";
    os << "# check_rho22_rel_residual=" << tsv::num(rep.rho22RelResidual) << "\n";
    os << "# check_rho22_max_rel_deviation=" << tsv::num(rep.rho22MaxRelDeviation) << "\n";
    os << "# check_envelope_mismatch=" << tsv::num(rep.envelopeMismatch) << "\n";
  }
  write_steady_tsv(os, result);
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Device/experiment config file (key = value)");
  cmd->add_option("--preset", o.preset, "Named preset from the presets directory (fig2, fig3a, ...)");
  cmd->add_option("--out", o.outDir, "Output directory; stdout when omitted");
  cmd->add_option("--set", o.overrides, "Override a config key, key=value (repeatable)");
  cmd->add_option("--dt", o.dt, "Integration step (ns); default is the resolution bound");
  cmd->add_option("--tend", o.tEnd, "Run length (us): readout time for sweeps, total for ladder/steady");
  cmd->add_option("--stride", o.stride, "Store every N steps");
  cmd->add_option("--smax", o.sMax, "Largest total spin S kept in the basis");
  cmd->add_option("--order", o.order, "Perturbation order 0, 1 or 2");
  cmd->add_option("--jobs", o.jobs, "Worker threads (fallback: SCHWINGER_SIM_JOBS)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schwinger-oscillator transmon/resonator simulator"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
  };
  const std::vector<Command> commands = {
      {"modes", "Canonical frequencies, mixing, drive couplings and g_c"},
      {"levels", "Lowest perturbed levels versus coupling g"},
      {"heatmap", "|<psi_k|dH|psi_k'>| between perturbed states"},
      {"rabi2", "Two-state single-tone sweep, <S(t2)> versus Omega"},
      {"gsweep", "Two-state sweeps for a list of couplings"},
      {"ladder", "Two-tone three-state ladder trajectory"},
      {"steady", "Closed-form two-state asymptotes plus an RK4 check"},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    if (std::string(c.name) == "levels") {
      sub->add_option("--g-min-mhz", o.gMinMHz, "Smallest coupling (MHz)");
      sub->add_option("--g-max-mhz", o.gMaxMHz, "Largest coupling (MHz)");
      sub->add_option("--g-points", o.gPoints, "Number of couplings");
    }
    if (std::string(c.name) == "steady") {
      sub->add_flag("--no-check", o.noCheck, "Skip the RK4 consistency run");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ERROR code=config msg=" << e.what() << "\n";
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = resolve_config(command, o);
    if (command != "modes") warn(cfg.device);
    if (command == "modes") run_modes(cfg, o);
    else if (command == "levels") run_levels(cfg, o);
    else if (command == "heatmap") run_heatmap(cfg, o);
    else if (command == "rabi2" || command == "gsweep") run_rabi2(cfg, o, command);
    else if (command == "ladder") run_ladder_cmd(cfg, o);
    else if (command == "steady") run_steady(cfg, o);
  } catch (const SimError& e) {
    std::cerr << "ERROR code=" << to_string(e.code()) << " msg=" << e.what() << "\n";
    return is_numeric_failure(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "ERROR code=internal msg=" << e.what() << "\n";
    return 2;
  }
  return 0;
}
