#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "schwinger/device.hpp"
#include "schwinger/lindblad.hpp"
#include "schwinger/perturbation.hpp"
#include "schwinger/steadystate.hpp"

namespace schwinger {

/// Device -> modes -> operators -> eigensystem -> truncated master equation.
struct DeviceModel {
  DeviceParams params;
  CanonicalModes modes;
  AngularBasis basis;
  HamiltonianSet ham;
  EigenSystem eig;
  TruncatedModel truncated;
};

DeviceModel prepare_model(const DeviceParams& params, double sMax, int order, const StateSet& set);

enum class Experiment { kTwoStateSweep, kGSweep, kLadder };

struct SweepPlan {
  Experiment experiment = Experiment::kTwoStateSweep;
  StateSet stateSet = {0, 1};
  int order = 2;
  double sMax = 3.0;
  /// Single-tone amplitude (nV).
  double Vo = 1.0;
  /// Ladder probe and coupling amplitudes (nV).
  double Vp = 0.5;
  double Vc = 1.0;
  /// Explicit absolute drive frequencies (rad/ns). Empty means an automatic
  /// grid centred on the shifted resonance.
  std::vector<double> omegaGrid;
  int gridPoints = 801;
  /// Automatic grid half width in units of the steady-state half width; 0 means
  /// max(20/tau, 5 Delta_21).
  double gridHalfWidth = 0.0;
  std::vector<double> gList;  // rad/ns, g sweeps only
  double tReadout = 100.0e3;  // ns
  double detuning = 50.0e-6;  // rad/ns, drive sits above resonance by this much
  double tEnd = 600.0e3;      // ns, ladder run length
  double dt = 0.0;            // ns, 0 = resolution bound
  long stride = 0;
};

void validate_plan(const SweepPlan& plan);

struct SweepRecord {
  double g = 0.0;
  double Omega = 0.0;
  std::array<double, 3> spin{};
  double rho22 = 0.0;
};

struct LineshapeInfo {
  double g = 0.0;
  double eps21 = 0.0;
  double epsTilde21 = 0.0;
  double delta21 = 0.0;
  double tau = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::vector<LineshapeInfo> lines;
};

/// Automatic frequency grid for a two-state lineshape.
std::vector<double> default_omega_grid(const LineshapeInfo& info, const SweepPlan& plan);

/// Runs fn(i) for i in [0, count) on `jobs` worker threads; results must be
/// written to per-index slots.
void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn);

/// Single-tone sweep over E = {1,2}: evolve from the ground state to tReadout
/// for every Omega and record <S(t2)>.
SweepResult run_two_state(const DeviceParams& params, const SweepPlan& plan, int jobs = 1);

/// One two-state lineshape per coupling in plan.gList.
SweepResult run_g_sweep(const DeviceParams& params, const SweepPlan& plan, int jobs = 1);

struct LadderResult {
  DensityTrajectory trajectory;
  double eps21 = 0.0;
  double eps32 = 0.0;
  double OmegaP = 0.0;
  double OmegaC = 0.0;
  /// Diagonal occupations averaged over the last tenth of the run.
  std::array<double, 3> longTimeDiagonals{};
  double maxRho33 = 0.0;
};

/// Two-tone ladder over E = {1,2,3}: Omega_p = eps21 + detuning, Omega_c = eps32 + detuning.
LadderResult run_ladder(const DeviceParams& params, const SweepPlan& plan);

/// y = baseline - depth * hwhm^2 / ((x - center)^2 + hwhm^2), least squares.
struct LorentzianFit {
  double baseline = 0.0;
  double depth = 0.0;
  double center = 0.0;
  double hwhm = 0.0;
  double rms = 0.0;  // residual
  bool converged = false;
};

LorentzianFit fit_lorentzian_dip(const std::vector<double>& x, const std::vector<double>& y);

/// Local minima of y lying deeper than `fraction` of the deepest one, measured
/// from the mean of the two end points.
int count_dips(const std::vector<double>& y, double fraction);

std::vector<std::string> parameter_echo(const DeviceParams& params);

void write_sweep_tsv(std::ostream& os, const std::string& experiment, const DeviceParams& params,
                     const SweepPlan& plan, const SweepResult& result);

void write_ladder_tsv(std::ostream& os, const DeviceParams& params, const SweepPlan& plan,
                      const LadderResult& result);

}  // namespace schwinger
