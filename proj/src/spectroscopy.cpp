#include "schwinger/spectroscopy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "schwinger/errors.hpp"
#include "schwinger/tsv.hpp"
#include "schwinger/units.hpp"

namespace schwinger {

DeviceModel prepare_model(const DeviceParams& params, double sMax, int order, const StateSet& set) {
  CanonicalModes modes = derive_modes(params);
  AngularBasis basis = build_basis(sMax);
  HamiltonianSet ham = build_hamiltonians(params, modes, basis);
  EigenSystem eig = perturb(ham.spectrum, ham.dH, basis, order);
  TruncatedModel truncated = build_truncated_model(params, modes, basis, ham, eig, set);
  return DeviceModel{params, modes, std::move(basis), std::move(ham), std::move(eig),
                     std::move(truncated)};
}

void validate_plan(const SweepPlan& plan) {
  auto fail = [](const std::string& msg) { throw SimError(ErrorCode::kConfig, msg); };
  if (!(plan.tReadout > 0.0)) fail("readout time must be positive");
  if (plan.order < 0 || plan.order > 2) fail("order must be 0, 1 or 2");
  if (!std::is_sorted(plan.omegaGrid.begin(), plan.omegaGrid.end()) ||
      std::adjacent_find(plan.omegaGrid.begin(), plan.omegaGrid.end()) != plan.omegaGrid.end()) {
    fail("frequency grid must be strictly increasing");
  }
  if (plan.omegaGrid.empty() && plan.gridPoints < 1) fail("grid needs at least one point");
  if (plan.experiment == Experiment::kGSweep) {
    if (plan.gList.empty()) fail("g sweep needs at least one coupling");
    for (size_t i = 1; i < plan.gList.size(); ++i)
      if (!(plan.gList[i] > plan.gList[i - 1])) fail("g list must be strictly increasing");
  }
  if (plan.experiment == Experiment::kLadder && plan.stateSet.size() != 3) {
    fail("ladder needs three retained states");
  }
  if (plan.experiment != Experiment::kLadder && plan.stateSet.size() != 2) {
    fail("two-state sweeps need two retained states");
  }
}

std::vector<double> default_omega_grid(const LineshapeInfo& info, const SweepPlan& plan) {
  const double half = plan.gridHalfWidth > 0.0
                          ? plan.gridHalfWidth * info.delta21
                          : std::max(20.0 / info.tau, 5.0 * info.delta21);
  const int n = plan.gridPoints;
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = info.epsTilde21;
    return grid;
  }
  for (int i = 0; i < n; ++i) {
    grid[i] = info.epsTilde21 - half + 2.0 * half * static_cast<double>(i) / (n - 1);
  }
  return grid;
}

void parallel_for(size_t count, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(std::max(1, jobs), std::max<size_t>(count, 1));
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failureMutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

LineshapeInfo lineshape_info(const DeviceModel& model, double Vo) {
  const SteadyStateResult shape = steady_lineshape_parameters(steady_inputs(model.truncated, Vo));
  LineshapeInfo info;
  info.g = model.params.g;
  info.eps21 = model.truncated.energies[1] - model.truncated.energies[0];
  info.epsTilde21 = shape.epsTilde21;
  info.delta21 = shape.delta21;
  info.tau = shape.tau;
  return info;
}

void sweep_one_line(const DeviceModel& model, const SweepPlan& plan, int jobs,
                    SweepResult& result) {
  const LineshapeInfo info = lineshape_info(model, plan.Vo);
  const std::vector<double> grid =
      plan.omegaGrid.empty() ? default_omega_grid(info, plan) : plan.omegaGrid;
  const size_t base = result.records.size();
  result.records.resize(base + grid.size());
  result.lines.push_back(info);
  const Eigen::MatrixXcd rho0 = ground_state_density(model.truncated.size());
  parallel_for(grid.size(), jobs, [&](size_t i) {
    DriveWaveform drive;
    drive.tones.push_back({plan.Vo, grid[i]});
    EvolveOptions opt;
    opt.tEnd = plan.tReadout;
    opt.dt = plan.dt;
    const DensityTrajectory traj = evolve(model.truncated, drive, rho0, opt);
    SweepRecord& rec = result.records[base + i];
    rec.g = model.params.g;
    rec.Omega = grid[i];
    rec.spin = traj.spin.back();
    rec.rho22 = traj.final_rho()(1, 1).real();
  });
}

}  // namespace

SweepResult run_two_state(const DeviceParams& params, const SweepPlan& plan, int jobs) {
  validate_plan(plan);
  const DeviceModel model = prepare_model(params, plan.sMax, plan.order, plan.stateSet);
  SweepResult result;
  sweep_one_line(model, plan, jobs, result);
  return result;
}

SweepResult run_g_sweep(const DeviceParams& params, const SweepPlan& plan, int jobs) {
  validate_plan(plan);
  SweepResult result;
  for (double g : plan.gList) {
    DeviceParams p = params;
    p.g = g;
    const DeviceModel model = prepare_model(p, plan.sMax, plan.order, plan.stateSet);
    sweep_one_line(model, plan, jobs, result);
  }
  return result;
}

LadderResult run_ladder(const DeviceParams& params, const SweepPlan& plan) {
  validate_plan(plan);
  const DeviceModel model = prepare_model(params, plan.sMax, plan.order, plan.stateSet);
  const std::vector<double>& e = model.truncated.energies;
  LadderResult out;
  out.eps21 = e[1] - e[0];
  out.eps32 = e[2] - e[1];
  out.OmegaP = out.eps21 + plan.detuning;
  out.OmegaC = out.eps32 + plan.detuning;

  DriveWaveform drive;
  if (plan.Vp > 0.0) drive.tones.push_back({plan.Vp, out.OmegaP});
  if (plan.Vc > 0.0) drive.tones.push_back({plan.Vc, out.OmegaC});

  EvolveOptions opt;
  opt.tEnd = plan.tEnd;
  opt.dt = plan.dt;
  if (plan.stride > 0) {
    opt.stride = plan.stride;
  } else {
    // About 2000 stored samples.
    const double dt = plan.dt > 0.0 ? plan.dt : max_step(model.truncated, drive);
    opt.stride = std::max(1L, static_cast<long>(plan.tEnd / dt / 2000.0));
  }
  out.trajectory = evolve(model.truncated, drive, ground_state_density(3), opt);

  const DensityTrajectory& traj = out.trajectory;
  const double tailStart = 0.9 * traj.times.back();
  long count = 0;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out.maxRho33 = std::max(out.maxRho33, traj.rho[i](2, 2).real());
    if (traj.times[i] < tailStart) continue;
    for (int k = 0; k < 3; ++k) out.longTimeDiagonals[k] += traj.rho[i](k, k).real();
    ++count;
  }
  for (double& d : out.longTimeDiagonals) d /= static_cast<double>(count);
  return out;
}

namespace {

// Parameters in scaled form: x is shifted by x0 and divided by the grid span.
struct LorentzResidual : Eigen::DenseFunctor<double> {
  LorentzResidual(const std::vector<double>& u, const std::vector<double>& y)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(u.size())), u_(u), y_(y) {}

  int operator()(const InputType& p, ValueType& r) const {
    const double w2 = p[3] * p[3];
    for (size_t i = 0; i < u_.size(); ++i) {
      const double d = u_[i] - p[2];
      r[static_cast<Eigen::Index>(i)] = p[0] - p[1] * w2 / (d * d + w2) - y_[i];
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& j) const {
    const double w = p[3];
    const double w2 = w * w;
    for (size_t i = 0; i < u_.size(); ++i) {
      const double d = u_[i] - p[2];
      const double den = d * d + w2;
      const auto row = static_cast<Eigen::Index>(i);
      j(row, 0) = 1.0;
      j(row, 1) = -w2 / den;
      j(row, 2) = -p[1] * w2 * 2.0 * d / (den * den);
      j(row, 3) = -p[1] * 2.0 * w * d * d / (den * den);
    }
    return 0;
  }

  const std::vector<double>& u_;
  const std::vector<double>& y_;
};

}  // namespace

LorentzianFit fit_lorentzian_dip(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 5) {
    throw SimError(ErrorCode::kInvalidArgument, "Lorentzian fit needs at least five points");
  }
  const size_t n = x.size();
  const size_t iMin = static_cast<size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  const double x0 = x[iMin];
  const double span = x.back() - x.front();
  std::vector<double> u(n);
  for (size_t i = 0; i < n; ++i) u[i] = (x[i] - x0) / span;

  const double base = 0.5 * (y.front() + y.back());
  const double depth = base - y[iMin];
  // Half-maximum crossings around the minimum give the starting width.
  size_t lo = iMin, hi = iMin;
  while (lo > 0 && base - y[lo] > 0.5 * depth) --lo;
  while (hi + 1 < n && base - y[hi] > 0.5 * depth) ++hi;
  const double w0 = std::max(0.5 * (u[hi] - u[lo]), 1.0 / static_cast<double>(n));

  Eigen::VectorXd p(4);
  p << base, depth, 0.0, w0;
  LorentzResidual fn(u, y);
  Eigen::LevenbergMarquardt<LorentzResidual> lm(fn);
  lm.setMaxfev(2000);
  const Eigen::LevenbergMarquardtSpace::Status status = lm.minimize(p);

  LorentzianFit fit;
  fit.baseline = p[0];
  fit.depth = p[1];
  fit.center = x0 + p[2] * span;
  fit.hwhm = std::abs(p[3]) * span;
  Eigen::VectorXd r(n);
  fn(p, r);
  fit.rms = std::sqrt(r.squaredNorm() / static_cast<double>(n));
  fit.converged = status == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                  status == Eigen::LevenbergMarquardtSpace::CosinusTooSmall;
  return fit;
}

int count_dips(const std::vector<double>& y, double fraction) {
  if (y.size() < 3) return 0;
  const double base = 0.5 * (y.front() + y.back());
  const double deepest = base - *std::min_element(y.begin(), y.end());
  if (!(deepest > 0.0)) return 0;
  int count = 0;
  for (size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] < y[i - 1] && y[i] <= y[i + 1] && base - y[i] > fraction * deepest) ++count;
  }
  return count;
}

std::vector<std::string> parameter_echo(const DeviceParams& p) {
  return {
      "L_pH=" + tsv::num(p.L),
      "C_nF=" + tsv::num(p.C),
      "EC_ueV=" + tsv::num(units::rad_per_ns_to_ueV(p.E_C)),
      "EJ_ueV=" + tsv::num(units::rad_per_ns_to_ueV(p.E_J)),
      "g_GHz=" + tsv::num(p.g),
      "gamma_plus_prime_kHz=" + tsv::num(p.rates.gammaPlusPrime / units::kKHz),
      "gamma_plus_kHz=" + tsv::num(p.rates.gammaPlus / units::kKHz),
      "gamma_minus_prime_kHz=" + tsv::num(p.rates.gammaMinusPrime / units::kKHz),
      "gamma_minus_kHz=" + tsv::num(p.rates.gammaMinus / units::kKHz),
      "drive_scale=" + tsv::num(p.driveScale),
  };
}

namespace {

void write_plan_header(std::ostream& os, const std::string& experiment, const DeviceParams& params,
                       const SweepPlan& plan) {
  os << "# experiment=" << experiment << "\n";
  for (const std::string& line : parameter_echo(params)) os << "# " << line << "\n";
  os << "# order=" << plan.order << "\n";
  os << "# sMax=" << tsv::num(plan.sMax) << "\n";
  os << "# detuning_kHz=" << tsv::num(plan.detuning / units::kKHz) << "\n";
}

}  // namespace

void write_sweep_tsv(std::ostream& os, const std::string& experiment, const DeviceParams& params,
                     const SweepPlan& plan, const SweepResult& result) {
  write_plan_header(os, experiment, params, plan);
  os << "# Vo_nV=" << tsv::num(plan.Vo) << "\n";
  os << "# t2_us=" << tsv::num(plan.tReadout / units::kMicrosecond) << "\n";
  for (const LineshapeInfo& line : result.lines) {
    os << "# g=" << tsv::num(line.g) << " eps21=" << tsv::num(line.eps21)
       << " eps_tilde21=" << tsv::num(line.epsTilde21) << " delta21=" << tsv::num(line.delta21)
       << " tau_us=" << tsv::num(line.tau / units::kMicrosecond) << "\n";
  }
  os << "g_GHz\tOmega_GHz\tSx\tSy\tSz\trho22\n";
  for (const SweepRecord& r : result.records) {
    os << tsv::num(r.g) << '\t' << tsv::num(r.Omega) << '\t' << tsv::num(r.spin[0]) << '\t'
       << tsv::num(r.spin[1]) << '\t' << tsv::num(r.spin[2]) << '\t' << tsv::num(r.rho22) << '\n';
  }
}

void write_ladder_tsv(std::ostream& os, const DeviceParams& params, const SweepPlan& plan,
                      const LadderResult& result) {
  write_plan_header(os, "ladder", params, plan);
  os << "# Vp_nV=" << tsv::num(plan.Vp) << "\n";
  os << "# Vc_nV=" << tsv::num(plan.Vc) << "\n";
  os << "# Omega_p=" << tsv::num(result.OmegaP) << "\n";
  os << "# Omega_c=" << tsv::num(result.OmegaC) << "\n";
  os << "# long_time_rho11=" << tsv::num(result.longTimeDiagonals[0]) << "\n";
  os << "# long_time_rho22=" << tsv::num(result.longTimeDiagonals[1]) << "\n";
  os << "# long_time_rho33=" << tsv::num(result.longTimeDiagonals[2]) << "\n";
  os << "# max_rho33=" << tsv::num(result.maxRho33) << "\n";
  write_trajectory_tsv(os, result.trajectory);
}

}  // namespace schwinger
