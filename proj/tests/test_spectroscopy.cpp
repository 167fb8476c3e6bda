#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>

#include "schwinger/errors.hpp"
#include "schwinger/spectroscopy.hpp"
#include "schwinger/units.hpp"

using namespace schwinger;

namespace {

SweepPlan short_plan(int points, double tUs) {
  SweepPlan plan;
  plan.order = 0;
  plan.gridPoints = points;
  plan.tReadout = tUs * units::kMicrosecond;
  return plan;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no SimError thrown";
  return ErrorCode::kConfig;
}

}  // namespace

TEST(Plan, Validation) {
  SweepPlan p;
  EXPECT_NO_THROW(validate_plan(p));
  p.tReadout = 0.0;
  EXPECT_EQ(code_of([&] { validate_plan(p); }), ErrorCode::kConfig);
  p = SweepPlan{};
  p.omegaGrid = {4.7, 4.7};
  EXPECT_EQ(code_of([&] { validate_plan(p); }), ErrorCode::kConfig);
  p = SweepPlan{};
  p.experiment = Experiment::kGSweep;
  EXPECT_EQ(code_of([&] { validate_plan(p); }), ErrorCode::kConfig);
  p.gList = {0.01, 0.005};
  EXPECT_EQ(code_of([&] { validate_plan(p); }), ErrorCode::kConfig);
  p = SweepPlan{};
  p.experiment = Experiment::kLadder;
  EXPECT_EQ(code_of([&] { validate_plan(p); }), ErrorCode::kConfig);
}

TEST(Plan, DefaultGrid) {
  LineshapeInfo info;
  info.epsTilde21 = 4.7;
  info.delta21 = 2e-4;
  info.tau = 1e5;
  SweepPlan plan;
  const std::vector<double> g = default_omega_grid(info, plan);
  ASSERT_EQ(g.size(), 801u);
  EXPECT_DOUBLE_EQ(g[400], 4.7);
  EXPECT_NEAR(g.back() - g.front(), 2.0 * 5.0 * 2e-4, 1e-15);
  for (size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
  info.delta21 = 1e-6;
  EXPECT_NEAR(default_omega_grid(info, plan).back() - 4.7, 20.0 / info.tau, 1e-15);
  plan.gridHalfWidth = 3.0;
  EXPECT_NEAR(default_omega_grid(info, plan).back() - 4.7, 3e-6, 1e-15);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(hits.size(), 4, [&](size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](size_t i) {
                              if (i == 7) throw SimError(ErrorCode::kDegeneracy, "x");
                            }),
               SimError);
}

TEST(TwoState, DeterministicAcrossWorkerCounts) {
  const SweepPlan plan = short_plan(7, 2.0);
  const SweepResult a = run_two_state(reference_device(), plan, 1);
  const SweepResult b = run_two_state(reference_device(), plan, 3);
  ASSERT_EQ(a.records.size(), 7u);
  for (size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].Omega, b.records[i].Omega);
    EXPECT_EQ(a.records[i].spin, b.records[i].spin);
    EXPECT_EQ(a.records[i].rho22, b.records[i].rho22);
  }
}

// Far from resonance the drive does nothing beyond what the bath does alone.
TEST(TwoState, FarDetunedMatchesUndrivenEvolution) {
  SweepPlan plan = short_plan(1, 20.0);
  const DeviceModel m = prepare_model(reference_device(), plan.sMax, 0, plan.stateSet);
  const SteadyStateResult shape = steady_lineshape_parameters(steady_inputs(m.truncated, plan.Vo));
  plan.omegaGrid = {shape.epsTilde21 + 200.0 * shape.delta21};
  const SweepResult r = run_two_state(reference_device(), plan);
  EvolveOptions opt;
  opt.tEnd = plan.tReadout;
  const DensityTrajectory free = evolve(m.truncated, DriveWaveform{}, ground_state_density(2), opt);
  EXPECT_NEAR(r.records[0].spin[2], free.spin.back()[2], 1e-4);
  EXPECT_NEAR(r.records[0].spin[0], 0.0, 1e-6);
}

TEST(TwoState, LineshapeSymmetricAboutShiftedResonance) {
  SweepPlan plan = short_plan(1, 20.0);
  const DeviceModel m = prepare_model(reference_device(), plan.sMax, 0, plan.stateSet);
  const SteadyStateResult shape = steady_lineshape_parameters(steady_inputs(m.truncated, plan.Vo));
  const std::vector<double> offsets = {0.5, 1.0, 2.5, 5.0};
  plan.omegaGrid.clear();
  for (auto it = offsets.rbegin(); it != offsets.rend(); ++it)
    plan.omegaGrid.push_back(shape.epsTilde21 - *it * shape.delta21);
  for (double k : offsets) plan.omegaGrid.push_back(shape.epsTilde21 + k * shape.delta21);
  const SweepResult r = run_two_state(reference_device(), plan, 2);
  const size_t n = r.records.size();
  ASSERT_EQ(n, 2 * offsets.size());
  for (size_t i = 0; i < offsets.size(); ++i) {
    const double below = r.records[offsets.size() - 1 - i].rho22;
    const double above = r.records[offsets.size() + i].rho22;
    EXPECT_LE(std::abs(below - above), 0.02 * std::max(below, above)) << "offset " << offsets[i];
  }
}

TEST(GSweep, OneLineshapePerCoupling) {
  SweepPlan plan = short_plan(3, 0.5);
  plan.experiment = Experiment::kGSweep;
  plan.order = 2;
  plan.gList = {0.005, 0.01};
  const SweepResult r = run_g_sweep(reference_device(), plan);
  ASSERT_EQ(r.lines.size(), 2u);
  ASSERT_EQ(r.records.size(), 6u);
  EXPECT_EQ(r.records[0].g, 0.005);
  EXPECT_EQ(r.records[5].g, 0.01);
  EXPECT_LT(r.lines[1].eps21, r.lines[0].eps21);
  std::ostringstream os;
  write_sweep_tsv(os, "gsweep", reference_device(), plan, r);
  EXPECT_NE(os.str().find("# experiment=gsweep\n"), std::string::npos);
  EXPECT_NE(os.str().find("# g=5.0000000000e-03 "), std::string::npos);
  EXPECT_NE(os.str().find("# EC_ueV=1.6500000000e-01\n"), std::string::npos);
}

TEST(GSweep, CriticalCouplingPropagates) {
  SweepPlan plan = short_plan(3, 0.5);
  plan.experiment = Experiment::kGSweep;
  plan.gList = {0.005, 4.0};
  EXPECT_EQ(code_of([&] { run_g_sweep(reference_device(), plan); }),
            ErrorCode::kCriticalCouplingExceeded);
}

namespace {

SweepPlan ladder_plan(double Vp, double Vc, double tUs) {
  SweepPlan plan;
  plan.experiment = Experiment::kLadder;
  plan.stateSet = {0, 1, 2};
  plan.Vp = Vp;
  plan.Vc = Vc;
  plan.tEnd = tUs * units::kMicrosecond;
  return plan;
}

DeviceParams without_bath() {
  DeviceParams p = reference_device();
  p.rates = LindbladRates{};
  return p;
}

}  // namespace

TEST(Ladder, NoProbeLeavesGroundStateAlone) {
  const LadderResult r = run_ladder(without_bath(), ladder_plan(0.0, 1.0, 5.0));
  // Only the far off-resonant pull of the coupling tone on the first rung remains.
  for (const auto& rho : r.trajectory.rho) EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-5);
}

TEST(Ladder, NoCouplingToneNeverReachesThirdState) {
  const LadderResult r = run_ladder(without_bath(), ladder_plan(0.5, 0.0, 20.0));
  EXPECT_LT(r.maxRho33, 1e-6);
  EXPECT_GT(r.longTimeDiagonals[1], 1e-3);
}

TEST(Ladder, TonesSitAboveResonance) {
  const LadderResult r = run_ladder(reference_device(), ladder_plan(0.5, 1.0, 1.0));
  EXPECT_NEAR(r.OmegaP - r.eps21, 50.0 * units::kKHz, 1e-15);
  EXPECT_NEAR(r.OmegaC - r.eps32, 50.0 * units::kKHz, 1e-15);
  EXPECT_LE(r.trajectory.maxTraceDrift, kTraceBudget);
  std::ostringstream os;
  write_ladder_tsv(os, reference_device(), ladder_plan(0.5, 1.0, 1.0), r);
  EXPECT_NE(os.str().find("# long_time_rho33="), std::string::npos);
  EXPECT_NE(os.str().find("re_rho23\tim_rho23\tre_rho33"), std::string::npos);
}

TEST(Fit, RecoversSyntheticLorentzian) {
  std::vector<double> x, y;
  for (int i = 0; i < 201; ++i) {
    const double w = 4.7 + (i - 100) * 1e-5;
    x.push_back(w);
    const double d = w - 4.70012;
    y.push_back(-0.1 - 0.2 * (3e-4 * 3e-4) / (d * d + 3e-4 * 3e-4));
  }
  const LorentzianFit f = fit_lorentzian_dip(x, y);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(f.center, 4.70012, 1e-9);
  EXPECT_NEAR(f.hwhm, 3e-4, 1e-9);
  EXPECT_NEAR(f.depth, 0.2, 1e-7);
  EXPECT_EQ(count_dips(y, 0.5), 1);
}

TEST(Fit, CountsSeparateDips) {
  std::vector<double> y;
  for (int i = 0; i < 100; ++i) {
    const double a = i - 30.0, b = i - 70.0;
    y.push_back(-1.0 / (1.0 + a * a / 9.0) - 0.8 / (1.0 + b * b / 9.0));
  }
  EXPECT_EQ(count_dips(y, 0.5), 2);
  EXPECT_EQ(count_dips(y, 0.9), 1);
}
