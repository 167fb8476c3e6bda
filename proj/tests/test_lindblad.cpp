#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "schwinger/errors.hpp"
#include "schwinger/lindblad.hpp"
#include "schwinger/spectroscopy.hpp"
#include "schwinger/units.hpp"

using namespace schwinger;

namespace {

const DeviceModel& two_state(int order) {
  static const DeviceModel m0 = prepare_model(reference_device(), 3.0, 0, {0, 1});
  static const DeviceModel m2 = prepare_model(reference_device(), 3.0, 2, {0, 1});
  return order == 0 ? m0 : m2;
}

const DeviceModel& three_state() {
  static const DeviceModel m = prepare_model(reference_device(), 3.0, 2, {0, 1, 2});
  return m;
}

DriveWaveform tone(double V, double Omega) {
  DriveWaveform d;
  d.tones.push_back({V, Omega});
  return d;
}

}  // namespace

TEST(Gamma, MatchesExtendedPrecisionDefinition) {
  for (double gMHz : {5.0, 300.0}) {
    DeviceParams p = reference_device();
    p.g = gMHz * units::kMHz;
    const GammaTensor g = build_gamma(p, derive_modes(p));
    const auto ref = oracle::extended_gamma(p);
    const double scale = g.gamma.cwiseAbs().maxCoeff();
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        const Complex want(static_cast<double>(ref(a, b).real()),
                           static_cast<double>(ref(a, b).imag()));
        EXPECT_LT(std::abs(g.gamma(a, b) - want), 1e-12 * scale) << a << "," << b;
      }
    }
  }
}

TEST(Gamma, IsHermitianAndPositive) {
  const DeviceParams p = reference_device();
  const GammaTensor g = build_gamma(p, derive_modes(p));
  EXPECT_LT(g.hermiticity_error(), 1e-20);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(g.gamma);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-18);
}

TEST(Gamma, BareRates) {
  const LindbladRates r = reference_device().rates;
  EXPECT_DOUBLE_EQ(bare_rate(r, BareMode::kPlus, 1), r.gammaPlusPrime + r.gammaPlus);
  EXPECT_DOUBLE_EQ(bare_rate(r, BareMode::kMinus, -1), r.gammaMinusPrime - r.gammaMinus);
}

TEST(Lambda, MatchesDirectDissipator) {
  for (const DeviceModel* m : {&two_state(0), &two_state(2), &three_state()}) {
    const GammaTensor g = build_gamma(m->params, m->modes);
    for (unsigned seed = 1; seed <= 8; ++seed) {
      const Eigen::MatrixXcd rho = oracle::sample_density(m->truncated.size(), seed);
      const Eigen::MatrixXcd want = oracle::direct_dissipator(g, m->truncated.jumps, rho);
      EXPECT_LT((m->truncated.lambda.apply(rho) - want).cwiseAbs().maxCoeff(), 1e-12);
      const Eigen::VectorXcd vec = Eigen::Map<const Eigen::VectorXcd>(
          Eigen::MatrixXcd(rho.transpose()).data(), rho.size());
      const Eigen::VectorXcd out = m->truncated.lambda.superoperator() * vec;
      for (int k = 0; k < rho.rows(); ++k)
        for (int kp = 0; kp < rho.cols(); ++kp)
          EXPECT_LT(std::abs(out(k * rho.rows() + kp) - want(k, kp)), 1e-12);
    }
  }
}

TEST(Lambda, ConservesTraceWithinTheSet) {
  for (const DeviceModel* m : {&two_state(0), &three_state()}) {
    EXPECT_LT(m->truncated.lambda.trace_leak(), 1e-18);
  }
}

TEST(Lambda, TwoStateCoherenceTime) {
  const LambdaTensor& l = two_state(2).truncated.lambda;
  const double tau = 1.0 / std::abs(l.at(0, 1, 0, 1));
  EXPECT_NEAR(tau / units::kMicrosecond, 99.89, 0.05);
}

TEST(Model, DriveSelectionRule) {
  const TruncatedModel& m = three_state().truncated;
  EXPECT_EQ(m.theta(0, 2), Complex(0.0));
  EXPECT_EQ(m.theta(2, 0), Complex(0.0));
  EXPECT_GT(std::abs(m.theta(0, 1)), 1e-4);
  EXPECT_GT(std::abs(m.theta(1, 2)), 1e-4);
}

TEST(Drive, Waveform) {
  DriveWaveform d;
  d.tones = {{2.0, 1.0}, {0.5, 3.0}};
  EXPECT_DOUBLE_EQ(d(0.7), 2.0 * std::sin(0.7) + 0.5 * std::sin(2.1));
  d.tones.push_back({-1.0, 1.0});
  EXPECT_THROW(d.validate(), SimError);
}

// Without drive the two-state populations relax exponentially with rate
// Lambda22_11 - Lambda11_11 and the coherence decays with Lambda12_12.
TEST(Evolve, FreeDecayMatchesClosedForm) {
  const TruncatedModel& m = two_state(0).truncated;
  const LambdaTensor& l = m.lambda;
  const double in = l.at(1, 1, 0, 0).real();
  const double out = -l.at(0, 0, 0, 0).real();
  const double rate = in + out;
  const double pInf = in / rate;
  Eigen::MatrixXcd rho0(2, 2);
  rho0 << 0.6, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.4;
  EvolveOptions opt;
  opt.tEnd = 50.0 * units::kMicrosecond;
  opt.stride = 50000;
  const DensityTrajectory traj = evolve(m, DriveWaveform{}, rho0, opt);
  const double eps21 = m.energies[1] - m.energies[0];
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const double p11 = pInf + (0.6 - pInf) * std::exp(-rate * t);
    EXPECT_NEAR(traj.rho[i](0, 0).real(), p11, 1e-9);
    const Complex c = Complex(0.2, 0.1) * std::exp((Complex(0.0, eps21) + l.at(0, 1, 0, 1)) * t);
    EXPECT_LT(std::abs(traj.rho[i](0, 1) - c), 1e-9);
  }
}

TEST(Evolve, FourthOrderConvergence) {
  const TruncatedModel& m = two_state(0).truncated;
  const DriveWaveform d = tone(1.0, m.energies[1] - m.energies[0]);
  auto run = [&](double dt) {
    EvolveOptions o;
    o.tEnd = 500.0;
    o.dt = dt;
    o.enforceStepBound = false;
    return evolve(m, d, ground_state_density(2), o).final_rho();
  };
  const Eigen::MatrixXcd ref = run(0.002);
  const double ratio = (run(0.064) - ref).norm() / (run(0.032) - ref).norm();
  EXPECT_GE(ratio, 12.0);
  EXPECT_LE(ratio, 20.0);
}

TEST(Evolve, BudgetsHoldOnDrivenLadder) {
  const TruncatedModel& m = three_state().truncated;
  DriveWaveform d = tone(0.5, m.energies[1] - m.energies[0]);
  d.tones.push_back({1.0, m.energies[2] - m.energies[1]});
  EvolveOptions o;
  o.tEnd = 5.0 * units::kMicrosecond;
  o.stride = 1000;
  const DensityTrajectory traj = evolve(m, d, ground_state_density(3), o);
  EXPECT_LE(traj.maxHermiticityError, kHermiticityBudget);
  EXPECT_LE(traj.maxTraceDrift, kTraceBudget);
  for (const auto& rho : traj.rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(Evolve, StepBound) {
  const TruncatedModel& m = two_state(0).truncated;
  const DriveWaveform d = tone(1.0, m.energies[1] - m.energies[0]);
  const double bound = max_step(m, d);
  EXPECT_NEAR(bound, 2.0 * units::kPi / (20.0 * 2.0 * (m.energies[1] - m.energies[0])), 1e-12);
  EvolveOptions o;
  o.tEnd = 10.0;
  o.dt = 1.5 * bound;
  try {
    evolve(m, d, ground_state_density(2), o);
    FAIL() << "expected StepSizeTooLarge";
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStepSizeTooLarge);
  }
}

TEST(Evolve, RunawayIntegrationIsNonPhysical) {
  const TruncatedModel& m = two_state(0).truncated;
  const DriveWaveform d = tone(1e5, m.energies[1] - m.energies[0]);
  EvolveOptions o;
  o.tEnd = 200.0;
  o.dt = 2.0;
  o.stride = 1;
  o.enforceStepBound = false;
  try {
    evolve(m, d, ground_state_density(2), o);
    FAIL() << "expected NonPhysicalState";
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonPhysicalState);
  }
}

TEST(Evolve, RejectsBadInitialState) {
  const TruncatedModel& m = two_state(0).truncated;
  EvolveOptions o;
  o.tEnd = 1.0;
  EXPECT_THROW(evolve(m, DriveWaveform{}, Eigen::MatrixXcd::Identity(2, 2), o), SimError);
  EXPECT_THROW(evolve(m, DriveWaveform{}, ground_state_density(3), o), SimError);
}

TEST(Evolve, SpinExpectation) {
  const TruncatedModel& m = two_state(0).truncated;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(1, 1) = 1.0;
  // Upper state is |1/2,-1/2>.
  EXPECT_NEAR(qubit_expectation(m.spin, rho)[2], -0.5, 1e-12);
  EXPECT_NEAR(qubit_expectation(m.spin, ground_state_density(2))[2], 0.0, 1e-12);
}

TEST(Evolve, TrajectoryExport) {
  const TruncatedModel& m = two_state(0).truncated;
  EvolveOptions o;
  o.tEnd = 1.0;
  const DensityTrajectory traj = evolve(m, DriveWaveform{}, ground_state_density(2), o);
  std::ostringstream os;
  write_trajectory_tsv(os, traj);
  EXPECT_EQ(os.str().rfind("t_us\tre_rho11\tim_rho11\tre_rho12\tim_rho12\tre_rho22\tim_rho22\tSx\tSy"
                           "\tSz\n",
                           0),
            0u);
}
