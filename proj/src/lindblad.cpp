#include "schwinger/lindblad.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "schwinger/errors.hpp"
#include "schwinger/tsv.hpp"
#include "schwinger/units.hpp"

namespace schwinger {

namespace {

// exp(i pi K / 4); K is always even for the rate tensor, giving powers of i.
Complex eighth_root_power(int k) {
  const int r = ((k % 8) + 8) % 8;
  switch (r) {
    case 0: return {1.0, 0.0};
    case 2: return {0.0, 1.0};
    case 4: return {-1.0, 0.0};
    case 6: return {0.0, -1.0};
    default: return std::polar(1.0, units::kPi * r / 4.0);
  }
}

}  // namespace

double bare_rate(const LindbladRates& rates, BareMode mu, int m) {
  const double prime = mu == BareMode::kPlus ? rates.gammaPlusPrime : rates.gammaMinusPrime;
  const double plain = mu == BareMode::kPlus ? rates.gammaPlus : rates.gammaMinus;
  return m > 0 ? prime + plain : prime - plain;
}

GammaTensor build_gamma(const DeviceParams& params, const CanonicalModes& modes) {
  params.rates.validate();
  GammaTensor out;
  for (Ladder sigma : kLadders) {
    for (JumpSign s : kJumpSigns) {
      for (Ladder sigmaP : kLadders) {
        for (JumpSign sP : kJumpSigns) {
          const double ws = modes.omega(sigma);
          const double wsP = modes.omega(sigmaP);
          const int sv = sign_of(s);
          const int sPv = sign_of(sP);
          const int sig = sign_of(sigma);
          const int sigP = sign_of(sigmaP);
          Complex acc = 0.0;
          for (BareMode mu : kBareModes) {
            const double wmu = modes.omega(mu);
            const int muv = sign_of(mu);
            for (int m : {1, -1}) {
              const double rate = bare_rate(params.rates, mu, m);
              if (rate == 0.0) continue;
              const double amp = rate * modes.mixing(sigma, mu) * modes.mixing(sigmaP, mu) *
                                 ((wmu + m * sv * ws) / ws) * ((wmu + m * sPv * wsP) / wsP);
              const int k = (sig - sigP) * m * (1 - muv) - sv * (1 - sig) + sPv * (1 - sigP);
              acc += amp * eighth_root_power(k);
            }
          }
          out.gamma(jump_index(sigma, s), jump_index(sigmaP, sP)) = 0.25 * acc;
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXcd project_operator(const EigenSystem& eig, const StateSet& set,
                                  const OperatorMatrix& op) {
  const int n = static_cast<int>(set.size());
  Eigen::MatrixXcd vecs(eig.states.rows(), n);
  for (int i = 0; i < n; ++i) {
    if (set[i] < 0 || set[i] >= eig.size()) {
      throw SimError(ErrorCode::kInvalidArgument, "state set index out of range");
    }
    vecs.col(i) = eig.states.col(set[i]);
  }
  return vecs.adjoint() * op * vecs;
}

JumpSet project_jumps(const EigenSystem& eig, const AngularBasis& basis, const StateSet& set) {
  JumpSet out;
  for (Ladder sigma : kLadders) {
    const OperatorMatrix a =
        project_physical(basis, ladder_matrix(basis, sigma, LadderKind::kAnnihilate));
    const OperatorMatrix aDag = a.adjoint();
    out.A[jump_index(sigma, JumpSign::kPlus)] = project_operator(eig, set, a);
    out.A[jump_index(sigma, JumpSign::kMinus)] = project_operator(eig, set, aDag);
  }
  return out;
}

Eigen::MatrixXcd LambdaTensor::superoperator() const {
  const int n2 = n_ * n_;
  Eigen::MatrixXcd out(n2, n2);
  for (int k = 0; k < n_; ++k)
    for (int kp = 0; kp < n_; ++kp)
      for (int l = 0; l < n_; ++l)
        for (int lp = 0; lp < n_; ++lp) out(k * n_ + kp, l * n_ + lp) = at(l, lp, k, kp);
  return out;
}

Eigen::MatrixXcd LambdaTensor::apply(const Eigen::MatrixXcd& rho) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_, n_);
  for (int k = 0; k < n_; ++k)
    for (int kp = 0; kp < n_; ++kp)
      for (int l = 0; l < n_; ++l)
        for (int lp = 0; lp < n_; ++lp) out(k, kp) += at(l, lp, k, kp) * rho(l, lp);
  return out;
}

double LambdaTensor::trace_leak() const {
  double worst = 0.0;
  for (int l = 0; l < n_; ++l) {
    for (int lp = 0; lp < n_; ++lp) {
      Complex sum = 0.0;
      for (int k = 0; k < n_; ++k) sum += at(l, lp, k, k);
      worst = std::max(worst, std::abs(sum));
    }
  }
  return worst;
}

LambdaTensor build_lambda(const GammaTensor& gamma, const JumpSet& jumps) {
  const int n = jumps.size();
  LambdaTensor out(n);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Complex g = gamma.gamma(a, b);
      if (g == Complex(0.0)) continue;
      const Eigen::MatrixXcd& A = jumps.A[a];
      const Eigen::MatrixXcd& B = jumps.A[b];
      // (B^dagger A)_{k,l} = sum_{k''} B_{k'',k}^* A_{k'',l}
      const Eigen::MatrixXcd BdA = B.adjoint() * A;
      for (int l = 0; l < n; ++l) {
        for (int lp = 0; lp < n; ++lp) {
          for (int k = 0; k < n; ++k) {
            for (int kp = 0; kp < n; ++kp) {
              Complex term = 2.0 * A(k, l) * std::conj(B(kp, lp));
              if (kp == lp) term -= BdA(k, l);
              if (k == l) term -= BdA(lp, kp);
              out.at(l, lp, k, kp) += 0.5 * g * term;
            }
          }
        }
      }
    }
  }
  return out;
}

double DriveWaveform::operator()(double t) const {
  double v = 0.0;
  for (const Tone& tone : tones) v += tone.amplitude * std::sin(tone.frequency * t);
  return v;
}

void DriveWaveform::validate() const {
  for (const Tone& tone : tones) {
    if (!(tone.amplitude >= 0.0) || !(tone.frequency > 0.0)) {
      throw SimError(ErrorCode::kInvalidArgument,
                     "drive tones need non-negative amplitude and positive frequency");
    }
  }
}

TruncatedModel build_truncated_model(const DeviceParams& params, const CanonicalModes& modes,
                                     const AngularBasis& basis, const HamiltonianSet& ham,
                                     const EigenSystem& eig, const StateSet& set) {
  if (set.empty()) throw SimError(ErrorCode::kInvalidArgument, "empty state set");
  TruncatedModel model;
  model.set = set;
  for (int k : set) {
    if (k < 0 || k >= eig.size()) {
      throw SimError(ErrorCode::kInvalidArgument, "state set index out of range");
    }
    model.energies.push_back(eig.energies[k]);
  }
  model.theta = project_operator(eig, set, ham.Theta);
  model.jumps = project_jumps(eig, basis, set);
  model.lambda = build_lambda(build_gamma(params, modes), model.jumps);
  const SpinMatrices spins = spin_matrices(basis);
  model.spin[0] = project_operator(eig, set, project_physical(basis, spins.Sx));
  model.spin[1] = project_operator(eig, set, project_physical(basis, spins.Sy));
  model.spin[2] = project_operator(eig, set, project_physical(basis, spins.Sz));
  return model;
}

std::array<double, 3> qubit_expectation(const std::array<Eigen::MatrixXcd, 3>& spin,
                                        const Eigen::MatrixXcd& rho) {
  std::array<double, 3> out{};
  for (int a = 0; a < 3; ++a) {
    const Complex value = (spin[a].array() * rho.transpose().array()).sum();
    if (std::abs(value.imag()) > 100.0 * kHermiticityBudget) {
      throw SimError(ErrorCode::kNonPhysicalState,
                     "spin expectation has an imaginary part; density matrix is not Hermitian");
    }
    out[a] = value.real();
  }
  return out;
}

double max_step(const TruncatedModel& model, const DriveWaveform& drive) {
  std::vector<double> freqs;
  for (const auto& tone : drive.tones) freqs.push_back(tone.frequency);
  if (freqs.empty()) freqs.push_back(0.0);
  double fastest = 0.0;
  for (double ek : model.energies)
    for (double ekp : model.energies)
      for (double w : freqs) fastest = std::max(fastest, std::abs(ek - ekp + w));
  if (fastest == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * units::kPi / (20.0 * fastest);
}

Eigen::MatrixXcd ground_state_density(int n) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  rho(0, 0) = 1.0;
  return rho;
}

namespace {

class InteractionFrameRhs {
 public:
  InteractionFrameRhs(const TruncatedModel& model, const DriveWaveform& drive)
      : n_(model.size()), drive_(drive), phase_(n_ * n_), work_(n_ * n_), tmp_(n_ * n_) {
    const double e0 = model.energies.front();
    for (double e : model.energies) energies_.push_back(e - e0);
    dissipator_ = model.lambda.superoperator();
    const int n2 = n_ * n_;
    const Complex i(0.0, 1.0);
    commutator_ = Eigen::MatrixXcd::Zero(n2, n2);
    for (int k = 0; k < n_; ++k)
      for (int kp = 0; kp < n_; ++kp)
        for (int l = 0; l < n_; ++l)
          for (int lp = 0; lp < n_; ++lp) {
            Complex c = 0.0;
            if (kp == lp) c += i * model.theta(k, l);
            if (k == l) c -= i * model.theta(lp, kp);
            commutator_(k * n_ + kp, l * n_ + lp) = c;
          }
    perLevel_.resize(n_);
  }

  /// exp(-i (e_k - e_k') t) for every component.
  void set_phases(double t) {
    for (int k = 0; k < n_; ++k) perLevel_[k] = std::polar(1.0, -energies_[k] * t);
    for (int k = 0; k < n_; ++k)
      for (int kp = 0; kp < n_; ++kp) phase_(k * n_ + kp) = perLevel_[k] * std::conj(perLevel_[kp]);
  }

  void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& out) {
    set_phases(t);
    work_ = phase_.cwiseProduct(y);
    out.noalias() = dissipator_ * work_;
    const double v = drive_(t);
    if (v != 0.0) {
      tmp_.noalias() = commutator_ * work_;
      out += v * tmp_;
    }
    out = phase_.conjugate().cwiseProduct(out);
  }

  Eigen::MatrixXcd to_lab(double t, const Eigen::VectorXcd& y) {
    set_phases(t);
    Eigen::MatrixXcd rho(n_, n_);
    for (int k = 0; k < n_; ++k)
      for (int kp = 0; kp < n_; ++kp) rho(k, kp) = phase_(k * n_ + kp) * y(k * n_ + kp);
    return rho;
  }

 private:
  int n_;
  const DriveWaveform& drive_;
  std::vector<double> energies_;
  std::vector<Complex> perLevel_;
  Eigen::MatrixXcd dissipator_;
  Eigen::MatrixXcd commutator_;
  Eigen::VectorXcd phase_;
  Eigen::VectorXcd work_;
  Eigen::VectorXcd tmp_;
};

void check_initial_state(const Eigen::MatrixXcd& rho0, int n) {
  if (rho0.rows() != n || rho0.cols() != n) {
    throw SimError(ErrorCode::kInvalidArgument, "initial density matrix has the wrong size");
  }
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > kHermiticityBudget) {
    throw SimError(ErrorCode::kInvalidArgument, "initial density matrix is not Hermitian");
  }
  if (std::abs(rho0.trace() - Complex(1.0)) > kHermiticityBudget) {
    throw SimError(ErrorCode::kInvalidArgument, "initial density matrix does not have unit trace");
  }
}

}  // namespace

DensityTrajectory evolve(const TruncatedModel& model, const DriveWaveform& drive,
                         const Eigen::MatrixXcd& rho0, const EvolveOptions& options) {
  drive.validate();
  const int n = model.size();
  check_initial_state(rho0, n);
  if (!(options.tEnd > 0.0)) throw SimError(ErrorCode::kInvalidArgument, "tEnd must be positive");

  const double bound = max_step(model, drive);
  double dt = options.dt > 0.0 ? options.dt : std::min(bound, options.tEnd);
  if (options.enforceStepBound && dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt=" << dt << " ns exceeds the resolution bound " << bound << " ns";
    throw SimError(ErrorCode::kStepSizeTooLarge, os.str());
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(options.tEnd / dt - 1e-9)));
  dt = options.tEnd / static_cast<double>(steps);
  const long stride = options.stride > 0 ? options.stride : steps;

  InteractionFrameRhs rhs(model, drive);
  const int n2 = n * n;
  Eigen::VectorXcd y(n2), k1(n2), k2(n2), k3(n2), k4(n2), stage(n2);
  for (int k = 0; k < n; ++k)
    for (int kp = 0; kp < n; ++kp) y(k * n + kp) = rho0(k, kp);

  DensityTrajectory traj;
  traj.dt = dt;
  traj.steps = steps;
  auto record = [&](double t) {
    Eigen::MatrixXcd rho = rhs.to_lab(t, y);
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    const double drift = std::abs(rho.trace() - Complex(1.0));
    traj.maxHermiticityError = std::max(traj.maxHermiticityError, herm);
    traj.maxTraceDrift = std::max(traj.maxTraceDrift, drift);
    if (!(herm <= 100.0 * kHermiticityBudget) || !(drift <= 100.0 * kTraceBudget)) {
      std::ostringstream os;
      os << "density matrix left the physical region at t=" << t << " ns (hermiticity " << herm
         << ", trace drift " << drift << ")";
      throw SimError(ErrorCode::kNonPhysicalState, os.str());
    }
    traj.spin.push_back(qubit_expectation(model.spin, rho));
    traj.times.push_back(t);
    traj.rho.push_back(std::move(rho));
  };

  record(0.0);
  const double half = 0.5 * dt;
  for (long step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * dt;
    rhs(t, y, k1);
    stage = y + half * k1;
    rhs(t + half, stage, k2);
    stage = y + half * k2;
    rhs(t + half, stage, k3);
    stage = y + dt * k3;
    rhs(t + dt, stage, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if ((step + 1) % stride == 0 || step + 1 == steps) {
      record(static_cast<double>(step + 1) * dt);
    }
  }
  return traj;
}

void write_trajectory_tsv(std::ostream& os, const DensityTrajectory& traj) {
  const int n = traj.rho.empty() ? 0 : static_cast<int>(traj.rho.front().rows());
  os << "t_us";
  for (int k = 0; k < n; ++k)
    for (int kp = k; kp < n; ++kp)
      os << "\tre_rho" << k + 1 << kp + 1 << "\tim_rho" << k + 1 << kp + 1;
  os << "\tSx\tSy\tSz\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    os << tsv::num(traj.times[i] / units::kMicrosecond);
    const Eigen::MatrixXcd& rho = traj.rho[i];
    for (int k = 0; k < n; ++k)
      for (int kp = k; kp < n; ++kp)
        os << '\t' << tsv::num(rho(k, kp).real()) << '\t' << tsv::num(rho(k, kp).imag());
    for (double s : traj.spin[i]) os << '\t' << tsv::num(s);
    os << '\n';
  }
}

}  // namespace schwinger
