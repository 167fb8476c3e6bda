#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "schwinger/basis.hpp"
#include "schwinger/device.hpp"
#include "schwinger/hamiltonian.hpp"
#include "schwinger/perturbation.hpp"

namespace schwinger {

/// Jump operator sign s: A(sigma,+) = a_sigma, A(sigma,-) = a_sigma^dagger.
enum class JumpSign { kPlus = 0, kMinus = 1 };

inline constexpr std::array<JumpSign, 2> kJumpSigns = {JumpSign::kPlus, JumpSign::kMinus};

constexpr int sign_of(JumpSign s) { return s == JumpSign::kPlus ? 1 : -1; }

/// Composite index (sigma, s) -> 0..3.
constexpr int jump_index(Ladder sigma, JumpSign s) {
  return 2 * static_cast<int>(sigma) + static_cast<int>(s);
}

/// gamma(sigma,s; sigma',s'), a Hermitian 4x4 matrix over the composite index.
struct GammaTensor {
  Eigen::Matrix4cd gamma = Eigen::Matrix4cd::Zero();

  Complex operator()(Ladder sigma, JumpSign s, Ladder sigmaP, JumpSign sP) const {
    return gamma(jump_index(sigma, s), jump_index(sigmaP, sP));
  }
  double hermiticity_error() const { return (gamma - gamma.adjoint()).cwiseAbs().maxCoeff(); }
};

/// Bath rates of the bare modes (gamma_{mu,m}); m = +1 uses gamma' + gamma, m = -1 uses gamma' - gamma.
double bare_rate(const LindbladRates& rates, BareMode mu, int m);

GammaTensor build_gamma(const DeviceParams& params, const CanonicalModes& modes);

/// Retained perturbed states, 0-based indices into an EigenSystem (k = 1 is index 0).
using StateSet = std::vector<int>;

/// Matrix elements A_{k,k'}(sigma,s) = <psi_k|A(sigma,s)|psi_k'> over the retained set.
struct JumpSet {
  std::array<Eigen::MatrixXcd, 4> A;

  const Eigen::MatrixXcd& operator()(Ladder sigma, JumpSign s) const {
    return A[jump_index(sigma, s)];
  }
  int size() const { return static_cast<int>(A[0].rows()); }
};

/// <psi_k| O |psi_k'> for k, k' in the set; O acts on the physical block.
Eigen::MatrixXcd project_operator(const EigenSystem& eig, const StateSet& set,
                                  const OperatorMatrix& op);

JumpSet project_jumps(const EigenSystem& eig, const AngularBasis& basis, const StateSet& set);

/// Lambda^{(l,l')}_{k,k'}: the coefficient of rho_{l,l'} in d rho_{k,k'}/dt from the dissipator.
class LambdaTensor {
 public:
  LambdaTensor() = default;
  explicit LambdaTensor(int n) : n_(n), data_(static_cast<size_t>(n) * n * n * n, Complex(0.0)) {}

  int size() const { return n_; }
  Complex& at(int l, int lp, int k, int kp) { return data_[offset(l, lp, k, kp)]; }
  Complex at(int l, int lp, int k, int kp) const { return data_[offset(l, lp, k, kp)]; }

  /// Superoperator matrix: row (k,k') = k*n + k', column (l,l') = l*n + l'.
  Eigen::MatrixXcd superoperator() const;

  /// Apply to a density matrix restricted to the set.
  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

  /// max over (l,l') of |sum_k Lambda[(l,l')->(k,k)]|; zero when the truncated
  /// dissipator conserves trace.
  double trace_leak() const;

 private:
  size_t offset(int l, int lp, int k, int kp) const {
    return ((static_cast<size_t>(l) * n_ + lp) * n_ + k) * n_ + kp;
  }
  int n_ = 0;
  std::vector<Complex> data_;
};

LambdaTensor build_lambda(const GammaTensor& gamma, const JumpSet& jumps);

/// V(t) = sum_i V_i sin(Omega_i t), amplitudes in nV and frequencies in rad/ns.
struct DriveWaveform {
  struct Tone {
    double amplitude = 0.0;
    double frequency = 0.0;
  };
  std::vector<Tone> tones;

  double operator()(double t) const;
  void validate() const;
};

/// Everything the truncated master equation needs, expressed over the retained set.
struct TruncatedModel {
  StateSet set;
  std::vector<double> energies;      // eps_k, rad/ns
  Eigen::MatrixXcd theta;            // Theta_{k,k'}
  JumpSet jumps;
  LambdaTensor lambda;
  std::array<Eigen::MatrixXcd, 3> spin;  // S^(x,y,z)_{k,k'}

  int size() const { return static_cast<int>(set.size()); }
};

TruncatedModel build_truncated_model(const DeviceParams& params, const CanonicalModes& modes,
                                     const AngularBasis& basis, const HamiltonianSet& ham,
                                     const EigenSystem& eig, const StateSet& set);

/// Sum_{k,k'} S^(alpha)_{k,k'} rho_{k',k}; the imaginary residue is checked and dropped.
std::array<double, 3> qubit_expectation(const std::array<Eigen::MatrixXcd, 3>& spin,
                                        const Eigen::MatrixXcd& rho);

inline constexpr double kHermiticityBudget = 1e-9;
inline constexpr double kTraceBudget = 1e-3;

struct DensityTrajectory {
  std::vector<double> times;  // ns
  std::vector<Eigen::MatrixXcd> rho;
  std::vector<std::array<double, 3>> spin;
  double maxHermiticityError = 0.0;
  double maxTraceDrift = 0.0;
  double dt = 0.0;
  long steps = 0;

  const Eigen::MatrixXcd& final_rho() const { return rho.back(); }
};

struct EvolveOptions {
  double tEnd = 0.0;  // ns
  /// Integration step in ns; 0 picks the largest step the resolution bound allows.
  double dt = 0.0;
  /// Store every `stride` steps; 0 stores only the initial and final states.
  long stride = 0;
  bool enforceStepBound = true;
};

/// Largest step resolving every drive-shifted transition: 2 pi / (20 max|eps_k - eps_k' + Omega|).
double max_step(const TruncatedModel& model, const DriveWaveform& drive);

/// Classic fixed-step RK4 of all |E|^2 density-matrix components, with the free
/// phases exp(-i (eps_k - eps_k') t) factored out and restored on output.
/// The drive enters in the lab frame (no rotating-wave approximation).
DensityTrajectory evolve(const TruncatedModel& model, const DriveWaveform& drive,
                         const Eigen::MatrixXcd& rho0, const EvolveOptions& options);

/// |psi_first><psi_first| over the retained set.
Eigen::MatrixXcd ground_state_density(int n);

void write_trajectory_tsv(std::ostream& os, const DensityTrajectory& traj);

}  // namespace schwinger
