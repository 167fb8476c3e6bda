#pragma once

#include <array>
#include <string>
#include <vector>

namespace schwinger {

/// Environment rates of the two bare oscillators (rad/ns). The primed rates are
/// diffusion, the unprimed ones dissipation; "plus" is the resonator and
/// "minus" the transmon.
struct LindbladRates {
  double gammaPlusPrime = 0.0;
  double gammaPlus = 0.0;
  double gammaMinusPrime = 0.0;
  double gammaMinus = 0.0;

  void validate() const;
};

/// Raw circuit constants. Energies are stored as angular frequencies (rad/ns).
struct DeviceParams {
  double L = 10.0;   // pH
  double C = 1.0;    // nF
  double E_C = 0.0;  // rad/ns
  double E_J = 0.0;  // rad/ns
  double g = 0.0;    // rad/ns
  LindbladRates rates;
  /// Multiplies the drive couplings v(sigma); 1 means the bare 1/sqrt(2 hbar Z) value.
  double driveScale = 1.0;

  /// Throws SimError(kInvalidArgument) on non-physical constants.
  void validate() const;
};

/// Model parameters of the reference device (resonator 10 GHz, transmon 5 GHz,
/// E_J/E_C = 50, g = 5 MHz).
DeviceParams reference_device();

enum class Ladder { kUp = 0, kDown = 1 };
enum class BareMode { kPlus = 0, kMinus = 1 };

inline constexpr std::array<Ladder, 2> kLadders = {Ladder::kUp, Ladder::kDown};
inline constexpr std::array<BareMode, 2> kBareModes = {BareMode::kPlus, BareMode::kMinus};

/// Numerical value of a ladder index: up -> +1, down -> -1.
constexpr int sign_of(Ladder s) { return s == Ladder::kUp ? 1 : -1; }
constexpr int sign_of(BareMode m) { return m == BareMode::kPlus ? 1 : -1; }

struct CanonicalModes {
  double omegaPlus = 0.0;   // resonator 1/sqrt(LC)
  double omegaMinus = 0.0;  // transmon sqrt(8 E_C E_J)
  double gTilde = 0.0;
  double omegaUp = 0.0;
  double omegaDown = 0.0;
  /// xi[sigma][mu] mixing coefficients.
  std::array<std::array<double, 2>, 2> xi{};
  /// Drive couplings v(sigma), (rad/ns)/nV.
  std::array<double, 2> v{};
  double Z = 0.0;  // Ohm
  double E_C = 0.0;

  double omega(Ladder s) const { return s == Ladder::kUp ? omegaUp : omegaDown; }
  double omega(BareMode m) const { return m == BareMode::kPlus ? omegaPlus : omegaMinus; }
  double mixing(Ladder s, BareMode m) const {
    return xi[static_cast<int>(s)][static_cast<int>(m)];
  }
  double drive(Ladder s) const { return v[static_cast<int>(s)]; }
};

/// 1/sqrt(2 hbar Z) in (rad/ns)/nV for an impedance Z in Ohm.
double drive_prefactor(double impedance_ohm);

/// Canonical transformation of the coupled quadratic Hamiltonian.
/// Throws SimError(kCriticalCouplingExceeded) once the down-ladder goes soft.
CanonicalModes derive_modes(const DeviceParams& params);

/// Coupling g (rad/ns) at which omegaDown reaches zero.
double critical_coupling(const DeviceParams& params);

struct WeakCouplingResiduals {
  double up = 0.0;
  double down = 0.0;
};

/// Distance of the exact canonical frequencies from their weak-coupling expansion.
WeakCouplingResiduals weak_coupling_check(const CanonicalModes& modes);

/// Soft validity warnings (perturbative anharmonicity, weak coupling).
std::vector<std::string> validity_warnings(const DeviceParams& params, const CanonicalModes& modes);

}  // namespace schwinger
