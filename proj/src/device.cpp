#include "schwinger/device.hpp"

#include <cmath>
#include <sstream>

#include "schwinger/errors.hpp"
#include "schwinger/units.hpp"

namespace schwinger {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw SimError(ErrorCode::kInvalidArgument, what);
}

}  // namespace

void LindbladRates::validate() const {
  require(gammaPlusPrime >= 0 && gammaPlus >= 0 && gammaMinusPrime >= 0 && gammaMinus >= 0,
          "Lindblad rates must be non-negative");
  require(gammaPlusPrime >= gammaPlus, "resonator diffusion rate must be >= its dissipation rate");
  require(gammaMinusPrime >= gammaMinus, "transmon diffusion rate must be >= its dissipation rate");
}

void DeviceParams::validate() const {
  require(L > 0 && std::isfinite(L), "L must be positive");
  require(C > 0 && std::isfinite(C), "C must be positive");
  require(E_C > 0 && std::isfinite(E_C), "E_C must be positive");
  require(E_J > 0 && std::isfinite(E_J), "E_J must be positive");
  require(g >= 0 && std::isfinite(g), "g must be non-negative");
  require(driveScale >= 0 && std::isfinite(driveScale), "drive scale must be non-negative");
  rates.validate();
}

DeviceParams reference_device() {
  DeviceParams p;
  p.L = 10.0;
  p.C = 1.0;
  p.E_C = units::ueV_to_rad_per_ns(0.165);
  p.E_J = units::ueV_to_rad_per_ns(8.24);
  p.g = 5.0 * units::kMHz;
  p.rates.gammaPlusPrime = 100.0 * units::kKHz;
  p.rates.gammaPlus = 10.0 * units::kKHz;
  p.rates.gammaMinusPrime = 10.0 * units::kKHz;
  p.rates.gammaMinus = 1.0 * units::kKHz;
  return p;
}

double drive_prefactor(double impedance_ohm) {
  // SI value is per volt per second; rescale to per nV per ns.
  return 1.0 / std::sqrt(2.0 * units::kHbar * impedance_ohm) * 1e-18;
}

CanonicalModes derive_modes(const DeviceParams& params) {
  params.validate();
  CanonicalModes m;
  // L [pH] * C [nF] = 1e-21 s^2 = 1e-3 ns^2
  m.omegaPlus = 1.0 / std::sqrt(params.L * params.C * 1e-3);
  m.omegaMinus = std::sqrt(8.0 * params.E_C * params.E_J);
  m.gTilde = params.g * std::sqrt(m.omegaMinus / params.E_C);
  m.E_C = params.E_C;
  m.Z = std::sqrt(params.L * 1e-12 / (params.C * 1e-9));

  const double wp2 = m.omegaPlus * m.omegaPlus;
  const double wm2 = m.omegaMinus * m.omegaMinus;
  const double split = std::sqrt((wp2 - wm2) * (wp2 - wm2) +
                                 m.gTilde * m.gTilde * m.omegaPlus * m.omegaMinus);
  const double up2 = 0.5 * (wp2 + wm2 + split);
  const double down2 = 0.5 * (wp2 + wm2 - split);
  if (!(down2 > 0.0)) {
    std::ostringstream os;
    os << "g=" << params.g << " rad/ns is at or above the critical coupling "
       << critical_coupling(params) << " rad/ns";
    throw SimError(ErrorCode::kCriticalCouplingExceeded, os.str());
  }
  m.omegaUp = std::sqrt(up2);
  m.omegaDown = std::sqrt(down2);
  if (params.g == 0.0) {
    // Decoupled oscillators: the labels follow whichever bare mode is higher.
    m.omegaUp = std::max(m.omegaPlus, m.omegaMinus);
    m.omegaDown = std::min(m.omegaPlus, m.omegaMinus);
  }
  if (m.omegaUp == m.omegaDown) {
    throw SimError(ErrorCode::kInvalidArgument,
                   "degenerate uncoupled oscillators: canonical mixing is undefined");
  }

  for (Ladder s : kLadders) {
    const Ladder sbar = s == Ladder::kUp ? Ladder::kDown : Ladder::kUp;
    const double ws = m.omega(s);
    const double wsbar = m.omega(sbar);
    for (BareMode mu : kBareModes) {
      const BareMode mubar = mu == BareMode::kPlus ? BareMode::kMinus : BareMode::kPlus;
      const double wmu = m.omega(mu);
      const double wmubar = m.omega(mubar);
      double ratio = (ws / wmu) * (wmubar * wmubar - ws * ws) / (wsbar * wsbar - ws * ws);
      // Rounding can push an exactly-zero mixing coefficient slightly negative.
      if (ratio < 0.0 && ratio > -1e-15) ratio = 0.0;
      m.xi[static_cast<int>(s)][static_cast<int>(mu)] = std::sqrt(ratio);
    }
  }

  const double pref = drive_prefactor(m.Z) * params.driveScale;
  for (Ladder s : kLadders) {
    m.v[static_cast<int>(s)] =
        pref * (m.omegaPlus / m.omega(s)) * m.mixing(s, BareMode::kPlus);
  }
  return m;
}

double critical_coupling(const DeviceParams& params) {
  const double wp = 1.0 / std::sqrt(params.L * params.C * 1e-3);
  const double wm = std::sqrt(8.0 * params.E_C * params.E_J);
  const double gtilde_c = 2.0 * std::sqrt(wp * wm);
  return gtilde_c / std::sqrt(wm / params.E_C);
}

WeakCouplingResiduals weak_coupling_check(const CanonicalModes& modes) {
  const double wp = modes.omegaPlus;
  const double wm = modes.omegaMinus;
  const double g2 = modes.gTilde * modes.gTilde;
  const double denom = 8.0 * (wp * wp - wm * wm);
  const double up = wp + g2 * wm / denom;
  const double down = wm - g2 * wp / denom;
  return {std::abs(modes.omegaUp - up), std::abs(modes.omegaDown - down)};
}

std::vector<std::string> validity_warnings(const DeviceParams& params,
                                           const CanonicalModes& modes) {
  std::vector<std::string> out;
  if (params.E_C > 0.1 * 12.0 * modes.omegaDown) {
    out.push_back("E_C is not small against 12 omega_down; perturbation theory is unreliable");
  }
  const double lo = std::min(modes.omegaPlus, modes.omegaMinus);
  if (modes.gTilde > 0.1 * 4.0 * lo) {
    out.push_back("coupling is not weak against 4 omega_mu; direct cross dissipation is neglected");
  }
  return out;
}

}  // namespace schwinger
