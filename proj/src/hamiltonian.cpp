#include "schwinger/hamiltonian.hpp"

namespace schwinger {

double spin_frequency(const CanonicalModes& modes, const AngularIndex& idx) {
  return (modes.omegaUp + modes.omegaDown) * (idx.S() + 0.5) +
         (modes.omegaUp - modes.omegaDown) * idx.mS();
}

LinearPart build_linear(const CanonicalModes& modes, const AngularBasis& basis) {
  const int p = basis.physicalSize();
  LinearPart out;
  out.H0 = OperatorMatrix::Zero(p, p);
  out.spectrum.xi.resize(p);
  for (int i = 0; i < p; ++i) {
    const double xi = spin_frequency(modes, basis.state(i));
    out.spectrum.xi[i] = xi;
    out.H0(i, i) = xi;
  }
  return out;
}

OperatorMatrix quartic_quadrature(const CanonicalModes& modes, const AngularBasis& basis) {
  const OperatorMatrix aUp = ladder_matrix(basis, Ladder::kUp, LadderKind::kAnnihilate);
  const OperatorMatrix aDown = ladder_matrix(basis, Ladder::kDown, LadderKind::kAnnihilate);
  const Complex i(0.0, 1.0);
  const double xiUp = modes.mixing(Ladder::kUp, BareMode::kMinus);
  const double xiDown = modes.mixing(Ladder::kDown, BareMode::kMinus);
  return xiUp * (aUp.adjoint() - aUp) - i * xiDown * (aDown.adjoint() + aDown);
}

OperatorMatrix build_quartic(const DeviceParams& params, const CanonicalModes& modes,
                             const AngularBasis& basis) {
  const OperatorMatrix m = quartic_quadrature(modes, basis);
  const OperatorMatrix m2 = m * m;
  const OperatorMatrix m4 = m2 * m2;
  return project_physical(basis, m4) * (-params.E_C / 12.0);
}

OperatorMatrix build_drive(const CanonicalModes& modes, const AngularBasis& basis) {
  const OperatorMatrix aUp = ladder_matrix(basis, Ladder::kUp, LadderKind::kAnnihilate);
  const OperatorMatrix aDown = ladder_matrix(basis, Ladder::kDown, LadderKind::kAnnihilate);
  const Complex i(0.0, 1.0);
  const OperatorMatrix theta = modes.drive(Ladder::kUp) * (aUp.adjoint() + aUp) +
                               i * modes.drive(Ladder::kDown) * (aDown.adjoint() - aDown);
  return project_physical(basis, theta);
}

HamiltonianSet build_hamiltonians(const DeviceParams& params, const CanonicalModes& modes,
                                  const AngularBasis& basis) {
  LinearPart lin = build_linear(modes, basis);
  HamiltonianSet set;
  set.H0 = std::move(lin.H0);
  set.spectrum = std::move(lin.spectrum);
  set.dH = build_quartic(params, modes, basis);
  set.Theta = build_drive(modes, basis);
  return set;
}

}  // namespace schwinger
