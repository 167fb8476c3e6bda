#pragma once

#include <vector>

#include "schwinger/basis.hpp"
#include "schwinger/device.hpp"

namespace schwinger {

/// Unperturbed eigenfrequencies xi(S,mS) of the physical block, in basis order.
struct LinearSpectrum {
  std::vector<double> xi;
};

/// xi(S,mS) = (wUp + wDown)(S + 1/2) + (wUp - wDown) mS.
double spin_frequency(const CanonicalModes& modes, const AngularIndex& idx);

struct LinearPart {
  OperatorMatrix H0;  // diagonal, physical block
  LinearSpectrum spectrum;
};

LinearPart build_linear(const CanonicalModes& modes, const AngularBasis& basis);

/// Anti-Hermitian quadrature entering the quartic term:
/// xi(up,-)(a_up^dag - a_up) - i xi(down,-)(a_down^dag + a_down), on the buffered basis.
OperatorMatrix quartic_quadrature(const CanonicalModes& modes, const AngularBasis& basis);

/// Delta H = -(E_C/12) M^4 evaluated on the buffered basis and projected to the
/// physical block.
OperatorMatrix build_quartic(const DeviceParams& params, const CanonicalModes& modes,
                             const AngularBasis& basis);

/// Theta = v_up (a_up^dag + a_up) + i v_down (a_down^dag - a_down), physical block.
OperatorMatrix build_drive(const CanonicalModes& modes, const AngularBasis& basis);

struct HamiltonianSet {
  OperatorMatrix H0;
  OperatorMatrix dH;
  OperatorMatrix Theta;
  LinearSpectrum spectrum;
};

HamiltonianSet build_hamiltonians(const DeviceParams& params, const CanonicalModes& modes,
                                  const AngularBasis& basis);

}  // namespace schwinger
