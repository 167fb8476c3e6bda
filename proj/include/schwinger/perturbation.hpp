#pragma once

#include <iosfwd>
#include <vector>

#include "schwinger/basis.hpp"
#include "schwinger/device.hpp"
#include "schwinger/hamiltonian.hpp"

namespace schwinger {

/// Perturbed eigenstates |psi_k> of the time-independent Hamiltonian, sorted by
/// ascending energy. Column k of `states` holds the coefficients of |psi_k> over
/// the physical block of the angular basis.
struct EigenSystem {
  Eigen::MatrixXcd states;
  std::vector<double> energies;
  /// Dominant |S,mS> component of each state (its zero-order correspondence).
  std::vector<AngularIndex> labels;
  /// Basis index each perturbation series started from.
  std::vector<int> origins;
  /// xi of the originating basis state.
  std::vector<double> zeroOrder;
  int order = 0;

  int size() const { return static_cast<int>(energies.size()); }
  Eigen::VectorXcd state(int k) const { return states.col(k); }
};

/// Rayleigh-Schrodinger perturbation theory (order 0, 1 or 2) of H0 + dH in the
/// angular basis. Couplings that are exactly zero are skipped, so degenerate
/// states in different selection-rule sectors never share a denominator.
/// Throws SimError(kDegeneracy) when a coupled pair is closer than
/// 1e-6 * omega_down in zero-order energy.
EigenSystem perturb(const LinearSpectrum& spectrum, const OperatorMatrix& dH,
                    const AngularBasis& basis, int order);

/// |<psi_k|dH|psi_k'>| normalised to max 1. Rows and columns follow the basis
/// order of each state's label so constant-S blocks are contiguous.
struct HeatMap {
  Eigen::MatrixXd magnitude;
  std::vector<AngularIndex> labels;  // per row/column
  std::vector<int> energyIndex;      // k of each row/column in the eigensystem
  double maxMagnitude = 0.0;         // before normalisation
};

HeatMap heatmap(const EigenSystem& eigsys, const OperatorMatrix& dH);

void write_heatmap_tsv(std::ostream& os, const HeatMap& map);

struct LevelRow {
  double g = 0.0;
  std::vector<double> energies;   // perturbed, relative to nothing (absolute, rad/ns)
  std::vector<double> zeroOrder;  // xi of each level's label
  std::vector<AngularIndex> labels;
};

/// Lowest `count` levels as a function of g. Every g must lie below g_c.
std::vector<LevelRow> levels_vs_g(const DeviceParams& params, const std::vector<double>& gGrid,
                                  int order, double sMax = 3.0, int count = 4);

void write_levels_tsv(std::ostream& os, const std::vector<LevelRow>& rows);

}  // namespace schwinger
