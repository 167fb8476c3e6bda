#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "schwinger/errors.hpp"
#include "schwinger/perturbation.hpp"
#include "schwinger/units.hpp"

using namespace schwinger;

namespace {

struct Solved {
  DeviceParams params;
  CanonicalModes modes;
  AngularBasis basis;
  HamiltonianSet ham;
  EigenSystem eig;
};

Solved solve(double gMHz, int order, double sMax = 3.0) {
  DeviceParams p = reference_device();
  p.g = gMHz * units::kMHz;
  CanonicalModes m = derive_modes(p);
  AngularBasis b = build_basis(sMax);
  HamiltonianSet h = build_hamiltonians(p, m, b);
  EigenSystem e = perturb(h.spectrum, h.dH, b, order);
  return {p, m, std::move(b), std::move(h), std::move(e)};
}

}  // namespace

TEST(Perturbation, ZeroOrderIsTheLinearSpectrum) {
  const Solved s = solve(5.0, 0);
  std::vector<double> xi = s.ham.spectrum.xi;
  std::sort(xi.begin(), xi.end());
  ASSERT_EQ(s.eig.size(), 28);
  for (int k = 0; k < s.eig.size(); ++k) EXPECT_DOUBLE_EQ(s.eig.energies[k], xi[k]);
  EXPECT_EQ(s.eig.labels[0], (AngularIndex{0, 0}));
  EXPECT_EQ(s.eig.labels[1], AngularIndex::from_spin(0.5, -0.5));
}

TEST(Perturbation, EnergiesSortedAndStatesNormalised) {
  const Solved s = solve(5.0, 2);
  for (int k = 1; k < s.eig.size(); ++k) EXPECT_LE(s.eig.energies[k - 1], s.eig.energies[k]);
  for (int k = 0; k < s.eig.size(); ++k) EXPECT_NEAR(s.eig.state(k).norm(), 1.0, 1e-12);
}

TEST(Perturbation, DominantComponentIsRealPositive) {
  const Solved s = solve(5.0, 2);
  for (int k = 0; k < s.eig.size(); ++k) {
    const int i = s.basis.index_of(s.eig.labels[k]);
    EXPECT_GT(s.eig.states(i, k).real(), 0.0);
    EXPECT_EQ(s.eig.states(i, k).imag(), 0.0);
  }
}

// Second-order energies against exact diagonalisation of H0 + dH in each
// photon-number parity sector.
TEST(Perturbation, SecondOrderMatchesExactDiagonalisation) {
  const Solved s = solve(5.0, 2);
  const int p = s.basis.physicalSize();
  const OperatorMatrix H = s.ham.H0 + s.ham.dH;
  double dHnorm = 0.0;
  double gap = 1e300;
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (i == j || s.ham.dH(i, j) == Complex(0.0)) continue;
      dHnorm = std::max(dHnorm, std::abs(s.ham.dH(i, j)));
      gap = std::min(gap, std::abs(s.ham.spectrum.xi[i] - s.ham.spectrum.xi[j]));
    }
  }
  const double bound = std::pow(dHnorm / gap, 3);
  for (int parity : {0, 1}) {
    std::vector<int> idx;
    for (int i = 0; i < p; ++i)
      if (s.basis.state(i).twiceS() % 2 == parity) idx.push_back(i);
    Eigen::MatrixXcd block(idx.size(), idx.size());
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = 0; b < idx.size(); ++b) block(a, b) = H(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
    // Compare the low-lying levels, away from the truncation edge.
    for (int k = 0; k < s.eig.size(); ++k) {
      if (s.eig.labels[k].twiceS() % 2 != parity || s.eig.labels[k].twiceS() > 3) continue;
      Eigen::VectorXcd v(idx.size());
      for (size_t a = 0; a < idx.size(); ++a) v(a) = s.eig.states(idx[a], k);
      Eigen::Index best = 0;
      (es.eigenvectors().adjoint() * v).cwiseAbs().maxCoeff(&best);
      const double exact = es.eigenvalues()(best);
      EXPECT_LE(std::abs(s.eig.energies[k] - exact) / std::abs(exact), bound)
          << to_string(s.eig.labels[k]);
    }
  }
}

TEST(Perturbation, HeatMapZeroPattern) {
  const Solved s = solve(5.0, 2);
  const HeatMap map = heatmap(s.eig, s.ham.dH);
  ASSERT_EQ(map.magnitude.rows(), 28);
  EXPECT_DOUBLE_EQ(map.magnitude.maxCoeff(), 1.0);
  for (int r = 0; r < 28; ++r) {
    for (int c = 0; c < 28; ++c) {
      const int d = map.labels[r].twiceS() - map.labels[c].twiceS();
      if (d % 2 != 0) EXPECT_EQ(map.magnitude(r, c), 0.0);
    }
  }
  // Rows are grouped by S.
  for (int r = 1; r < 28; ++r) EXPECT_LE(map.labels[r - 1].twiceS(), map.labels[r].twiceS());
  // Second order spreads weight into the integer-Delta-S side bands.
  double side = 0.0;
  for (int r = 0; r < 28; ++r)
    for (int c = 0; c < 28; ++c)
      if (std::abs(map.labels[r].twiceS() - map.labels[c].twiceS()) == 2)
        side = std::max(side, map.magnitude(r, c));
  EXPECT_GT(side, 0.0);
}

TEST(Perturbation, HeatMapExport) {
  const Solved s = solve(5.0, 2, 1.0);
  std::ostringstream os;
  write_heatmap_tsv(os, heatmap(s.eig, s.ham.dH));
  const std::string out = os.str();
  EXPECT_NE(out.find("#block S=0 rows=0-0"), std::string::npos) << out.substr(0, 200);
  EXPECT_NE(out.find("#block S=1/2"), std::string::npos);
  EXPECT_NE(out.find("row\tcol\tS_row\tS_col\tmagnitude"), std::string::npos);
}

TEST(Perturbation, AvoidedCrossingOrdering) {
  const Solved s0 = solve(5.0, 0);
  const Solved s2 = solve(5.0, 2);
  auto energy_of = [](const EigenSystem& e, AngularIndex label) {
    for (int k = 0; k < e.size(); ++k)
      if (e.labels[k] == label) return e.energies[k];
    return std::nan("");
  };
  const AngularIndex a = AngularIndex::from_spin(1.0, -1.0);
  const AngularIndex b = AngularIndex::from_spin(0.5, 0.5);
  EXPECT_GE(energy_of(s0.eig, a), energy_of(s0.eig, b));
  EXPECT_LT(energy_of(s2.eig, a), energy_of(s2.eig, b));
}

TEST(Perturbation, LevelsVersusCoupling) {
  const std::vector<double> grid = {0.0, 0.01, 0.1};
  const auto rows = levels_vs_g(reference_device(), grid, 2);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_EQ(row.energies.size(), 4u);
  std::ostringstream os;
  write_levels_tsv(os, rows);
  EXPECT_EQ(os.str().rfind("g_GHz\teps1_GHz", 0), 0u);
}

TEST(Perturbation, CoupledDegeneracyIsReported) {
  // (nUp, nDown) = (1, 1) and (0, 4) are coupled by the quartic term and
  // degenerate when omega_up = 3 omega_down; tune C by bisection to get there.
  DeviceParams p = reference_device();
  double lo = 0.3, hi = 0.6;
  for (int i = 0; i < 200; ++i) {
    p.C = 0.5 * (lo + hi);
    const CanonicalModes m = derive_modes(p);
    (m.omegaUp > 3.0 * m.omegaDown ? lo : hi) = p.C;
  }
  const CanonicalModes m = derive_modes(p);
  ASSERT_LT(std::abs(m.omegaUp - 3.0 * m.omegaDown), 1e-9);
  const AngularBasis b = build_basis(3.0);
  const HamiltonianSet h = build_hamiltonians(p, m, b);
  try {
    perturb(h.spectrum, h.dH, b, 2);
    FAIL() << "expected a degeneracy error";
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegeneracy);
  }
  // Zero order never divides by a gap.
  EXPECT_NO_THROW(perturb(h.spectrum, h.dH, b, 0));
}

TEST(Perturbation, InvalidOrder) {
  const Solved s = solve(5.0, 0);
  EXPECT_THROW(perturb(s.ham.spectrum, s.ham.dH, s.basis, 3), SimError);
}
