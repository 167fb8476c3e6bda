#include "schwinger/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "schwinger/errors.hpp"
#include "schwinger/tsv.hpp"

namespace schwinger {

namespace {

double degeneracy_tolerance(const LinearSpectrum& spectrum, const AngularBasis& basis) {
  const int vacuum = basis.index_of(0, 0);
  const int oneDown = basis.index_of(0, 1);
  if (oneDown >= 0 && oneDown < basis.physicalSize()) {
    return 1e-6 * std::abs(spectrum.xi[oneDown] - spectrum.xi[vacuum]);
  }
  return 1e-6 * std::abs(spectrum.xi[vacuum]);
}

}  // namespace

EigenSystem perturb(const LinearSpectrum& spectrum, const OperatorMatrix& dH,
                    const AngularBasis& basis, int order) {
  if (order < 0 || order > 2) {
    throw SimError(ErrorCode::kInvalidArgument, "perturbation order must be 0, 1 or 2");
  }
  const int p = basis.physicalSize();
  if (dH.rows() != p || dH.cols() != p || static_cast<int>(spectrum.xi.size()) != p) {
    throw SimError(ErrorCode::kInvalidArgument, "operator does not match the physical block");
  }
  const std::vector<double>& xi = spectrum.xi;
  const double tol = degeneracy_tolerance(spectrum, basis);

  // Reciprocal gaps for coupled pairs; zero where the pair is not coupled.
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(p, p);
  if (order >= 1) {
    for (int k = 0; k < p; ++k) {
      for (int j = 0; j < p; ++j) {
        if (j == k || dH(j, k) == Complex(0.0)) continue;
        const double gap = xi[k] - xi[j];
        if (std::abs(gap) < tol) {
          std::ostringstream os;
          os << "states " << to_string(basis.state(j)) << " and " << to_string(basis.state(k))
             << " are coupled but degenerate to within " << std::abs(gap) << " rad/ns";
          throw SimError(ErrorCode::kDegeneracy, os.str());
        }
        inv(j, k) = 1.0 / gap;
      }
    }
  }

  std::vector<double> energy(p);
  Eigen::MatrixXcd vecs = Eigen::MatrixXcd::Identity(p, p);
  for (int k = 0; k < p; ++k) {
    double e = xi[k];
    if (order == 0) {
      energy[k] = e;
      continue;
    }
    const double dkk = dH(k, k).real();
    e += dkk;
    Eigen::VectorXcd first = Eigen::VectorXcd::Zero(p);
    for (int j = 0; j < p; ++j) {
      if (inv(j, k) != 0.0) first(j) = dH(j, k) * inv(j, k);
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Unit(p, k) + first;
    if (order == 2) {
      for (int j = 0; j < p; ++j) {
        if (inv(j, k) != 0.0) e += std::norm(dH(j, k)) * inv(j, k);
      }
      Eigen::VectorXcd second = Eigen::VectorXcd::Zero(p);
      for (int j = 0; j < p; ++j) {
        if (j == k) continue;
        Complex acc = 0.0;
        for (int l = 0; l < p; ++l) {
          if (inv(l, k) == 0.0 || dH(j, l) == Complex(0.0)) continue;
          acc += dH(j, l) * first(l);
        }
        acc -= dkk * first(j);
        // (E_k - E_j)^{-1} applied to the second-order numerator; j may be
        // uncoupled to k directly but reachable through l.
        const double gap = xi[k] - xi[j];
        if (acc != Complex(0.0)) {
          if (std::abs(gap) < tol) {
            throw SimError(ErrorCode::kDegeneracy,
                           "second-order path into a degenerate state " +
                               to_string(basis.state(j)));
          }
          second(j) = acc / gap;
        }
      }
      v += second;
      v(k) -= 0.5 * first.squaredNorm();
    }
    energy[k] = e;
    v.normalize();
    vecs.col(k) = v;
  }

  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return energy[a] < energy[b]; });

  EigenSystem out;
  out.order = order;
  out.states.resize(p, p);
  for (int k = 0; k < p; ++k) {
    const int src = perm[k];
    Eigen::VectorXcd v = vecs.col(src);
    int dominant = 0;
    double best = -1.0;
    for (int i = 0; i < p; ++i) {
      const double w = std::norm(v(i));
      if (w > best) {  // strict: ties keep the lower (S, mS)
        best = w;
        dominant = i;
      }
    }
    const Complex c = v(dominant);
    v *= std::conj(c) / std::abs(c);
    v(dominant) = std::abs(c);
    out.states.col(k) = v;
    out.energies.push_back(energy[src]);
    out.labels.push_back(basis.state(dominant));
    out.origins.push_back(src);
    out.zeroOrder.push_back(xi[src]);
  }
  return out;
}

HeatMap heatmap(const EigenSystem& eigsys, const OperatorMatrix& dH) {
  const int p = eigsys.size();
  std::vector<int> layout(p);
  std::iota(layout.begin(), layout.end(), 0);
  std::stable_sort(layout.begin(), layout.end(),
                   [&](int a, int b) { return eigsys.labels[a] < eigsys.labels[b]; });

  const Eigen::MatrixXcd full = eigsys.states.adjoint() * dH * eigsys.states;
  HeatMap map;
  map.magnitude.resize(p, p);
  for (int r = 0; r < p; ++r) {
    map.labels.push_back(eigsys.labels[layout[r]]);
    map.energyIndex.push_back(layout[r]);
    for (int c = 0; c < p; ++c) map.magnitude(r, c) = std::abs(full(layout[r], layout[c]));
  }
  map.maxMagnitude = map.magnitude.maxCoeff();
  if (map.maxMagnitude > 0.0) map.magnitude /= map.maxMagnitude;
  return map;
}

void write_heatmap_tsv(std::ostream& os, const HeatMap& map) {
  os << "# max_magnitude_GHz=" << tsv::num(map.maxMagnitude) << "\n";
  const int p = static_cast<int>(map.labels.size());
  int start = 0;
  while (start < p) {
    int end = start;
    while (end + 1 < p && map.labels[end + 1].twiceS() == map.labels[start].twiceS()) ++end;
    os << "#block S=" << half_integer_string(map.labels[start].twiceS()) << " rows=" << start
       << "-" << end << "\n";
    start = end + 1;
  }
  os << "row\tcol\tS_row\tS_col\tmagnitude\n";
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      os << r << '\t' << c << '\t' << half_integer_string(map.labels[r].twiceS()) << '\t'
         << half_integer_string(map.labels[c].twiceS()) << '\t' << tsv::num(map.magnitude(r, c))
         << '\n';
    }
  }
}

std::vector<LevelRow> levels_vs_g(const DeviceParams& params, const std::vector<double>& gGrid,
                                  int order, double sMax, int count) {
  const AngularBasis basis = build_basis(sMax);
  std::vector<LevelRow> rows;
  rows.reserve(gGrid.size());
  for (double g : gGrid) {
    DeviceParams p = params;
    p.g = g;
    const CanonicalModes modes = derive_modes(p);
    const HamiltonianSet ham = build_hamiltonians(p, modes, basis);
    const EigenSystem eig = perturb(ham.spectrum, ham.dH, basis, order);
    LevelRow row;
    row.g = g;
    const int n = std::min(count, eig.size());
    for (int k = 0; k < n; ++k) {
      row.energies.push_back(eig.energies[k]);
      row.labels.push_back(eig.labels[k]);
      row.zeroOrder.push_back(spin_frequency(modes, eig.labels[k]));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_levels_tsv(std::ostream& os, const std::vector<LevelRow>& rows) {
  const int n = rows.empty() ? 0 : static_cast<int>(rows.front().energies.size());
  os << "g_GHz";
  for (int k = 1; k <= n; ++k) os << "\teps" << k << "_GHz";
  for (int k = 1; k <= n; ++k) os << "\txi" << k << "_GHz";
  for (int k = 1; k <= n; ++k) os << "\tlabel" << k;
  os << "\n";
  for (const LevelRow& r : rows) {
    os << tsv::num(r.g);
    for (double e : r.energies) os << '\t' << tsv::num(e);
    for (double e : r.zeroOrder) os << '\t' << tsv::num(e);
    for (const AngularIndex& l : r.labels) os << '\t' << to_string(l);
    os << "\n";
  }
}

}  // namespace schwinger
