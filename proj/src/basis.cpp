#include "schwinger/basis.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "schwinger/errors.hpp"
#include "schwinger/tsv.hpp"

namespace schwinger {

namespace {

int twice_of(double value, const char* what) {
  const double twice = 2.0 * value;
  const double rounded = std::round(twice);
  if (std::abs(twice - rounded) > 1e-9 || rounded < 0) {
    throw SimError(ErrorCode::kInvalidArgument,
                   std::string(what) + " must be a non-negative multiple of 1/2");
  }
  return static_cast<int>(rounded);
}

}  // namespace

AngularIndex AngularIndex::from_spin(double S, double mS) {
  const int twoS = static_cast<int>(std::lround(2.0 * S));
  const int twoM = static_cast<int>(std::lround(2.0 * mS));
  if (std::abs(twoM) > twoS || (twoS + twoM) % 2 != 0) {
    throw SimError(ErrorCode::kInvalidArgument, "invalid (S, mS) pair");
  }
  return {(twoS + twoM) / 2, (twoS - twoM) / 2};
}

std::string half_integer_string(int twice) {
  if (twice % 2 == 0) return std::to_string(twice / 2);
  return std::to_string(twice) + "/2";
}

std::string to_string(const AngularIndex& idx) {
  return "|" + half_integer_string(idx.twiceS()) + "," + half_integer_string(idx.twiceM()) + ">";
}

AngularBasis::AngularBasis(int twiceSMax, int twiceBuffer)
    : twiceSMax_(twiceSMax), twiceSBuffer_(twiceSMax + twiceBuffer) {
  if (twiceSMax < 0 || twiceBuffer < 0) {
    throw SimError(ErrorCode::kInvalidArgument, "basis cutoffs must be non-negative");
  }
  for (int n = 0; n <= twiceSBuffer_; ++n) {
    for (int nUp = 0; nUp <= n; ++nUp) states_.push_back({nUp, n - nUp});
  }
  std::sort(states_.begin(), states_.end());
  for (int i = 0; i < size(); ++i) lookup_[{states_[i].nUp, states_[i].nDown}] = i;
  physicalSize_ = state_count(twiceSMax_);
}

int AngularBasis::index_of(const AngularIndex& idx) const {
  auto it = lookup_.find({idx.nUp, idx.nDown});
  return it == lookup_.end() ? -1 : it->second;
}

AngularBasis build_basis(double sMax, double extraBuffer) {
  return AngularBasis(twice_of(sMax, "sMax"), twice_of(extraBuffer, "buffer"));
}

OperatorMatrix ladder_matrix(const AngularBasis& basis, Ladder mode, LadderKind kind) {
  const int n = basis.size();
  OperatorMatrix a = OperatorMatrix::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const AngularIndex& s = basis.state(col);
    const int occupation = mode == Ladder::kUp ? s.nUp : s.nDown;
    if (occupation == 0) continue;
    AngularIndex lowered = s;
    (mode == Ladder::kUp ? lowered.nUp : lowered.nDown) -= 1;
    const int row = basis.index_of(lowered);
    a(row, col) = std::sqrt(static_cast<double>(occupation));
  }
  if (kind == LadderKind::kCreate) return a.adjoint();
  return a;
}

SpinMatrices spin_matrices(const AngularBasis& basis) {
  const OperatorMatrix aUp = ladder_matrix(basis, Ladder::kUp, LadderKind::kAnnihilate);
  const OperatorMatrix aDown = ladder_matrix(basis, Ladder::kDown, LadderKind::kAnnihilate);
  const OperatorMatrix aUpDag = aUp.adjoint();
  const OperatorMatrix aDownDag = aDown.adjoint();
  const Complex i(0.0, 1.0);

  SpinMatrices out;
  out.Splus = aUpDag * aDown;
  out.Sminus = aDownDag * aUp;
  out.Sx = 0.5 * (out.Splus + out.Sminus);
  out.Sy = (out.Splus - out.Sminus) / (2.0 * i);
  const OperatorMatrix nUp = aUpDag * aUp;
  const OperatorMatrix nDown = aDownDag * aDown;
  out.Sz = 0.5 * (nUp - nDown);
  out.Ntot = nUp + nDown;
  return out;
}

OperatorMatrix project_physical(const AngularBasis& basis, const OperatorMatrix& m) {
  const int p = basis.physicalSize();
  return m.topLeftCorner(p, p);
}

void write_operator_columns(std::ostream& os, const OperatorMatrix& m, double threshold) {
  os << "row\tcol\tre\tim\n";
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const Complex z = m(r, c);
      if (std::abs(z) <= threshold) continue;
      os << r << '\t' << c << '\t' << tsv::num(z.real()) << '\t' << tsv::num(z.imag()) << '\n';
    }
  }
}

}  // namespace schwinger
