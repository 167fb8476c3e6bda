#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "schwinger/device.hpp"

namespace schwinger {

using Complex = std::complex<double>;

/// Dense complex matrix in the AngularBasis ordering.
using OperatorMatrix = Eigen::MatrixXcd;

/// |S, mS> labelled by its Fock occupations: S = (nUp + nDown)/2, mS = (nUp - nDown)/2.
struct AngularIndex {
  int nUp = 0;
  int nDown = 0;

  int twiceS() const { return nUp + nDown; }
  int twiceM() const { return nUp - nDown; }
  double S() const { return 0.5 * twiceS(); }
  double mS() const { return 0.5 * twiceM(); }

  static AngularIndex from_spin(double S, double mS);

  friend bool operator==(const AngularIndex&, const AngularIndex&) = default;
  /// Basis ordering: S ascending, then mS ascending.
  friend bool operator<(const AngularIndex& a, const AngularIndex& b) {
    if (a.twiceS() != b.twiceS()) return a.twiceS() < b.twiceS();
    return a.twiceM() < b.twiceM();
  }
};

/// Pretty label "|1/2,-1/2>".
std::string to_string(const AngularIndex& idx);
/// Half-integer formatting: 1 -> "1/2", 2 -> "1", -3 -> "-3/2".
std::string half_integer_string(int twice);

/// All |S,mS> with S up to a buffer cutoff. The first physicalSize() states are
/// the physical block (S <= sMax); the rest exist so that quartic products are
/// exact on the physical block.
class AngularBasis {
 public:
  AngularBasis(int twiceSMax, int twiceBuffer);

  int twiceSMax() const { return twiceSMax_; }
  int twiceSBuffer() const { return twiceSBuffer_; }
  double sMax() const { return 0.5 * twiceSMax_; }

  int size() const { return static_cast<int>(states_.size()); }
  int physicalSize() const { return physicalSize_; }

  const AngularIndex& state(int i) const { return states_.at(i); }
  const std::vector<AngularIndex>& states() const { return states_; }

  /// Index of a state, or -1 if outside the buffered basis.
  int index_of(const AngularIndex& idx) const;
  int index_of(int nUp, int nDown) const { return index_of(AngularIndex{nUp, nDown}); }

 private:
  int twiceSMax_;
  int twiceSBuffer_;
  int physicalSize_;
  std::vector<AngularIndex> states_;
  std::map<std::pair<int, int>, int> lookup_;
};

/// Number of states with S <= twiceS/2.
constexpr int state_count(int twiceS) { return (twiceS + 1) * (twiceS + 2) / 2; }

/// Basis with physical cutoff sMax and buffer sMax + 2 (or sMax + extra).
AngularBasis build_basis(double sMax, double extraBuffer = 2.0);

enum class LadderKind { kAnnihilate, kCreate };

/// a_sigma or a_sigma^dagger over the buffered basis.
OperatorMatrix ladder_matrix(const AngularBasis& basis, Ladder mode, LadderKind kind);

struct SpinMatrices {
  OperatorMatrix Sx, Sy, Sz, Splus, Sminus, Ntot;
};

/// Schwinger spin components built from ladder products over the buffered basis.
SpinMatrices spin_matrices(const AngularBasis& basis);

/// Top-left physical block of a buffered-basis operator.
OperatorMatrix project_physical(const AngularBasis& basis, const OperatorMatrix& m);

/// Nonzero entries as "row col re im" lines.
void write_operator_columns(std::ostream& os, const OperatorMatrix& m, double threshold = 0.0);

}  // namespace schwinger
