#include "schwinger/steadystate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "schwinger/errors.hpp"
#include "schwinger/tsv.hpp"
#include "schwinger/units.hpp"

namespace schwinger {

namespace {

// Lambda^{(l,l')}_{k,k'} with 1-based state labels.
Complex lam(const LambdaTensor& t, int l, int lp, int k, int kp) {
  return t.at(l - 1, lp - 1, k - 1, kp - 1);
}

void require_two_states(const LambdaTensor& t) {
  if (t.size() != 2) {
    throw SimError(ErrorCode::kInvalidArgument, "steady-state formulas need exactly two states");
  }
}

}  // namespace

SteadyStateInputs steady_inputs(const TruncatedModel& model, double Vo) {
  if (model.size() != 2) {
    throw SimError(ErrorCode::kInvalidArgument, "steady-state formulas need exactly two states");
  }
  SteadyStateInputs in;
  in.lambda = model.lambda;
  in.theta12 = model.theta(0, 1);
  in.theta21 = model.theta(1, 0);
  in.eps21 = model.energies[1] - model.energies[0];
  in.Vo = Vo;
  return in;
}

SteadyStateResult steady_lineshape_parameters(const SteadyStateInputs& in) {
  require_two_states(in.lambda);
  const Complex L22_11 = lam(in.lambda, 2, 2, 1, 1);
  const Complex L11_11 = lam(in.lambda, 1, 1, 1, 1);
  const Complex L12_12 = lam(in.lambda, 1, 2, 1, 2);
  const Complex L21_12 = lam(in.lambda, 2, 1, 1, 2);
  const Complex diff = L22_11 - L11_11;
  if (std::abs(diff) <= 1e-15 * (std::abs(L22_11) + std::abs(L11_11)) || std::abs(diff) == 0.0) {
    throw SimError(ErrorCode::kDivisionHazard,
                   "Lambda^(2,2)_(1,1) equals Lambda^(1,1)_(1,1); the steady state is undefined");
  }
  if (std::abs(L12_12) == 0.0) {
    throw SimError(ErrorCode::kDivisionHazard, "Lambda^(1,2)_(1,2) vanishes; no coherence time");
  }
  const double th2 = std::norm(in.theta12);
  const double V2 = in.Vo * in.Vo;

  SteadyStateResult out;
  const Complex shift = (2.0 * th2 * L12_12 +
                         (in.theta12 * in.theta12 + in.theta21 * in.theta21) * L21_12) /
                        (4.0 * in.eps21 * diff) * V2;
  out.epsTilde21 = in.eps21 - shift.real();
  out.tau = 1.0 / std::abs(L12_12);
  out.delta21 = (1.0 / out.tau) * std::sqrt(1.0 + 0.5 * th2 * V2 * out.tau * out.tau);
  out.rho22Free = (-L11_11 / diff).real();
  return out;
}

SteadyStatePoint steady_point(const SteadyStateInputs& in, const SteadyStateResult& shape,
                              double Omega) {
  const Complex L22_11 = lam(in.lambda, 2, 2, 1, 1);
  const Complex L11_11 = lam(in.lambda, 1, 1, 1, 1);
  const Complex L12_12 = lam(in.lambda, 1, 2, 1, 2);
  const Complex diff = L22_11 - L11_11;
  const Complex ratio = (L22_11 + L11_11) / diff;
  const double detune = Omega - shape.epsTilde21;
  const double denom = detune * detune + shape.delta21 * shape.delta21;

  SteadyStatePoint p;
  p.Omega = Omega;
  p.rho12Envelope = 0.5 * ratio * (in.theta12 * L12_12 * in.Vo / denom);
  const Complex rho22 =
      (-1.0 / diff) * (L11_11 + 0.5 * ratio * (std::norm(in.theta12) * L12_12 * in.Vo * in.Vo / denom));
  p.rho22Inf = rho22.real();
  p.imagResidue = std::abs(rho22.imag());
  const Complex sz =
      (1.0 / (2.0 * diff)) *
      (L11_11 + 0.5 * ratio * (std::norm(in.theta12) * L12_12 * in.Vo * in.Vo / denom));
  p.sZInf = sz.real();
  return p;
}

SteadyStateResult steady_state(const SteadyStateInputs& in, const std::vector<double>& omegaGrid) {
  SteadyStateResult out = steady_lineshape_parameters(in);
  out.points.reserve(omegaGrid.size());
  for (double w : omegaGrid) out.points.push_back(steady_point(in, out, w));
  return out;
}

ConsistencyReport consistency_check(const DensityTrajectory& traj, const SteadyStatePoint& point,
                                    double tMin) {
  ConsistencyReport rep;
  const double envelope = std::abs(point.rho12Envelope);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] <= tMin) continue;
    const Eigen::MatrixXcd& rho = traj.rho[i];
    const double dev = std::abs(rho(1, 1).real() - point.rho22Inf);
    rep.rho22Residual += dev;
    rep.rho22MaxRelDeviation = std::max(rep.rho22MaxRelDeviation, dev);
    rep.envelopeMismatch += std::abs(std::abs(rho(0, 1)) - envelope);
    ++rep.samples;
  }
  if (rep.samples > 0) {
    rep.rho22Residual /= static_cast<double>(rep.samples);
    rep.envelopeMismatch /= static_cast<double>(rep.samples);
  }
  if (point.rho22Inf != 0.0) {
    rep.rho22RelResidual = rep.rho22Residual / std::abs(point.rho22Inf);
    rep.rho22MaxRelDeviation /= std::abs(point.rho22Inf);
  } else {
    rep.rho22RelResidual = rep.rho22Residual;
  }
  return rep;
}

void write_steady_tsv(std::ostream& os, const SteadyStateResult& result) {
  os << "# eps_tilde21=" << tsv::num(result.epsTilde21) << "\n";
  os << "# delta21=" << tsv::num(result.delta21) << "\n";
  os << "# tau_us=" << tsv::num(result.tau / units::kMicrosecond) << "\n";
  os << "Omega_GHz\trho22_inf\tSz_inf\n";
  for (const SteadyStatePoint& p : result.points) {
    os << tsv::num(p.Omega) << '\t' << tsv::num(p.rho22Inf) << '\t' << tsv::num(p.sZInf) << '\n';
  }
}

}  // namespace schwinger
