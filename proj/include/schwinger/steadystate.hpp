#pragma once

#include <iosfwd>
#include <vector>

#include "schwinger/lindblad.hpp"

namespace schwinger {

/// Inputs of the closed-form two-state asymptotes. Lambda is over E = {1, 2}.
struct SteadyStateInputs {
  LambdaTensor lambda;
  Complex theta12;
  Complex theta21;
  double eps21 = 0.0;  // rad/ns
  double Vo = 0.0;     // nV
};

SteadyStateInputs steady_inputs(const TruncatedModel& model, double Vo);

struct SteadyStatePoint {
  double Omega = 0.0;
  Complex rho12Envelope;  // rho_12(t) -> envelope * exp(i Omega t)
  double rho22Inf = 0.0;
  double sZInf = 0.0;
  double imagResidue = 0.0;  // |Im| of the as-printed occupation expression
};

struct SteadyStateResult {
  double epsTilde21 = 0.0;
  double delta21 = 0.0;
  double tau = 0.0;  // ns
  /// Drive-free occupation of the upper state.
  double rho22Free = 0.0;
  std::vector<SteadyStatePoint> points;
};

/// Shifted resonance, half width and coherence time only (no frequency grid).
SteadyStateResult steady_lineshape_parameters(const SteadyStateInputs& in);

/// Evaluates the steady-state asymptotes at every Omega in the grid.
/// Throws SimError(kDivisionHazard) when the two diagonal relaxation
/// coefficients coincide.
SteadyStateResult steady_state(const SteadyStateInputs& in, const std::vector<double>& omegaGrid);

SteadyStatePoint steady_point(const SteadyStateInputs& in, const SteadyStateResult& shape,
                              double Omega);

struct ConsistencyReport {
  double rho22Residual = 0.0;      // mean |rho22(t) - rho22_inf| over t > tMin
  double rho22RelResidual = 0.0;   // rho22Residual / rho22_inf
  double envelopeMismatch = 0.0;   // mean ||rho12(t)| - |envelope||
  double rho22MaxRelDeviation = 0.0;  // max |rho22(t) - rho22_inf| / rho22_inf over t > tMin
  long samples = 0;
};

ConsistencyReport consistency_check(const DensityTrajectory& traj, const SteadyStatePoint& point,
                                    double tMin);

void write_steady_tsv(std::ostream& os, const SteadyStateResult& result);

}  // namespace schwinger
