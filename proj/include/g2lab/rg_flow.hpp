#pragma once

#include <string>
#include <utility>
#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/propagators.hpp"
#include "g2lab/quadrature.hpp"

namespace g2lab {

struct BetaVector {
  double Zplus = 0.0, Zminus = 0.0;
  double Jplus = 0.0, Jminus = 0.0;
  double Mplus = 0.0, Mminus = 0.0;
};

struct FlowSolveReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double fittedC = 0.0;          // max_h |Z_h - 1| / (lambda^2 Lambda^2/M^2 2^{h-N})
  double boundaryResidual = 0.0; // forward re-run against the renormalization conditions
  double betaSlope = 0.0;        // log2 slope of |beta^+_h| against h, reported only
  std::vector<double> stepSizes; // successive iterate distances
  std::vector<std::string> warnings;
};

// -lambda^2 int Upsilon_nu g^(h)(k+q) Upsilon^nu v(q), one fermion scale, couplings of scale h
SpinorMatrix one_loop_self_energy(int h, const FourVector& k, const RunningCouplings& rc,
                                  const PhysicalParams& params, const QuadratureSpec& quad,
                                  double* err = nullptr);

// mass and field-strength parts from Sigma(0) and a central difference in k_0; J parts left 0
BetaVector self_energy_betas(int h, const RunningCouplings& rc, const PhysicalParams& params,
                             const QuadratureSpec& quad);

// 1/2 trace of the chirality blocks of the mu = 0 triangle zero mode, pairs with min scale h
std::pair<double, double> vertex_zero_mode_coefficients(int h, const PhysicalParams& params,
                                                        const QuadratureSpec& quad);

BetaVector beta_at_scale(int h, const RunningCouplings& rc, const PhysicalParams& params,
                         const QuadratureSpec& quad);

// v_{h-1} = v_h + beta_h(v_h) from the bare values at N down to h* - 1
RunningCouplings forward_flow(const CouplingSet& bare, const PhysicalParams& params,
                              const QuadratureSpec& quad);

std::pair<RunningCouplings, FlowSolveReport> solve_bare_constants(const PhysicalParams& params,
                                                                  double tolerance, int maxIter,
                                                                  const QuadratureSpec& quad);

// the flow is trusted below this value of lambda^2 Lambda^2 / M^2
inline constexpr double kFlowSmallness = 0.1;

}  // namespace g2lab
