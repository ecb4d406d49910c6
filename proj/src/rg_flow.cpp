#include "g2lab/rg_flow.hpp"

#include <algorithm>
#include <cmath>

#include "g2lab/fit.hpp"
#include "g2lab/gamma_algebra.hpp"
#include "g2lab/loop_geometry.hpp"
#include "g2lab/triangle_vertex.hpp"

namespace g2lab {

namespace {

std::vector<double> scale_breaks(int h, int hStar) {
  if (h == hStar) return dyadic_breaks(std::ldexp(1.0, hStar - 4), std::ldexp(1.0, h + 1));
  return {std::ldexp(1.0, h - 1), std::ldexp(1.0, h), std::ldexp(1.0, h + 1)};
}

cplx block_trace(const SpinorMatrix& x, int row, int col) {
  return x.block<2, 2>(2 * row, 2 * col).trace();
}

double max_diff(const CouplingSet& a, const CouplingSet& b) {
  return std::max({std::abs(a.Zplus - b.Zplus), std::abs(a.Zminus - b.Zminus),
                   std::abs(a.ZJplus - b.ZJplus), std::abs(a.ZJminus - b.ZJminus),
                   std::abs(a.mPlus - b.mPlus), std::abs(a.mMinus - b.mMinus)});
}

}  // namespace

SpinorMatrix one_loop_self_energy(int h, const FourVector& k, const RunningCouplings& rc,
                                  const PhysicalParams& params, const QuadratureSpec& quad,
                                  double* err) {
  const CutoffFamily& fam = rc.family;
  if (h < fam.hStar || h > fam.N) throw DomainError("one_loop_self_energy: scale outside the ladder");
  if (params.lambda == 0.0) return SpinorMatrix::Zero();
  const CouplingSet& c = rc.at(h);
  const AngularRule& rule =
      k.tail<3>().squaredNorm() == 0.0 ? octahedron_rule() : product_rule(16, 32);
  const FourVector zero = FourVector::Zero();
  auto f = [&](double rho, double psi) {
    SpinorMatrix acc = SpinorMatrix::Zero();
    const double w = scale_weight(h, rho, fam);
    if (w == 0.0) return acc;
    const double meas = loop_measure(rho, psi);
    for (std::size_t i = 0; i < rule.n.size(); ++i) {
      const FourVector qp = polar_point(zero, rho, psi, rule.n[i]);
      const double vb = boson_propagator(qp - k, params);
      if (vb == 0.0) continue;
      acc += (rule.w[i] * w * vb * meas) *
             dressed_inverse(qp, c.Zplus, c.Zminus, c.mPlus, c.mMinus);
    }
    return acc;
  };
  auto r = integrate_2d(f, scale_breaks(h, fam.hStar), psi_breaks(), quad);
  if (err) *err = r.error;
  const SpinorMatrix& v = require_converged(r, "one_loop_self_energy");
  return -params.lambda * params.lambda * upsilon_sandwich(v, params.kappa);
}

BetaVector self_energy_betas(int h, const RunningCouplings& rc, const PhysicalParams& params,
                             const QuadratureSpec& quad) {
  BetaVector b;
  if (params.lambda == 0.0) return b;
  const SpinorMatrix s0 = one_loop_self_energy(h, FourVector::Zero(), rc, params, quad);
  b.Mplus = 0.5 * std::real(block_trace(s0, 0, 0));
  b.Mminus = 0.5 * std::real(block_trace(s0, 1, 1));
  const double d = std::ldexp(1.0, h) / 64.0;
  const SpinorMatrix ds = (one_loop_self_energy(h, time_axis(d), rc, params, quad) -
                           one_loop_self_energy(h, time_axis(-d), rc, params, quad)) /
                          (2.0 * d);
  const cplx I(0.0, 1.0);
  b.Zplus = std::real(block_trace(ds, 0, 1) / (2.0 * I));
  b.Zminus = std::real(block_trace(ds, 1, 0) / (2.0 * I));
  return b;
}

std::pair<double, double> vertex_zero_mode_coefficients(int h, const PhysicalParams& params,
                                                        const QuadratureSpec& quad) {
  const int hs = params.hStar(), N = params.N;
  const FourVector zero = FourVector::Zero();
  SpinorMatrix acc = SpinorMatrix::Zero();
  for (int h1 = h; h1 <= std::min(N, h + 2); ++h1)
    for (int h2 = h; h2 <= std::min(N, h + 2); ++h2) {
      if (std::min(h1, h2) != h || std::abs(h1 - h2) > 2) continue;
      if (h1 < hs || h2 < hs) continue;
      acc += triangle_pair(h1, h2, zero, zero, params, quad).value[0];
    }
  // gamma^0 has the Z^{J,+} coefficient in the upper-right block
  return {0.5 * std::real(block_trace(acc, 0, 1)), 0.5 * std::real(block_trace(acc, 1, 0))};
}

BetaVector beta_at_scale(int h, const RunningCouplings& rc, const PhysicalParams& params,
                         const QuadratureSpec& quad) {
  BetaVector b = self_energy_betas(h, rc, params, quad);
  if (h > rc.hStar()) {
    const auto [cp, cm] = vertex_zero_mode_coefficients(h, params, quad);
    const double l2 = params.lambda * params.lambda;
    b.Jplus = l2 * rc.at(h).ZJplus * cp;
    b.Jminus = l2 * rc.at(h).ZJminus * cm;
  }
  return b;
}

RunningCouplings forward_flow(const CouplingSet& bare, const PhysicalParams& params,
                              const QuadratureSpec& quad) {
  RunningCouplings rc = free_couplings(params);
  rc.at(params.N) = bare;
  for (int h = params.N; h >= params.hStar(); --h) {
    const BetaVector b = beta_at_scale(h, rc, params, quad);
    const CouplingSet& v = rc.at(h);
    CouplingSet n = v;
    n.Zplus += b.Zplus;
    n.Zminus += b.Zminus;
    n.ZJplus += b.Jplus;
    n.ZJminus += b.Jminus;
    n.mPlus += b.Mplus;
    n.mMinus += b.Mminus;
    rc.at(h - 1) = n;
  }
  return rc;
}

std::pair<RunningCouplings, FlowSolveReport> solve_bare_constants(const PhysicalParams& params,
                                                                  double tolerance, int maxIter,
                                                                  const QuadratureSpec& quad) {
  validate(params);
  FlowSolveReport rep;
  if (params.flowCoupling() > kFlowSmallness)
    rep.warnings.push_back("lambda^2 Lambda^2 / M^2 above the smallness threshold");
  const int hs = params.hStar(), N = params.N;
  RunningCouplings v = free_couplings(params);  // the target w
  // the triangle zero modes do not depend on v
  std::vector<std::pair<double, double>> cJ(N - hs + 1, {0.0, 0.0});
  if (params.lambda != 0.0)
    for (int h = hs + 1; h <= N; ++h) cJ[h - hs] = vertex_zero_mode_coefficients(h, params, quad);
  const double l2 = params.lambda * params.lambda;
  std::vector<BetaVector> betas(N - hs + 1);
  for (int it = 1; it <= maxIter; ++it) {
    for (int h = hs; h <= N; ++h) {
      BetaVector b = self_energy_betas(h, v, params, quad);
      if (h > hs) {
        b.Jplus = l2 * v.at(h).ZJplus * cJ[h - hs].first;
        b.Jminus = l2 * v.at(h).ZJminus * cJ[h - hs].second;
      }
      betas[h - hs] = b;
    }
    RunningCouplings next = free_couplings(params);
    CouplingSet acc = next.at(hs - 1);
    for (int h = hs; h <= N; ++h) {
      const BetaVector& b = betas[h - hs];
      acc.Zplus -= b.Zplus;
      acc.Zminus -= b.Zminus;
      acc.mPlus -= b.Mplus;
      acc.mMinus -= b.Mminus;
      acc.ZJplus -= b.Jplus;
      acc.ZJminus -= b.Jminus;
      next.at(h) = acc;
    }
    double step = 0.0;
    for (int h = hs - 1; h <= N; ++h) step = std::max(step, max_diff(next.at(h), v.at(h)));
    v = next;
    rep.stepSizes.push_back(step);
    rep.iterations = it;
    rep.residual = step;
    if (step <= tolerance) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged)
    throw NumericError("solve_bare_constants: no convergence (coupling too large?)", rep.residual);

  const RunningCouplings fwd = forward_flow(v.at(N), params, quad);
  const CouplingSet& low = fwd.at(hs - 1);
  rep.boundaryResidual = std::max({std::abs(low.Zplus - 1.0), std::abs(low.Zminus - 1.0),
                                   std::abs(low.mPlus - params.m), std::abs(low.mMinus - params.m),
                                   std::abs(fwd.at(hs).ZJplus - 1.0),
                                   std::abs(fwd.at(hs).ZJminus - 1.0)});
  const double g = params.flowCoupling();
  std::vector<double> y, env, xs, bs;
  for (int h = hs; h <= N; ++h) {
    const CouplingSet& c = v.at(h);
    const double e = g * std::ldexp(1.0, h - N);
    for (double z : {c.Zplus, c.Zminus}) {
      y.push_back(z - 1.0);
      env.push_back(e);
    }
    const double b = std::abs(betas[h - hs].Zplus);
    if (b > 0.0) {
      xs.push_back(std::ldexp(1.0, h));
      bs.push_back(b);
    }
  }
  if (g > 0.0) rep.fittedC = fitted_envelope_constant(y, env);
  if (xs.size() >= 2) rep.betaSlope = loglog_slope(xs, bs);
  return {v, rep};
}

}  // namespace g2lab
