#include "g2lab/gfactor_pipeline.hpp"

#include <cmath>
#include <limits>

#include "g2lab/gamma_algebra.hpp"
#include "g2lab/triangle_vertex.hpp"

namespace g2lab {

double spatial_epsilon(int a, int b, int c, EpsilonConvention conv) {
  const double e = levi_civita3(a, b, c);
  return conv == EpsilonConvention::Basis ? -e : e;
}

ATraces a_traces(double z, const VertexValues& v, EpsilonConvention conv) {
  const SpinorMatrix onePlusG0 = identity4() + gamma(0);
  const SpinorMatrix g5P = gamma5() * onePlusG0;
  ATraces t{0.0, 0.0};
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int c = 1; c <= 3; ++c) {
        const double e = spatial_epsilon(a, b, c, conv);
        if (e == 0.0) continue;
        t.F += z * e * (g5P * v.derivative[3 * (a - 1) + (b - 1)] * gamma(c)).trace();
      }
  for (int a = 1; a <= 3; ++a) t.F += 2.0 * (gamma(a) * v.gamma[a]).trace();
  t.Q = 6.0 * (onePlusG0 * v.gamma[0]).trace();
  return t;
}

cplx a_of_z(double z, const VertexEvaluator& vertex, EpsilonConvention conv) {
  const ATraces t = a_traces(z, vertex(z), conv);
  if (std::abs(t.Q) < 1.0) throw NumericError("a_of_z: |Q(z)| < 1, coupling regime violated", std::abs(t.Q));
  return t.F / t.Q - 1.0;
}

VertexEvaluator free_vertex() { return axial_shifted_vertex(0.0); }

VertexEvaluator axial_shifted_vertex(cplx c) {
  return [c](double) {
    VertexValues v;
    for (int mu = 0; mu < 4; ++mu) v.gamma[mu] = gamma(mu) + c * gamma5() * gamma(mu);
    for (auto& d : v.derivative) d.setZero();
    return v;
  };
}

VertexEvaluator one_loop_vertex(const PhysicalParams& p, const QuadratureSpec& quad) {
  return [p, quad](double z) {
    const double l2 = p.lambda * p.lambda;
    const TriangleResult t = triangle_cutoff(time_axis(z), time_axis(z), p, quad);
    const auto D = triangle_derivative(z, p, quad);
    VertexValues v;
    for (int mu = 0; mu < 4; ++mu) v.gamma[mu] = gamma(mu) + l2 * t.value[mu];
    for (int i = 0; i < 9; ++i) v.derivative[i] = l2 * D[i];
    return v;
  };
}

cplx a2_from_triangle(double z, const PhysicalParams& p, const QuadratureSpec& quad,
                      EpsilonConvention conv) {
  VertexValues v;
  const TriangleResult t = triangle_cutoff(time_axis(z), time_axis(z), p, quad);
  v.gamma = t.value;
  v.derivative = triangle_derivative(z, p, quad);
  const ATraces tr = a_traces(z, v, conv);
  return p.lambda * p.lambda * (tr.F - tr.Q) / 24.0;
}

std::vector<double> maclaurin_terms(int K, const std::vector<cplx>& aDerivatives, double m) {
  if (K < 0 || static_cast<int>(aDerivatives.size()) != K + 1)
    throw DomainError("maclaurin_g2: need K+1 derivatives");
  std::vector<double> terms;
  cplx im(0.0, m), pw(1.0, 0.0);
  double fact = 1.0;
  for (int l = 0; l <= K; ++l) {
    if (l > 0) {
      pw *= im;
      fact *= l;
    }
    terms.push_back(std::real(pw / fact * aDerivatives[l]));
  }
  return terms;
}

double maclaurin_g2(int K, const std::vector<cplx>& aDerivatives, double m, double imagTolerance) {
  if (K < 0 || static_cast<int>(aDerivatives.size()) != K + 1)
    throw DomainError("maclaurin_g2: need K+1 derivatives");
  cplx sum = 0.0, im(0.0, m), pw(1.0, 0.0);
  double fact = 1.0, scale = 0.0;
  for (int l = 0; l <= K; ++l) {
    if (l > 0) {
      pw *= im;
      fact *= l;
    }
    const cplx t = pw / fact * aDerivatives[l];
    sum += t;
    scale += std::abs(t);
  }
  if (std::abs(sum.imag()) > imagTolerance * std::max(scale, 1e-300) && std::abs(sum.imag()) > 1e-300)
    throw NumericError("maclaurin_g2: imaginary residue too large", std::abs(sum.imag()));
  return sum.real();
}

double jackiw_weinberg(const PhysicalParams& p) {
  const double r = p.m / p.M;
  return r * r * p.lambda * p.lambda / (4.0 * kPi * kPi) * (1.0 - 5.0 * p.kappa * p.kappa) / 3.0;
}

GFactorReport compute_gfactor(const PhysicalParams& p, const QuadratureSpec& quad,
                              AmplitudeRoute route) {
  validate(p);
  GFactorReport rep;
  rep.params = p;
  rep.route = route;
  rep.derivatives = route == AmplitudeRoute::Cutoff ? a2_cutoff_derivatives(p, p.K, quad)
                                                    : a2_derivatives(p, p.K, quad);
  rep.termBreakdown = maclaurin_terms(p.K, rep.derivatives, p.m);
  rep.maclaurinValue = maclaurin_g2(p.K, rep.derivatives, p.m);
  rep.jwClosedForm = jackiw_weinberg(p);
  rep.relativeRemainder = rep.jwClosedForm != 0.0 ? rep.maclaurinValue / rep.jwClosedForm - 1.0
                                                  : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

RemainderScan theorem1_remainder_scan(const PhysicalParams& base,
                                      const std::vector<RemainderPoint>& grid,
                                      const QuadratureSpec& quad) {
  if (grid.empty()) throw DomainError("theorem1_remainder_scan: empty grid");
  RemainderScan scan;
  Eigen::MatrixXd A(grid.size(), 2);
  Eigen::VectorXd y(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const RemainderPoint& pt = grid[i];
    if (!(pt.mOverM < 0.1)) throw DomainError("theorem1_remainder_scan: needs M > 10 m");
    PhysicalParams p = base;
    p.m = pt.mOverM * p.M;
    p.lambda = pt.lambda;
    const double lg = std::log2(pt.LambdaOverM * p.M);
    if (std::abs(lg - std::round(lg)) > 1e-12)
      throw DomainError("theorem1_remainder_scan: Lambda must be a power of two");
    p.N = static_cast<int>(std::round(lg));
    const GFactorReport rep = compute_gfactor(p, quad, AmplitudeRoute::Cutoff);
    RemainderRow row{pt, rep.maclaurinValue, rep.jwClosedForm, rep.relativeRemainder};
    scan.rows.push_back(row);
    A(i, 0) = pt.mOverM * pt.mOverM;
    A(i, 1) = 1.0 / (pt.LambdaOverM * pt.LambdaOverM);
    y(i) = std::abs(row.remainder);
  }
  if (grid.size() >= 2) {
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(y);
    scan.C1 = c(0);
    scan.C2 = c(1);
  }
  return scan;
}

}  // namespace g2lab
