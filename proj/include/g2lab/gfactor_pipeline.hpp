#pragma once

#include <array>
#include <functional>
#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/propagators.hpp"
#include "g2lab/quadrature.hpp"

namespace g2lab {

// Gamma^mu(p_z, p_z) and D^{ab} = (d_{p'} - d_p)^a Gamma^b at p_z, index 3(a-1)+(b-1)
struct VertexValues {
  std::array<SpinorMatrix, 4> gamma;
  std::array<SpinorMatrix, 9> derivative;
};
using VertexEvaluator = std::function<VertexValues(double z)>;

// Basis: eps~_{abc} = tr[g5 g0 ga gb gc]/4 (= -eps_{abc} here). Literal: eps_{123} = +1.
enum class EpsilonConvention { Basis, Literal };

double spatial_epsilon(int a, int b, int c, EpsilonConvention conv);

struct ATraces {
  cplx F, Q;
};
ATraces a_traces(double z, const VertexValues& v, EpsilonConvention conv = EpsilonConvention::Basis);
cplx a_of_z(double z, const VertexEvaluator& vertex,
            EpsilonConvention conv = EpsilonConvention::Basis);

VertexEvaluator free_vertex();
VertexEvaluator axial_shifted_vertex(cplx c);  // gamma^mu + c g5 gamma^mu
// gamma^mu + lambda^2 * (multiscale triangle), derivative from the same integrand
VertexEvaluator one_loop_vertex(const PhysicalParams& p, const QuadratureSpec& quad);

// order-lambda^2 part of A(z) read off the triangle, (F_1 - Q_1)/24
cplx a2_from_triangle(double z, const PhysicalParams& p, const QuadratureSpec& quad,
                      EpsilonConvention conv = EpsilonConvention::Basis);

// sum_{l<=K} (im)^l / l! A^(l)(0); throws if the result is not real
double maclaurin_g2(int K, const std::vector<cplx>& aDerivatives, double m,
                    double imagTolerance = 1e-8);
std::vector<double> maclaurin_terms(int K, const std::vector<cplx>& aDerivatives, double m);

double jackiw_weinberg(const PhysicalParams& p);

enum class AmplitudeRoute { Cutoff, ClosedForm };

struct GFactorReport {
  PhysicalParams params;
  AmplitudeRoute route = AmplitudeRoute::Cutoff;
  double maclaurinValue = 0.0;
  double jwClosedForm = 0.0;
  double relativeRemainder = 0.0;
  std::vector<double> termBreakdown;
  std::vector<cplx> derivatives;
};

GFactorReport compute_gfactor(const PhysicalParams& p, const QuadratureSpec& quad,
                              AmplitudeRoute route = AmplitudeRoute::Cutoff);

struct RemainderPoint {
  double mOverM = 0.0, LambdaOverM = 0.0, lambda = 0.0;
};

struct RemainderRow {
  RemainderPoint point;
  double maclaurinValue = 0.0, jwClosedForm = 0.0, remainder = 0.0;
};

struct RemainderScan {
  std::vector<RemainderRow> rows;
  // |R| ~ C1 m^2/M^2 + C2 M^2/Lambda^2 (no lambda^2 term at one loop)
  double C1 = 0.0, C2 = 0.0;
};

// M is taken from `base`; Lambda/M * M must be a power of two
RemainderScan theorem1_remainder_scan(const PhysicalParams& base,
                                      const std::vector<RemainderPoint>& grid,
                                      const QuadratureSpec& quad);

}  // namespace g2lab
