#pragma once

#include <array>
#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/jet.hpp"
#include "g2lab/propagators.hpp"
#include "g2lab/quadrature.hpp"

namespace g2lab {

inline constexpr int kMaxJetOrder = 8;

template <typename S>
S t_poly(const S& z, const S& q0, const S& spatialSq, const PhysicalParams& p) {
  const double k2 = p.kappa * p.kappa;
  const cplx im(0.0, p.m);
  return S(k2 + 1.0) * (S(2.0) * z * z - S(3.0) * z * q0 + q0 * q0 - spatialSq / S(3.0)) +
         S(2.0 * (k2 - 1.0)) * S(im) * (z - q0);
}

cplx t_poly(cplx z, const FourVector& q, const PhysicalParams& p);

template <typename S>
S delta_sq(double x, const S& z, const PhysicalParams& p) {
  return S((1.0 - x) * p.M * p.M) + z * z * S(x * (1.0 - x)) + S(p.m * p.m * x);
}

// closed-form x-integrand of A_2(z), including lambda^2/(4 pi^2)
template <typename S>
S a2_integrand(double x, const S& z, const PhysicalParams& p) {
  const double k2 = p.kappa * p.kappa;
  const S num = z * z * S((k2 + 1.0) * x * (x * x - 3.0 * x + 2.0)) +
                S(cplx(0.0, 2.0 * p.m * (k2 - 1.0) * x * (1.0 - x))) * z;
  return S(p.lambda * p.lambda / (4.0 * kPi * kPi)) * num / delta_sq(x, z, p);
}

struct FeynmanCheck {
  cplx lhs, rhs;
  double diff;
};
FeynmanCheck feynman_param_identity_check(cplx a, cplx b, const QuadratureSpec& quad);

cplx a2_of_z(cplx z, const PhysicalParams& p, const QuadratureSpec& quad);
// A_2^(l)(0), l = 0..K, by Taylor jets under the x-integral
std::vector<cplx> a2_derivatives(const PhysicalParams& p, int K, const QuadratureSpec& quad);

// finite-cutoff A_2(z; Lambda) from the T_z integral (z real)
cplx a2_cutoff(double z, const PhysicalParams& p, const QuadratureSpec& quad, double* err = nullptr);
std::vector<cplx> a2_cutoff_derivatives(const PhysicalParams& p, int K, const QuadratureSpec& quad);

struct TriangleResult {
  std::array<SpinorMatrix, 4> value;
  double errorEstimate = 0.0;
  int hMin = 0, hMax = 0;
  int pairsSummed = 0;
};

// lambda-independent triangle with fermion lines on scales (h1, h2), no R
TriangleResult triangle_pair(int h1, int h2, const FourVector& pPrime, const FourVector& p,
                             const PhysicalParams& params, const QuadratureSpec& quad);
// the same integrand with chi_N on both fermion lines
TriangleResult triangle_full(const FourVector& pPrime, const FourVector& p,
                             const PhysicalParams& params, const QuadratureSpec& quad);
// sum of the high-high pairs at p' = p = 0
TriangleResult triangle_high_zero_mode(const PhysicalParams& params, const QuadratureSpec& quad);
// multiscale sum: pairs touching h* plus R-subtracted high pairs
TriangleResult triangle_cutoff(const FourVector& pPrime, const FourVector& p,
                               const PhysicalParams& params, const QuadratureSpec& quad);

// D^{ab} = (d_{p'} - d_p)^a Gamma^b at p' = p = (z,0,0,0), index 3(a-1)+(b-1)
std::array<SpinorMatrix, 9> triangle_derivative(double z, const PhysicalParams& params,
                                                const QuadratureSpec& quad);

struct ScanRow {
  int N = 0;
  double Lambda = 0.0;
  cplx value;
  double deviation = 0.0;            // from the richest ladder point
  double deviationClosedForm = 0.0;  // from a2_of_z
  double errorEstimate = 0.0;
};

struct CutoffScan {
  double z = 0.0;
  cplx closedForm;
  std::vector<ScanRow> rows;
  double slope = 0.0;
  double slopeClosedForm = 0.0;
};

CutoffScan cutoff_removal_scan(const PhysicalParams& p, const std::vector<int>& ladder,
                               const QuadratureSpec& quad, double z);

enum class CancellationVariant { Centered, Shifted, NoCounterterm };

struct CancellationResult {
  double value = 0.0;
  double scale = 0.0;  // integral of the absolute integrand
  double errorEstimate = 0.0;
};

CancellationResult rotational_cancellation(const PhysicalParams& p, double x, double z,
                                           const QuadratureSpec& quad, CancellationVariant v);
double rotational_cancellation_check(const PhysicalParams& p, double x, double z,
                                     const QuadratureSpec& quad);

struct BubbleReport {
  Eigen::Matrix4cd D;
  double offDiagonal = 0.0;  // relative to the largest diagonal entry
  double anisotropy = 0.0;
  double derivative = 0.0;   // max_alpha |dD/dk_alpha| * 2^h / max|D_diag|
  double errorEstimate = 0.0;
  double residual() const { return offDiagonal + anisotropy; }
};

Eigen::Matrix4cd bubble_matrix(int h1, int h2, const FourVector& k, const PhysicalParams& p,
                               const QuadratureSpec& quad, double* err = nullptr);
BubbleReport bubble_contribution_check(const PhysicalParams& p, const QuadratureSpec& quad,
                                       int h1, int h2);

}  // namespace g2lab
