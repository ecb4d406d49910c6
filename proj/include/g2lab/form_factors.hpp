#pragma once

#include <array>
#include <functional>

#include "g2lab/core.hpp"

namespace g2lab {

// Minkowski vectors carry upper indices, eta = diag(-1, 1, 1, 1)
inline double minkowski_square(const FourVector& p) {
  return -p(0) * p(0) + p.tail<3>().squaredNorm();
}
// |p| = sqrt(-p^2); negative p^2 required
double minkowski_norm(const FourVector& p);

struct FormFactors {
  cplx F = 1.0, F5 = 0.0, G = 0.0, G5 = 0.0, H = 0.0, H5 = 0.0;
};

struct OnShellSpinor {
  Spinor components = Spinor::Zero();
  double xi = 0.5;
  FourVector momentum = FourVector::Zero();
};

// p^0 < 0 branch, p^2 = -m^2
OnShellSpinor build_spinor(const FourVector& p, double xi);
Eigen::Matrix<cplx, 1, 4> spinor_bar(const OnShellSpinor& u);

// -i pslash + |p|
SpinorMatrix projector(const FourVector& p);
SpinorMatrix dirac_operator(const FourVector& p);  // i p_mu gamma^mu_mink + |p|

// on-shell momentum with the given mass and spatial part, p^0 < 0
FourVector on_shell(double m, const Eigen::Vector3d& spatial);

using VertexMatrices = std::array<SpinorMatrix, 4>;
using MinkowskiVertex = std::function<VertexMatrices(const FourVector& pPrime, const FourVector& p)>;

VertexMatrices build_vertex_from_form_factors(const FormFactors& ff, const FourVector& pPrime,
                                              const FourVector& p);
// form factors held fixed while the momenta vary
MinkowskiVertex synthetic_vertex(const FormFactors& ff);

// derivativeStep <= 0 picks |p|/64
cplx extract_F(const MinkowskiVertex& vertex, const FourVector& p, double derivativeStep = 0.0);
cplx extract_F_plus_G(const MinkowskiVertex& vertex, const FourVector& p);

cplx g_from_form_factors(const FormFactors& ff);

}  // namespace g2lab
