#pragma once

#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/quadrature.hpp"

namespace g2lab {

// directions on S^2 with weights summing to 1 (an average, not an integral)
struct AngularRule {
  std::vector<Eigen::Vector3d> n;
  std::vector<double> w;
};

// +-e_a, exact for polynomials of degree <= 3 in n
const AngularRule& octahedron_rule();
// Gauss-Legendre in cos(theta) times trapezoid in phi
AngularRule product_rule(int nTheta, int nPhi);

// point of a 4D polar chart around `center`: center + rho (cos psi, sin psi n)
inline FourVector polar_point(const FourVector& center, double rho, double psi,
                              const Eigen::Vector3d& n) {
  const double s = std::sin(psi);
  return center + FourVector(rho * std::cos(psi), rho * s * n(0), rho * s * n(1), rho * s * n(2));
}

// d^4q/(2pi)^4 = loop_measure(rho, psi) drho dpsi dOmega/(4pi)
inline double loop_measure(double rho, double psi) {
  const double s = std::sin(psi);
  return 4.0 * kPi * rho * rho * rho * s * s / std::pow(2.0 * kPi, 4);
}

inline std::vector<double> psi_breaks() { return {0.0, 0.5 * kPi, kPi}; }

}  // namespace g2lab
