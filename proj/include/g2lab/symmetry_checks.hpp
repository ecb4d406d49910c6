#pragma once

#include <array>
#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/propagators.hpp"
#include "g2lab/quadrature.hpp"

namespace g2lab {

// angles theta_i = (pi/2) theta[i], xi_i = (pi/2) xi[i]
struct GroupElement {
  std::array<int, 3> theta{0, 0, 0};
  std::array<int, 3> xi{0, 0, 0};
};

const Eigen::Matrix4d& rotation_generator_L(int i);  // i = 1,2,3
const Eigen::Matrix4d& boost_generator_K(int i);

// exp(theta.L + xi.K) and the matching spinor matrix, any real angles
Eigen::Matrix4d vector_rep(const Eigen::Vector3d& theta, const Eigen::Vector3d& xi);
SpinorMatrix spinor_rep(const Eigen::Vector3d& theta, const Eigen::Vector3d& xi);
Eigen::Matrix4d vector_rep(const GroupElement& g);
SpinorMatrix spinor_rep(const GroupElement& g);

// max_rho || S^-1 gamma^rho S - U^rho_mu gamma^mu ||
double intertwiner_residual(const Eigen::Matrix4d& U, const SpinorMatrix& S);
double intertwiner_check(const GroupElement& g);
double intertwiner_check(const Eigen::Vector3d& theta, const Eigen::Vector3d& xi);

struct WitnessReport {
  int rank = 0;
  double determinant = 0.0;
};
// images of e_0 under the given matrices
WitnessReport irreducibility_witness(const std::vector<Eigen::Matrix4d>& ops);
WitnessReport irreducibility_witness();

struct GroupMember {
  Eigen::Matrix4d U;
  SpinorMatrix S;  // one of the two lifts
};
inline constexpr std::size_t kGroupGuard = 10000;
// BFS closure of the six +-pi/2 generators
std::vector<GroupMember> group_closure(std::size_t guard = kGroupGuard);
const std::vector<GroupMember>& discrete_group();

Eigen::Vector4d invariant_tensor_average(const Eigen::Vector4d& v);
Eigen::Matrix4d invariant_tensor_average(const Eigen::Matrix4d& t);

// max_h |beta^{m,s}_h| over the ladder with the free couplings of params
double chiral_mass_protection_check(const PhysicalParams& params, const QuadratureSpec& quad);

}  // namespace g2lab
