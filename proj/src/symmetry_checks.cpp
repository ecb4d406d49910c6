#include "g2lab/symmetry_checks.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "g2lab/gamma_algebra.hpp"
#include "g2lab/rg_flow.hpp"

namespace g2lab {

namespace {

Eigen::Matrix4d plane(int a, int b) {
  // -1 at (a, b), +1 at (b, a)
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(a, b) = -1.0;
  m(b, a) = 1.0;
  return m;
}

std::array<long, 16> key_of(const Eigen::Matrix4d& U) {
  std::array<long, 16> k;
  for (int i = 0; i < 16; ++i) k[i] = std::lround(U(i / 4, i % 4));
  return k;
}

Eigen::Vector3d half_pi(const std::array<int, 3>& a) {
  return Eigen::Vector3d(a[0], a[1], a[2]) * (kPi / 2.0);
}

}  // namespace

const Eigen::Matrix4d& rotation_generator_L(int i) {
  static const std::array<Eigen::Matrix4d, 3> L = {plane(2, 3), plane(3, 1), plane(1, 2)};
  if (i < 1 || i > 3) throw DomainError("rotation_generator_L: index 1..3");
  return L[i - 1];
}

const Eigen::Matrix4d& boost_generator_K(int i) {
  static const std::array<Eigen::Matrix4d, 3> K = {plane(0, 1), plane(2, 0), plane(0, 3)};
  if (i < 1 || i > 3) throw DomainError("boost_generator_K: index 1..3");
  return K[i - 1];
}

Eigen::Matrix4d vector_rep(const Eigen::Vector3d& theta, const Eigen::Vector3d& xi) {
  Eigen::Matrix4d X = Eigen::Matrix4d::Zero();
  for (int i = 1; i <= 3; ++i) X += theta(i - 1) * rotation_generator_L(i) + xi(i - 1) * boost_generator_K(i);
  return X.exp();
}

SpinorMatrix spinor_rep(const Eigen::Vector3d& theta, const Eigen::Vector3d& xi) {
  // K_2 enters with the opposite orientation in this basis
  const Eigen::Vector3d xt(xi(0), -xi(1), xi(2));
  auto block = [](const Eigen::Vector3d& a) {
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    for (int i = 1; i <= 3; ++i) s += a(i - 1) * pauli(i);
    return Eigen::Matrix2cd((cplx(0.0, -0.5) * s).exp());
  };
  SpinorMatrix S = SpinorMatrix::Zero();
  S.block<2, 2>(0, 0) = block(theta + xt);
  S.block<2, 2>(2, 2) = block(theta - xt);
  return S;
}

Eigen::Matrix4d vector_rep(const GroupElement& g) { return vector_rep(half_pi(g.theta), half_pi(g.xi)); }
SpinorMatrix spinor_rep(const GroupElement& g) { return spinor_rep(half_pi(g.theta), half_pi(g.xi)); }

double intertwiner_residual(const Eigen::Matrix4d& U, const SpinorMatrix& S) {
  const SpinorMatrix Si = S.inverse();
  double r = 0.0;
  for (int rho = 0; rho < 4; ++rho) {
    SpinorMatrix rhs = SpinorMatrix::Zero();
    for (int mu = 0; mu < 4; ++mu) rhs += U(rho, mu) * gamma(mu);
    r = std::max(r, (Si * gamma(rho) * S - rhs).norm());
  }
  return r;
}

double intertwiner_check(const GroupElement& g) { return intertwiner_residual(vector_rep(g), spinor_rep(g)); }
double intertwiner_check(const Eigen::Vector3d& theta, const Eigen::Vector3d& xi) {
  return intertwiner_residual(vector_rep(theta, xi), spinor_rep(theta, xi));
}

WitnessReport irreducibility_witness(const std::vector<Eigen::Matrix4d>& ops) {
  Eigen::MatrixXd cols(4, ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) cols.col(i) = ops[i].col(0);
  WitnessReport w;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(cols);
  lu.setThreshold(1e-10);
  w.rank = static_cast<int>(lu.rank());
  if (cols.rows() == cols.cols()) w.determinant = cols.determinant();
  return w;
}

WitnessReport irreducibility_witness() {
  const double h = kPi / 2.0;
  return irreducibility_witness({Eigen::Matrix4d::Identity(), (h * boost_generator_K(1)).exp(),
                                 (-h * boost_generator_K(2)).exp(), (h * boost_generator_K(3)).exp()});
}

std::vector<GroupMember> group_closure(std::size_t guard) {
  std::vector<GroupMember> gens;
  for (int i = 0; i < 3; ++i)
    for (int s : {1, -1}) {
      Eigen::Vector3d t = Eigen::Vector3d::Zero(), x = Eigen::Vector3d::Zero();
      t(i) = s * kPi / 2.0;
      gens.push_back({vector_rep(t, x), spinor_rep(t, x)});
      gens.push_back({vector_rep(x, t), spinor_rep(x, t)});
    }
  for (auto& g : gens) g.U = g.U.array().round().matrix();
  std::vector<GroupMember> out;
  std::map<std::array<long, 16>, std::size_t> seen;
  std::deque<GroupMember> queue{{Eigen::Matrix4d::Identity(), SpinorMatrix::Identity()}};
  seen[key_of(queue.front().U)] = 0;
  while (!queue.empty()) {
    GroupMember g = queue.front();
    queue.pop_front();
    out.push_back(g);
    for (const auto& s : gens) {
      GroupMember n{(g.U * s.U).array().round().matrix(), g.S * s.S};
      if (seen.emplace(key_of(n.U), seen.size()).second) {
        if (seen.size() > guard) throw ResourceGuardError("group closure exceeds the size guard");
        queue.push_back(n);
      }
    }
  }
  return out;
}

const std::vector<GroupMember>& discrete_group() {
  static const std::vector<GroupMember> g = group_closure();
  return g;
}

Eigen::Vector4d invariant_tensor_average(const Eigen::Vector4d& v) {
  const auto& G = discrete_group();
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  for (const auto& g : G) acc += g.U * v;
  return acc / static_cast<double>(G.size());
}

Eigen::Matrix4d invariant_tensor_average(const Eigen::Matrix4d& t) {
  const auto& G = discrete_group();
  Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
  for (const auto& g : G) acc += g.U * t * g.U.transpose();
  return acc / static_cast<double>(G.size());
}

double chiral_mass_protection_check(const PhysicalParams& params, const QuadratureSpec& quad) {
  validate(params);
  const RunningCouplings rc = free_couplings(params);
  double worst = 0.0;
  for (int h = params.hStar(); h <= params.N; ++h) {
    const BetaVector b = self_energy_betas(h, rc, params, quad);
    worst = std::max({worst, std::abs(b.Mplus), std::abs(b.Mminus)});
  }
  return worst;
}

}  // namespace g2lab
