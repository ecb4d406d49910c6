#include "g2lab/form_factors.hpp"

#include <cmath>

#include "g2lab/gamma_algebra.hpp"

namespace g2lab {

namespace {

Eigen::Matrix2cd sqrt_hermitian(const Eigen::Matrix2cd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(a);
  const Eigen::Vector2d ev = es.eigenvalues();
  if (ev.minCoeff() < 0.0) throw DomainError("sqrt_hermitian: negative eigenvalue");
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double minkowski_norm(const FourVector& p) {
  const double s = minkowski_square(p);
  if (!(s < 0.0)) throw DomainError("minkowski_norm: momentum is not timelike");
  return std::sqrt(-s);
}

FourVector on_shell(double m, const Eigen::Vector3d& spatial) {
  if (!(m > 0.0)) throw DomainError("on_shell: mass must be positive");
  FourVector p;
  p(0) = -std::sqrt(m * m + spatial.squaredNorm());
  p.tail<3>() = spatial;
  return p;
}

SpinorMatrix projector(const FourVector& p) {
  return cplx(0.0, -1.0) * minkowski_slash(p) + minkowski_norm(p) * identity4();
}

SpinorMatrix dirac_operator(const FourVector& p) {
  return cplx(0.0, 1.0) * minkowski_slash(p) + minkowski_norm(p) * identity4();
}

OnShellSpinor build_spinor(const FourVector& p, double xi) {
  if (xi != 0.5 && xi != -0.5) throw DomainError("build_spinor: helicity must be +-1/2");
  if (!(p(0) < 0.0)) throw DomainError("build_spinor: needs the p^0 < 0 branch");
  const double m = minkowski_norm(p);
  Eigen::Matrix2cd ps = Eigen::Matrix2cd::Zero();
  for (int i = 1; i <= 3; ++i) ps += p(i) * pauli(i);
  const Eigen::Matrix2cd one = Eigen::Matrix2cd::Identity();
  Eigen::Vector2cd e = Eigen::Vector2cd::Zero();
  e(xi > 0 ? 0 : 1) = 1.0;
  OnShellSpinor u;
  u.xi = xi;
  u.momentum = p;
  u.components.head<2>() = sqrt_hermitian(-p(0) * one - ps) * e;
  u.components.tail<2>() = sqrt_hermitian(-p(0) * one + ps) * e;
  if ((dirac_operator(p) * u.components).norm() > 1e-10 * std::max(1.0, std::abs(p(0))))
    throw DomainError("build_spinor: momentum is off shell (m = " + std::to_string(m) + ")");
  return u;
}

Eigen::Matrix<cplx, 1, 4> spinor_bar(const OnShellSpinor& u) {
  return u.components.adjoint() * gamma(0);
}

VertexMatrices build_vertex_from_form_factors(const FormFactors& ff, const FourVector& pPrime,
                                              const FourVector& p) {
  const double norm = minkowski_norm(pPrime) + minkowski_norm(p);
  const SpinorMatrix& g5 = gamma5();
  const SpinorMatrix one = identity4();
  const SpinorMatrix Fm = ff.F * one + ff.F5 * g5;
  const SpinorMatrix Gm = ff.G * one + ff.G5 * g5;
  const SpinorMatrix Hm = ff.H * one + ff.H5 * g5;
  VertexMatrices x;
  for (int mu = 0; mu < 4; ++mu)
    x[mu] = minkowski_gamma(mu) * Fm - cplx(0.0, (pPrime(mu) + p(mu)) / norm) * Gm +
            ((pPrime(mu) - p(mu)) / norm) * Hm;
  return x;
}

MinkowskiVertex synthetic_vertex(const FormFactors& ff) {
  return [ff](const FourVector& pp, const FourVector& p) {
    return build_vertex_from_form_factors(ff, pp, p);
  };
}

cplx extract_F(const MinkowskiVertex& vertex, const FourVector& p, double derivativeStep) {
  const double m = minkowski_norm(p);
  const double h = derivativeStep > 0.0 ? derivativeStep : m / 64.0;
  const SpinorMatrix& g5 = gamma5();
  // T^{mu beta}(p', p) = tr[g5 Pi_p' Gamma^mu Pi_p gamma^beta]
  auto traces = [&](const FourVector& pp, const FourVector& q) {
    const VertexMatrices G = vertex(pp, q);
    const SpinorMatrix L = g5 * projector(pp), R = projector(q);
    Eigen::Matrix4cd t;
    for (int mu = 0; mu < 4; ++mu) {
      const SpinorMatrix LG = L * G[mu] * R;
      for (int b = 0; b < 4; ++b)
        t(mu, b) = (LG * minkowski_gamma(b)).trace();
    }
    return t;
  };
  cplx sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    // raised derivative index: shift the upper component by eta^{aa} h
    FourVector d = FourVector::Zero();
    d(a) = minkowski_metric(a) * h;
    // (d_p' - d_p) at p' = p
    const Eigen::Matrix4cd D =
        ((traces(p + d, p) - traces(p - d, p)) - (traces(p, p + d) - traces(p, p - d))) / (2.0 * h);
    for (int mu = 0; mu < 4; ++mu)
      for (int s = 0; s < 4; ++s)
        for (int b = 0; b < 4; ++b) {
          const int e = levi_civita(a, mu, s, b);
          if (e) sum += double(e) * p(s) * D(mu, b);
        }
  }
  return cplx(0.0, 1.0) * sum / (48.0 * m * m);
}

cplx extract_F_plus_G(const MinkowskiVertex& vertex, const FourVector& p) {
  const double m = minkowski_norm(p);
  const VertexMatrices G = vertex(p, p);
  SpinorMatrix pg = SpinorMatrix::Zero();
  for (int mu = 0; mu < 4; ++mu) pg += (minkowski_metric(mu) * p(mu)) * G[mu];
  return cplx(0.0, -1.0) / (4.0 * m * m) * (projector(p) * pg).trace();
}

cplx g_from_form_factors(const FormFactors& ff) {
  const cplx s = ff.F + ff.G;
  if (std::abs(s) == 0.0) throw DomainError("g_from_form_factors: F + G = 0");
  return -ff.G / s;
}

}  // namespace g2lab
