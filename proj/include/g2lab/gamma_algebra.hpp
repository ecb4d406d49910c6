#pragma once

#include <array>
#include <vector>

#include "g2lab/core.hpp"

namespace g2lab {

// gamma0*gamma1*gamma2*gamma3 = kGamma5Phase * gamma5 in this basis
inline constexpr double kGamma5Phase = -1.0;
// tr[g5 ga gm gn gb] = kTraceEpsilonConstant * eps(a,m,n,b), eps(0,1,2,3) = +1
inline constexpr double kTraceEpsilonConstant = -4.0;

Eigen::Matrix2cd pauli(int i);  // i = 1,2,3
Eigen::Matrix2cd sigma_plus(int mu);
Eigen::Matrix2cd sigma_minus(int mu);

const SpinorMatrix& gamma(int mu);
const SpinorMatrix& gamma5();
const SpinorMatrix& minkowski_gamma(int mu);
const SpinorMatrix& identity4();

SpinorMatrix upsilon(int mu, double kappa);

template <typename Derived>
SpinorMatrix slash(const Eigen::MatrixBase<Derived>& k) {
  SpinorMatrix s = SpinorMatrix::Zero();
  for (int mu = 0; mu < 4; ++mu) s += cplx(k(mu)) * gamma(mu);
  return s;
}

// p given with upper indices; contracted with eta = diag(-1,1,1,1)
template <typename Derived>
SpinorMatrix minkowski_slash(const Eigen::MatrixBase<Derived>& p) {
  SpinorMatrix s = SpinorMatrix::Zero();
  for (int mu = 0; mu < 4; ++mu) {
    const double sign = mu == 0 ? -1.0 : 1.0;
    s += cplx(sign * p(mu)) * minkowski_gamma(mu);
  }
  return s;
}

cplx trace_product(const std::vector<SpinorMatrix>& matrices);

// totally antisymmetric symbol, eps(0,1,2,3) = +1
int levi_civita(int a, int b, int c, int d);
int levi_civita3(int a, int b, int c);  // indices 1..3

// sum_nu Upsilon_nu X Upsilon^nu
SpinorMatrix upsilon_sandwich(const SpinorMatrix& x, double kappa);

inline double minkowski_metric(int mu) { return mu == 0 ? -1.0 : 1.0; }

}  // namespace g2lab
