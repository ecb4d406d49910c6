#include "g2lab/gamma_algebra.hpp"

namespace g2lab {

namespace {

const cplx I(0.0, 1.0);

std::array<SpinorMatrix, 4> build_gammas() {
  std::array<SpinorMatrix, 4> g;
  for (int mu = 0; mu < 4; ++mu) {
    g[mu].setZero();
    g[mu].block<2, 2>(0, 2) = sigma_plus(mu);
    g[mu].block<2, 2>(2, 0) = sigma_minus(mu);
  }
  return g;
}

}  // namespace

Eigen::Matrix2cd pauli(int i) {
  Eigen::Matrix2cd s;
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw DomainError("pauli index must be 1..3");
  }
  return s;
}

Eigen::Matrix2cd sigma_plus(int mu) {
  if (mu == 0) return Eigen::Matrix2cd::Identity();
  return -I * pauli(mu);
}

Eigen::Matrix2cd sigma_minus(int mu) {
  if (mu == 0) return Eigen::Matrix2cd::Identity();
  return I * pauli(mu);
}

const SpinorMatrix& gamma(int mu) {
  static const std::array<SpinorMatrix, 4> g = build_gammas();
  if (mu < 0 || mu > 3) throw DomainError("gamma index must be 0..3");
  return g[mu];
}

const SpinorMatrix& gamma5() {
  static const SpinorMatrix g5 = [] {
    SpinorMatrix m = SpinorMatrix::Zero();
    m.diagonal() << 1.0, 1.0, -1.0, -1.0;
    return m;
  }();
  return g5;
}

const SpinorMatrix& minkowski_gamma(int mu) {
  static const std::array<SpinorMatrix, 4> gm = [] {
    std::array<SpinorMatrix, 4> a;
    for (int m = 0; m < 4; ++m) a[m] = gamma(m);
    a[0] *= I;
    return a;
  }();
  if (mu < 0 || mu > 3) throw DomainError("gamma index must be 0..3");
  return gm[mu];
}

const SpinorMatrix& identity4() {
  static const SpinorMatrix id = SpinorMatrix::Identity();
  return id;
}

SpinorMatrix upsilon(int mu, double kappa) {
  return gamma(mu) * (identity4() - cplx(kappa) * gamma5());
}

cplx trace_product(const std::vector<SpinorMatrix>& matrices) {
  if (matrices.empty()) throw DomainError("trace_product of an empty list");
  SpinorMatrix acc = matrices.front();
  for (std::size_t i = 1; i < matrices.size(); ++i) acc = acc * matrices[i];
  return acc.trace();
}

int levi_civita(int a, int b, int c, int d) {
  const int idx[4] = {a, b, c, d};
  for (int i = 0; i < 4; ++i) {
    if (idx[i] < 0 || idx[i] > 3) throw DomainError("levi_civita index out of range");
    for (int j = i + 1; j < 4; ++j)
      if (idx[i] == idx[j]) return 0;
  }
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (idx[i] > idx[j]) sign = -sign;
  return sign;
}

int levi_civita3(int a, int b, int c) { return levi_civita(0, a, b, c); }

SpinorMatrix upsilon_sandwich(const SpinorMatrix& x, double kappa) {
  // Upsilon^nu = Upsilon_nu in Euclidean signature
  SpinorMatrix out = SpinorMatrix::Zero();
  for (int nu = 0; nu < 4; ++nu) {
    const SpinorMatrix u = upsilon(nu, kappa);
    out += u * x * u;
  }
  return out;
}

}  // namespace g2lab
