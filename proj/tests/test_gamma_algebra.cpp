#include <doctest.h>

#include <random>

#include "g2lab/gamma_algebra.hpp"

using namespace g2lab;

TEST_SUITE("gamma_algebra") {

TEST_CASE("gamma0 is block off-diagonal with identity blocks") {
  const SpinorMatrix& g0 = gamma(0);
  CHECK(g0.block<2, 2>(0, 0).norm() == 0.0);
  CHECK(g0.block<2, 2>(2, 2).norm() == 0.0);
  CHECK((g0.block<2, 2>(0, 2) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
  CHECK((g0.block<2, 2>(2, 0) - Eigen::Matrix2cd::Identity()).norm() == 0.0);
}

TEST_CASE("Euclidean Clifford relations") {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const SpinorMatrix ac = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu);
      const SpinorMatrix want = (mu == nu ? 2.0 : 0.0) * identity4();
      CHECK((ac - want).norm() <= 1e-15);
    }
  for (int mu = 0; mu < 4; ++mu) CHECK((gamma5() * gamma(mu) + gamma(mu) * gamma5()).norm() <= 1e-15);
  CHECK((gamma(0) * gamma(1) * gamma(2) * gamma(3) - kGamma5Phase * gamma5()).norm() <= 1e-15);
  SpinorMatrix d = SpinorMatrix::Zero();
  d.diagonal() << 1.0, 1.0, -1.0, -1.0;
  CHECK((gamma5() - d).norm() == 0.0);
}

TEST_CASE("Minkowski gammas square to the metric") {
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const SpinorMatrix ac = minkowski_gamma(mu) * minkowski_gamma(nu) + minkowski_gamma(nu) * minkowski_gamma(mu);
      const SpinorMatrix want = (mu == nu ? 2.0 * minkowski_metric(mu) : 0.0) * identity4();
      CHECK((ac - want).norm() <= 1e-15);
    }
  CHECK((minkowski_gamma(0) - cplx(0.0, 1.0) * gamma(0)).norm() <= 1e-15);
}

TEST_CASE("gamma5 four-gamma trace over all 256 tuples") {
  int nonzero = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int e = 0; e < 4; ++e) {
          const cplx t = trace_product({gamma5(), gamma(a), gamma(b), gamma(c), gamma(e)});
          CHECK(std::abs(t - kTraceEpsilonConstant * levi_civita(a, b, c, e)) <= 1e-14);
          nonzero += std::abs(t) > 0.5;
        }
  CHECK(nonzero == 24);
  CHECK(std::abs(trace_product({gamma5(), gamma(0), gamma(1), gamma(2), gamma(3)}) + 4.0) <= 1e-14);
}

TEST_CASE("Levi-Civita symbols") {
  CHECK(levi_civita(0, 1, 2, 3) == 1);
  CHECK(levi_civita(1, 0, 2, 3) == -1);
  CHECK(levi_civita(0, 0, 2, 3) == 0);
  CHECK(levi_civita3(1, 2, 3) == 1);
  CHECK(levi_civita3(3, 2, 1) == -1);
}

TEST_CASE("trace is cyclic and slash squares to k^2") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> idx(0, 4);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SpinorMatrix> ms;
    for (int i = 0; i < 6; ++i) ms.push_back(idx(rng) == 4 ? gamma5() : gamma(idx(rng) % 4));
    const cplx t = trace_product(ms);
    std::rotate(ms.begin(), ms.begin() + 1, ms.end());
    CHECK(std::abs(trace_product(ms) - t) <= 1e-14 * std::max(1.0, std::abs(t)));
    const FourVector k(n(rng), n(rng), n(rng), n(rng));
    CHECK((slash(k) * slash(k) - k.squaredNorm() * identity4()).norm() <= 1e-13);
  }
}

TEST_CASE("Upsilon reduces to gamma at kappa = 0") {
  for (int mu = 0; mu < 4; ++mu) CHECK((upsilon(mu, 0.0) - gamma(mu)).norm() <= 1e-15);
}

}
