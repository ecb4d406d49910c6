#include <doctest.h>

#include <random>

#include "g2lab/cutoff_scales.hpp"
#include "g2lab/gamma_algebra.hpp"
#include "g2lab/propagators.hpp"
#include "oracles.hpp"

using namespace g2lab;

TEST_SUITE("cutoff_scales") {

TEST_CASE("bump is 1 below r = 1, 0 above r = 2, 1/2 in the middle") {
  CHECK(chi0(0.3) == 1.0);
  CHECK(chi0(1.0) == 1.0);
  CHECK(chi0(2.0) == 0.0);
  CHECK(chi0(7.0) == 0.0);
  CHECK(chi0(1.5) == doctest::Approx(0.5).epsilon(1e-15));
  double prev = 1.0;
  for (double r = 1.0; r <= 2.0; r += 1.0 / 64) {
    const double c = chi0(r);
    CHECK(c <= prev);
    CHECK(std::abs(c - oracle::chi0(r)) <= 1e-15);
    prev = c;
  }
}

TEST_CASE("infrared scale from the mass") {
  CHECK(h_star_for_mass(1.0) == 0);
  CHECK(h_star_for_mass(0.3) == -2);
  CHECK(h_star_for_mass(16.0) == 4);
  CHECK(h_star_for_mass(17.5) == 4);
  CHECK(h_star_for_mass(0.0, -3) == -3);
}

TEST_CASE("single-scale weights telescope to chi_N") {
  const CutoffFamily fam{7, 0, 1.0};
  for (double k = 0.01; k < 300.0; k *= 1.37) {
    double s = 0.0;
    for (int h = fam.hStar; h <= fam.N; ++h) {
      const double w = scale_weight(h, k, fam);
      CHECK(w >= 0.0);
      CHECK(std::abs(w - oracle::scale_weight(h, fam.hStar, k)) <= 1e-15);
      s += w;
    }
    CHECK(std::abs(s - chi_radial(fam.N, k)) <= 1e-14);
  }
}

TEST_CASE("a single scale is supported on 2^{h-1} < |k| < 2^{h+1}") {
  const CutoffFamily fam{7, 0, 1.0};
  for (int h = 1; h <= 7; ++h) {
    CHECK(scale_weight(h, std::ldexp(0.99, h - 1), fam) == 0.0);
    CHECK(scale_weight(h, std::ldexp(1.01, h + 1), fam) == 0.0);
    CHECK(scale_weight(h, std::ldexp(1.0, h), fam) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(scale_weight(8, 1.0, fam), DomainError);
  CHECK_THROWS_AS(f_h(0, FourVector::Zero(), fam), DomainError);
}

TEST_CASE("sharper transition keeps the endpoints") {
  CHECK(chi0(1.0, 4.0) == 1.0);
  CHECK(chi0(2.0, 4.0) == 0.0);
  CHECK(chi0(1.5, 4.0) == doctest::Approx(0.5));
  CHECK(chi0(1.2, 4.0) > chi0(1.2, 1.0));
}

}

TEST_SUITE("propagators") {

TEST_CASE("free dressed inverse is (i kslash + m)^-1") {
  std::mt19937 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    const FourVector k(n(rng), n(rng), n(rng), n(rng));
    const double m = 0.5 + std::abs(n(rng));
    const SpinorMatrix want = (cplx(0.0, 1.0) * slash(k) + m * identity4()).inverse();
    CHECK((dressed_inverse(k, 1.0, 1.0, m, m) - want).norm() <= 1e-13);
  }
}

TEST_CASE("dressed inverse inverts the dressed operator") {
  const FourVector k(0.3, -1.1, 0.7, 2.0);
  const double zp = 1.2, zm = 0.8, mp = 0.9, mm = 1.3;
  SpinorMatrix op = dressed_mass(mp, mm);
  for (int mu = 0; mu < 4; ++mu) op += cplx(0.0, k(mu)) * dressed_gamma(mu, zp, zm);
  CHECK((op * dressed_inverse(k, zp, zm, mp, mm) - identity4()).norm() <= 1e-13);
  CHECK_THROWS_AS(dressed_inverse(FourVector::Zero(), 1.0, 1.0, 0.0, 0.0), NumericError);
}

TEST_CASE("boson propagator is the cut-off 1/(q^2 + M^2)") {
  PhysicalParams p;
  p.N = 6;
  const FourVector q(1.0, 2.0, 0.0, 0.0);
  CHECK(boson_propagator(q, p) == doctest::Approx(1.0 / (5.0 + 256.0)));
  CHECK(boson_propagator(FourVector(200.0, 0, 0, 0), p) == 0.0);
}

TEST_CASE("scales sum to the full propagator; mass difference vanishes at m = 0") {
  PhysicalParams p;
  p.N = 6;
  const RunningCouplings rc = free_couplings(p);
  for (double s : {0.2, 1.7, 9.0, 40.0}) {
    const FourVector k(s, 0.3 * s, 0.0, -0.1 * s);
    const SpinorMatrix full = dressed_inverse(k, 1.0, 1.0, p.m, p.m) * chi_radial(p.N, k.norm());
    CHECK((fermion_full(k, rc) - full).norm() <= 1e-14);
  }
  PhysicalParams p0 = p;
  p0.m = 0.0;
  const RunningCouplings rc0 = free_couplings(p0);
  for (int h = rc0.hStar() + 1; h <= rc0.N(); ++h)
    CHECK(mass_zero_difference(h, FourVector(std::ldexp(1.0, h), 0, 0, 0), rc0).norm() == 0.0);
  CHECK(mass_zero_difference(3, FourVector(8.0, 0, 0, 0), rc).norm() > 0.0);
}

TEST_CASE("parameter validation") {
  PhysicalParams p;
  p.M = 0.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = PhysicalParams{};
  p.m = 512.0;
  CHECK_THROWS_AS(validate(p), DomainError);
  p = PhysicalParams{};
  CHECK_NOTHROW(validate(p));
  CHECK(p.flowCoupling() == doctest::Approx(0.01 * 65536.0 / 256.0));
}

}
