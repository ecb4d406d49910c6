#pragma once

#include <cmath>

#include "g2lab/core.hpp"
#include "g2lab/jet.hpp"

namespace g2lab {

struct CutoffFamily {
  int N = 10;
  int hStar = 0;
  double transitionSharpness = 1.0;

  double Lambda() const { return std::ldexp(1.0, N); }
};

// h* = floor(log2 m); irFloor is used when m = 0
int h_star_for_mass(double m, int irFloor = 0);

// g(2-r)/(g(2-r)+g(r-1)) with g(t) = exp(-s/t), written as 1/(1+exp(d))
template <typename T>
T chi0(const T& r, double sharpness = 1.0) {
  using std::exp;
  const double r0 = base_real(r);
  if (r0 <= 1.0) return T(1.0);
  if (r0 >= 2.0) return T(0.0);
  const T one(1.0);
  const T d = T(sharpness) / (T(2.0) - r) - T(sharpness) / (r - one);
  const double d0 = base_real(d);
  if (d0 > 700.0) return T(0.0);
  if (d0 < -700.0) return T(1.0);
  return one / (one + exp(d));
}

// chi_h as a function of |k|; no ladder check
template <typename T>
T chi_radial(int h, const T& absK, double sharpness = 1.0) {
  return chi0(absK * T(std::ldexp(1.0, -h)), sharpness);
}

template <typename T>
T f_radial(int h, const T& absK, double sharpness = 1.0) {
  return chi_radial(h, absK, sharpness) - chi_radial(h - 1, absK, sharpness);
}

double chi_h(int h, const FourVector& k, const CutoffFamily& fam);
double f_h(int h, const FourVector& k, const CutoffFamily& fam);

// single-scale weight with the h* convention: chi_{h*} at h = h*, f_h above
double scale_weight(int h, double absK, const CutoffFamily& fam);

}  // namespace g2lab
