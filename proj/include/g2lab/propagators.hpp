#pragma once

#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/cutoff_scales.hpp"

namespace g2lab {

struct PhysicalParams {
  double m = 1.0;
  double M = 16.0;
  double lambda = 0.1;
  double kappa = 0.0;
  int N = 8;
  int K = 4;
  int irFloorScale = 0;  // h* when m = 0
  double sharpness = 1.0;

  double Lambda() const { return std::ldexp(1.0, N); }
  int hStar() const { return h_star_for_mass(m, irFloorScale); }
  CutoffFamily family() const { return CutoffFamily{N, hStar(), sharpness}; }
  // lambda^2 Lambda^2 / M^2, the smallness parameter of the flow
  double flowCoupling() const { return lambda * lambda * Lambda() * Lambda() / (M * M); }
  bool asymptoticRegime() const { return M > 10.0 * m && Lambda() > M; }
};

void validate(const PhysicalParams& p);

struct CouplingSet {
  double Zplus = 1.0, Zminus = 1.0;
  double ZJplus = 1.0, ZJminus = 1.0;
  double mPlus = 0.0, mMinus = 0.0;
};

struct RunningCouplings {
  CutoffFamily family;
  std::vector<CouplingSet> perScale;  // index h - (hStar - 1)

  int hStar() const { return family.hStar; }
  int N() const { return family.N; }
  CouplingSet& at(int h);
  const CouplingSet& at(int h) const;
};

// Z = 1 and m_h = m on every scale (the lambda = 0 flow)
RunningCouplings free_couplings(const PhysicalParams& p);

SpinorMatrix dressed_gamma(int mu, double Zplus, double Zminus);
SpinorMatrix dressed_mass(double mPlus, double mMinus);

// (i k_mu gt^mu + mt)^{-1} in rationalized form:
// (-i k_mu gt^mu + diag(m-, m+)) / (Z+ Z- k^2 + m+ m-)
SpinorMatrix dressed_inverse(const FourVector& k, double Zplus, double Zminus, double mPlus,
                             double mMinus);

double boson_propagator(const FourVector& q, const PhysicalParams& p);

SpinorMatrix fermion_single_scale(int h, const FourVector& k, const RunningCouplings& rc);
SpinorMatrix fermion_full(const FourVector& k, const RunningCouplings& rc);
SpinorMatrix mass_zero_difference(int h, const FourVector& k, const RunningCouplings& rc);

// same couplings with all masses set to zero
RunningCouplings massless_copy(const RunningCouplings& rc);

}  // namespace g2lab
