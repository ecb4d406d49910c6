#include "g2lab/propagators.hpp"

#include <string>

#include "g2lab/gamma_algebra.hpp"

namespace g2lab {

void validate(const PhysicalParams& p) {
  if (!(p.m >= 0.0)) throw DomainError("fermion mass must be nonnegative");
  if (!(p.M > 0.0)) throw DomainError("boson mass must be positive");
  if (!(p.lambda >= 0.0)) throw DomainError("coupling must be nonnegative");
  if (p.K < 0) throw DomainError("Maclaurin order must be nonnegative");
  if (p.hStar() > p.N) throw DomainError("cutoff below the infrared scale");
}

CouplingSet& RunningCouplings::at(int h) {
  const int i = h - (family.hStar - 1);
  if (i < 0 || i >= static_cast<int>(perScale.size()))
    throw DomainError("running couplings: scale " + std::to_string(h) + " out of range");
  return perScale[i];
}

const CouplingSet& RunningCouplings::at(int h) const {
  return const_cast<RunningCouplings*>(this)->at(h);
}

RunningCouplings free_couplings(const PhysicalParams& p) {
  RunningCouplings rc;
  rc.family = p.family();
  CouplingSet c;
  c.mPlus = c.mMinus = p.m;
  rc.perScale.assign(rc.family.N - rc.family.hStar + 2, c);
  return rc;
}

SpinorMatrix dressed_gamma(int mu, double Zplus, double Zminus) {
  SpinorMatrix g = SpinorMatrix::Zero();
  g.block<2, 2>(0, 2) = Zplus * sigma_plus(mu);
  g.block<2, 2>(2, 0) = Zminus * sigma_minus(mu);
  return g;
}

SpinorMatrix dressed_mass(double mPlus, double mMinus) {
  SpinorMatrix m = SpinorMatrix::Zero();
  m.diagonal() << mPlus, mPlus, mMinus, mMinus;
  return m;
}

SpinorMatrix dressed_inverse(const FourVector& k, double Zplus, double Zminus, double mPlus,
                             double mMinus) {
  const double den = Zplus * Zminus * k.squaredNorm() + mPlus * mMinus;
  if (den == 0.0) throw NumericError("dressed propagator is singular (zero mass at k = 0)");
  SpinorMatrix num = dressed_mass(mMinus, mPlus);
  const cplx I(0.0, 1.0);
  for (int mu = 0; mu < 4; ++mu) num -= I * k(mu) * dressed_gamma(mu, Zplus, Zminus);
  return num / den;
}

double boson_propagator(const FourVector& q, const PhysicalParams& p) {
  const double r = q.norm();
  return chi_radial(p.N, r, p.sharpness) / (r * r + p.M * p.M);
}

SpinorMatrix fermion_single_scale(int h, const FourVector& k, const RunningCouplings& rc) {
  const auto& fam = rc.family;
  const double absK = k.norm();
  const double w = scale_weight(h, absK, fam);
  if (w == 0.0) return SpinorMatrix::Zero();
  const CouplingSet& c = rc.at(h);
  const CouplingSet& below = rc.at(h - 1);
  // chi-interpolated couplings, beta_h = v_{h-1} - v_h
  const double x = chi_radial(h, absK, fam.transitionSharpness);
  const double Zp = c.Zplus + (below.Zplus - c.Zplus) * x;
  const double Zm = c.Zminus + (below.Zminus - c.Zminus) * x;
  const double mp = c.mPlus + (below.mPlus - c.mPlus) * x;
  const double mm = c.mMinus + (below.mMinus - c.mMinus) * x;
  return w * dressed_inverse(k, Zp, Zm, mp, mm);
}

SpinorMatrix fermion_full(const FourVector& k, const RunningCouplings& rc) {
  SpinorMatrix s = SpinorMatrix::Zero();
  for (int h = rc.hStar(); h <= rc.N(); ++h) s += fermion_single_scale(h, k, rc);
  return s;
}

RunningCouplings massless_copy(const RunningCouplings& rc) {
  RunningCouplings out = rc;
  for (auto& c : out.perScale) c.mPlus = c.mMinus = 0.0;
  return out;
}

SpinorMatrix mass_zero_difference(int h, const FourVector& k, const RunningCouplings& rc) {
  const RunningCouplings zero = massless_copy(rc);
  if (scale_weight(h, k.norm(), rc.family) == 0.0) return SpinorMatrix::Zero();
  return fermion_single_scale(h, k, rc) - fermion_single_scale(h, k, zero);
}

}  // namespace g2lab
