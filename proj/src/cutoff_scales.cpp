#include "g2lab/cutoff_scales.hpp"

#include <string>

namespace g2lab {

int h_star_for_mass(double m, int irFloor) {
  if (m < 0.0) throw DomainError("negative mass");
  if (m == 0.0) return irFloor;
  return static_cast<int>(std::floor(std::log2(m)));
}

double chi_h(int h, const FourVector& k, const CutoffFamily& fam) {
  if (h < fam.hStar || h > fam.N)
    throw DomainError("chi_h: scale " + std::to_string(h) + " outside the ladder");
  return chi_radial(h, k.norm(), fam.transitionSharpness);
}

double f_h(int h, const FourVector& k, const CutoffFamily& fam) {
  if (h < fam.hStar + 1 || h > fam.N)
    throw DomainError("f_h: scale " + std::to_string(h) + " outside the ladder");
  return f_radial(h, k.norm(), fam.transitionSharpness);
}

double scale_weight(int h, double absK, const CutoffFamily& fam) {
  if (h < fam.hStar || h > fam.N)
    throw DomainError("scale_weight: scale " + std::to_string(h) + " outside the ladder");
  if (h == fam.hStar) return chi_radial(h, absK, fam.transitionSharpness);
  return f_radial(h, absK, fam.transitionSharpness);
}

}  // namespace g2lab
