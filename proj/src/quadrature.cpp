#include "g2lab/quadrature.hpp"

#include "g2lab/loop_geometry.hpp"

namespace g2lab {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre needs n >= 1");
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) { p1 = x; p0 = 1.0; }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

std::vector<double> dyadic_breaks(double lo, double hi, double first) {
  std::vector<double> b{first};
  for (double t = lo; t < hi; t *= 2.0)
    if (t > first) b.push_back(t);
  b.push_back(hi);
  return b;
}

const AngularRule& octahedron_rule() {
  static const AngularRule r = [] {
    AngularRule a;
    for (int i = 0; i < 3; ++i)
      for (double s : {1.0, -1.0}) {
        Eigen::Vector3d v = Eigen::Vector3d::Zero();
        v(i) = s;
        a.n.push_back(v);
        a.w.push_back(1.0 / 6.0);
      }
    return a;
  }();
  return r;
}

AngularRule product_rule(int nTheta, int nPhi) {
  const GaussRule g = gauss_legendre(nTheta);
  AngularRule a;
  for (int i = 0; i < nTheta; ++i) {
    const double c = g.x[i], s = std::sqrt(1.0 - c * c);
    for (int j = 0; j < nPhi; ++j) {
      const double phi = 2.0 * kPi * (j + 0.5) / nPhi;
      a.n.emplace_back(s * std::cos(phi), s * std::sin(phi), c);
      a.w.push_back(0.5 * g.w[i] / nPhi);
    }
  }
  return a;
}

}  // namespace g2lab
