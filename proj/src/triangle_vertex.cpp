#include "g2lab/triangle_vertex.hpp"

#include <algorithm>
#include <functional>

#include "g2lab/fit.hpp"
#include "g2lab/gamma_algebra.hpp"
#include "g2lab/loop_geometry.hpp"

namespace g2lab {

namespace {

// chi_h written in terms of k^2 so jets never hit sqrt(0)
template <typename S>
S chi_of_sq(int h, const S& ksq, double sharpness) {
  const double b = base_real(ksq);
  const double s2 = std::ldexp(1.0, 2 * h);
  if (b <= s2) return S(1.0);
  if (b >= 4.0 * s2) return S(0.0);
  using std::sqrt;
  return chi0(sqrt(ksq) / S(std::ldexp(1.0, h)), sharpness);
}

SpinorMatrix free_fermion(const FourVector& k, double m) {
  const cplx I(0.0, 1.0);
  SpinorMatrix s = -I * slash(k);
  s.diagonal().array() += m;
  return s / (k.squaredNorm() + m * m);
}

bool on_time_axis(const FourVector& v) { return v.tail<3>().squaredNorm() == 0.0; }

const AngularRule& displaced_rule() {
  static const AngularRule r = product_rule(16, 32);
  return r;
}

std::vector<double> x_breaks(const PhysicalParams& p) {
  const double eps = std::max(p.m * p.m / (p.M * p.M), 1e-12);
  std::vector<double> b{0.0};
  for (int j = 1; j < 60; ++j) {
    const double t = std::ldexp(1.0, -j);
    b.push_back(1.0 - t);
    if (t < 0.01 * eps) break;
  }
  b.push_back(1.0);
  return b;
}

double radial_floor(const PhysicalParams& p) { return std::ldexp(1.0, p.hStar() - 4); }

// radial breakpoints for a slice on scale h (h = h* means the whole ball)
std::vector<double> slice_breaks(int h, int hStar) {
  if (h == hStar) return dyadic_breaks(std::ldexp(1.0, hStar - 4), std::ldexp(1.0, h + 1));
  return {std::ldexp(1.0, h - 1), std::ldexp(1.0, h), std::ldexp(1.0, h + 1)};
}

template <int KJ>
std::vector<cplx> a2_derivatives_impl(const PhysicalParams& p, int K, const QuadratureSpec& quad) {
  using J = Jet<cplx, KJ>;
  const double s = p.m > 0.0 ? p.m : p.M / 4.0;
  const J z = J::variable(cplx(0.0)) * cplx(s);
  auto r = integrate_1d([&](double x) { return a2_integrand(x, z, p); }, x_breaks(p), quad);
  const J& c = require_converged(r, "a2_derivatives");
  std::vector<cplx> out(K + 1);
  for (int l = 0; l <= K; ++l) out[l] = c.derivative(l) / std::pow(s, l);
  return out;
}

// A_2(z; Lambda) by the polar integral centred at p_z: q = p_z + k, rho = |k|
template <typename S>
QuadResult<S> a2_cutoff_core(const S& z, const PhysicalParams& p, const QuadratureSpec& quad) {
  const double lam2 = p.lambda * p.lambda;
  const double M2 = p.M * p.M, m2 = p.m * p.m;
  auto f = [&](double rho, double psi) {
    const double c = std::cos(psi), sn = std::sin(psi);
    const double chiK = chi_radial(p.N, rho, p.sharpness);
    if (chiK == 0.0) return S(0.0);
    const S q0 = z + S(rho * c);
    const double r2 = rho * rho * sn * sn;
    const S qsq = q0 * q0 + S(r2);
    const S chiQ = chi_of_sq(p.N, qsq, p.sharpness);
    const double d2 = rho * rho + m2;
    const double w = 4.0 * lam2 * chiK * chiK * loop_measure(rho, psi) / (d2 * d2);
    return S(w) * t_poly(z, q0, S(r2), p) * chiQ / (qsq + S(M2));
  };
  return integrate_2d(f, dyadic_breaks(radial_floor(p), 2.0 * p.Lambda()), psi_breaks(), quad);
}

template <int KJ>
std::vector<cplx> a2_cutoff_derivatives_impl(const PhysicalParams& p, int K,
                                             const QuadratureSpec& quad) {
  using J = Jet<cplx, KJ>;
  const double s = p.m > 0.0 ? p.m : p.M / 4.0;
  const J z = J::variable(cplx(0.0)) * cplx(s);
  const J c = require_converged(a2_cutoff_core(z, p, quad), "a2_cutoff_derivatives");
  std::vector<cplx> out(K + 1);
  for (int l = 0; l <= K; ++l) out[l] = c.derivative(l) / std::pow(s, l);
  return out;
}

using Weight = std::function<double(double absPrimeMinusQ, double absPMinusQ)>;

// -Upsilon_nu [ int S(p'-q) g^mu S(p-q) v(q) W ] Upsilon^nu, polar chart centred at p
TriangleResult triangle_weighted(const FourVector& pPrime, const FourVector& p, const Weight& W,
                                 std::vector<double> rhoBreaks, const PhysicalParams& params,
                                 const QuadratureSpec& quad) {
  const AngularRule& rule =
      (on_time_axis(p) && on_time_axis(pPrime)) ? octahedron_rule() : displaced_rule();
  using V = std::array<SpinorMatrix, 4>;
  auto f = [&](double rho, double psi) {
    V acc;
    for (auto& a : acc) a.setZero();
    const double meas = loop_measure(rho, psi);
    for (std::size_t i = 0; i < rule.n.size(); ++i) {
      const FourVector q = polar_point(p, rho, psi, rule.n[i]);
      const double w = W((pPrime - q).norm(), rho);
      if (w == 0.0) continue;
      const double vb = boson_propagator(q, params);
      if (vb == 0.0) continue;
      const SpinorMatrix S1 = free_fermion(pPrime - q, params.m);
      const SpinorMatrix S2 = free_fermion(p - q, params.m);
      const double c = rule.w[i] * w * vb * meas;
      for (int mu = 0; mu < 4; ++mu) acc[mu] += c * (S1 * gamma(mu) * S2);
    }
    return acc;
  };
  auto r = integrate_2d(f, std::move(rhoBreaks), psi_breaks(), quad);
  const V& v = require_converged(r, "triangle integral");
  TriangleResult out;
  for (int mu = 0; mu < 4; ++mu) out.value[mu] = -upsilon_sandwich(v[mu], params.kappa);
  out.errorEstimate = r.error;
  return out;
}

void accumulate(TriangleResult& acc, const TriangleResult& t, double sign) {
  for (int mu = 0; mu < 4; ++mu) acc.value[mu] += sign * t.value[mu];
  acc.errorEstimate += t.errorEstimate;
}

TriangleResult zero_triangle(const PhysicalParams& params) {
  TriangleResult t;
  for (auto& v : t.value) v.setZero();
  t.hMin = params.hStar();
  t.hMax = params.N;
  return t;
}

}  // namespace

cplx t_poly(cplx z, const FourVector& q, const PhysicalParams& p) {
  return t_poly<cplx>(z, cplx(q(0)), cplx(q.tail<3>().squaredNorm()), p);
}

FeynmanCheck feynman_param_identity_check(cplx a, cplx b, const QuadratureSpec& quad) {
  if (a == 0.0 || b == 0.0) throw DomainError("feynman check: zero denominator");
  // the path a(1-x) + bx must stay away from 0
  const cplx d = b - a;
  const double t = std::clamp(d == 0.0 ? 0.0 : -std::real(std::conj(d) * a) / std::norm(d), 0.0, 1.0);
  const double minAbs = std::abs(a + t * d);
  if (minAbs < 1e-8 * std::max(std::abs(a), std::abs(b)))
    throw DomainError("feynman check: denominator vanishes on the path");
  auto r = integrate_1d(
      [&](double x) {
        const cplx den = a * (1.0 - x) + b * x;
        return 2.0 * x / (den * den * den);
      },
      0.0, 1.0, quad);
  FeynmanCheck out;
  out.lhs = 1.0 / (a * b * b);
  out.rhs = require_converged(r, "feynman_param_identity_check");
  out.diff = std::abs(out.lhs - out.rhs);
  return out;
}

cplx a2_of_z(cplx z, const PhysicalParams& p, const QuadratureSpec& quad) {
  if (std::abs(z) >= p.M / 2.0) throw DomainError("a2_of_z: |z| >= M/2 is outside the disk of analyticity");
  for (double x : {0.25, 0.5, 0.75, 1.0}) {
    if (std::abs(delta_sq(x, z, p)) < 1e-14 * p.M * p.M)
      throw NumericError("a2_of_z: Delta^2 nearly vanishes");
  }
  auto r = integrate_1d([&](double x) { return a2_integrand(x, z, p); }, x_breaks(p), quad);
  return require_converged(r, "a2_of_z");
}

std::vector<cplx> a2_derivatives(const PhysicalParams& p, int K, const QuadratureSpec& quad) {
  if (K < 0 || K > kMaxJetOrder) throw DomainError("a2_derivatives: order must be in [0, 8]");
  if (K <= 4) return a2_derivatives_impl<4>(p, K, quad);
  return a2_derivatives_impl<kMaxJetOrder>(p, K, quad);
}

cplx a2_cutoff(double z, const PhysicalParams& p, const QuadratureSpec& quad, double* err) {
  auto r = a2_cutoff_core(cplx(z), p, quad);
  if (err) *err = r.error;
  return require_converged(r, "a2_cutoff");
}

std::vector<cplx> a2_cutoff_derivatives(const PhysicalParams& p, int K, const QuadratureSpec& quad) {
  if (K < 0 || K > kMaxJetOrder) throw DomainError("a2_cutoff_derivatives: order must be in [0, 8]");
  if (K <= 4) return a2_cutoff_derivatives_impl<4>(p, K, quad);
  return a2_cutoff_derivatives_impl<kMaxJetOrder>(p, K, quad);
}

TriangleResult triangle_pair(int h1, int h2, const FourVector& pPrime, const FourVector& p,
                             const PhysicalParams& params, const QuadratureSpec& quad) {
  const CutoffFamily fam = params.family();
  for (int h : {h1, h2})
    if (h < fam.hStar || h > fam.N) throw DomainError("triangle_pair: scale outside the ladder");
  TriangleResult zero = zero_triangle(params);
  zero.hMin = std::min(h1, h2);
  zero.hMax = std::max(h1, h2);
  // annuli further apart than the external shift never meet
  const double shift = (pPrime - p).norm();
  const double lo1 = h1 == fam.hStar ? 0.0 : std::ldexp(1.0, h1 - 1);
  const double hi1 = std::ldexp(1.0, h1 + 1);
  std::vector<double> b = slice_breaks(h2, fam.hStar);
  const double lo = std::max(b.front(), lo1 - shift), hi = std::min(b.back(), hi1 + shift);
  if (lo >= hi) return zero;
  std::vector<double> breaks{lo, hi};
  for (double x : b)
    if (x > lo && x < hi) breaks.push_back(x);
  Weight W = [&](double a, double r) { return scale_weight(h1, a, fam) * scale_weight(h2, r, fam); };
  TriangleResult t = triangle_weighted(pPrime, p, W, breaks, params, quad);
  t.hMin = zero.hMin;
  t.hMax = zero.hMax;
  t.pairsSummed = 1;
  return t;
}

TriangleResult triangle_full(const FourVector& pPrime, const FourVector& p,
                             const PhysicalParams& params, const QuadratureSpec& quad) {
  const int N = params.N;
  const double s = params.sharpness;
  Weight W = [&](double a, double r) { return chi_radial(N, a, s) * chi_radial(N, r, s); };
  TriangleResult t = triangle_weighted(pPrime, p, W,
                                       dyadic_breaks(radial_floor(params), 2.0 * params.Lambda()),
                                       params, quad);
  t.hMin = params.hStar();
  t.hMax = N;
  return t;
}

TriangleResult triangle_high_zero_mode(const PhysicalParams& params, const QuadratureSpec& quad) {
  TriangleResult acc = zero_triangle(params);
  const FourVector zero = FourVector::Zero();
  const int hs = params.hStar();
  for (int h1 = hs + 1; h1 <= params.N; ++h1)
    for (int h2 = std::max(hs + 1, h1 - 2); h2 <= std::min(params.N, h1 + 2); ++h2) {
      accumulate(acc, triangle_pair(h1, h2, zero, zero, params, quad), 1.0);
      ++acc.pairsSummed;
    }
  return acc;
}

TriangleResult triangle_cutoff(const FourVector& pPrime, const FourVector& p,
                               const PhysicalParams& params, const QuadratureSpec& quad) {
  validate(params);
  const double reach = params.m / 2.0 * (1.0 + 1e-12);
  if (p.norm() > reach || pPrime.norm() > reach)
    throw DomainError("triangle_cutoff: external momenta must satisfy |p| <= m/2");
  TriangleResult acc = zero_triangle(params);
  const FourVector zero = FourVector::Zero();
  const int hs = params.hStar(), N = params.N;
  for (int h1 = hs; h1 <= N; ++h1)
    for (int h2 = std::max(hs, h1 - 2); h2 <= std::min(N, h1 + 2); ++h2) {
      const bool low = std::min(h1, h2) == hs;
      if (!low) {
        // tail of the subtracted sum below the requested absolute tolerance
        const double tail = params.m * params.m * std::ldexp(1.0, -2 * std::min(h1, h2));
        if (tail < quad.absTolerance) continue;
      }
      accumulate(acc, triangle_pair(h1, h2, pPrime, p, params, quad), 1.0);
      if (!low) accumulate(acc, triangle_pair(h1, h2, zero, zero, params, quad), -1.0);
      ++acc.pairsSummed;
    }
  return acc;
}

std::array<SpinorMatrix, 9> triangle_derivative(double z, const PhysicalParams& params,
                                                const QuadratureSpec& quad) {
  const FourVector pz = time_axis(z);
  const AngularRule& rule = octahedron_rule();
  const cplx I(0.0, 1.0);
  using V = std::array<SpinorMatrix, 9>;
  auto f = [&](double rho, double psi) {
    V acc;
    for (auto& a : acc) a.setZero();
    const double chiK = chi_radial(params.N, rho, params.sharpness);
    if (chiK == 0.0) return acc;
    const double meas = loop_measure(rho, psi);
    for (std::size_t i = 0; i < rule.n.size(); ++i) {
      const FourVector q = polar_point(pz, rho, psi, rule.n[i]);
      const double vb = boson_propagator(q, params);
      if (vb == 0.0) continue;
      const SpinorMatrix S = free_fermion(pz - q, params.m);
      const double c = rule.w[i] * chiK * chiK * vb * meas;
      std::array<SpinorMatrix, 3> A;
      for (int a = 0; a < 3; ++a) A[a] = S * (I * gamma(a + 1)) * S;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const SpinorMatrix& gb = gamma(b + 1);
          acc[3 * a + b] += c * (S * gb * A[a] - A[a] * gb * S);
        }
    }
    return acc;
  };
  auto r = integrate_2d(f, dyadic_breaks(radial_floor(params), 2.0 * params.Lambda()), psi_breaks(),
                        quad);
  const V& v = require_converged(r, "triangle_derivative");
  V out;
  for (int i = 0; i < 9; ++i) out[i] = -upsilon_sandwich(v[i], params.kappa);
  return out;
}

CutoffScan cutoff_removal_scan(const PhysicalParams& p, const std::vector<int>& ladder,
                               const QuadratureSpec& quad, double z) {
  if (ladder.size() < 2) throw DomainError("cutoff_removal_scan: need at least two ladder points");
  std::vector<int> Ns = ladder;
  std::sort(Ns.begin(), Ns.end());
  CutoffScan scan;
  scan.z = z;
  scan.closedForm = a2_of_z(cplx(z), p, quad);
  for (int N : Ns) {
    PhysicalParams q = p;
    q.N = N;
    validate(q);
    ScanRow row;
    row.N = N;
    row.Lambda = q.Lambda();
    row.value = a2_cutoff(z, q, quad, &row.errorEstimate);
    row.deviationClosedForm = std::abs(row.value - scan.closedForm);
    scan.rows.push_back(row);
  }
  const cplx ref = scan.rows.back().value;
  std::vector<double> L, dev, Lc, devc;
  for (auto& row : scan.rows) {
    row.deviation = std::abs(row.value - ref);
    if (&row != &scan.rows.back()) {
      L.push_back(row.Lambda);
      dev.push_back(row.deviation);
    }
    Lc.push_back(row.Lambda);
    devc.push_back(row.deviationClosedForm);
  }
  scan.slope = L.size() >= 2 ? loglog_slope(L, dev) : 0.0;
  scan.slopeClosedForm = loglog_slope(Lc, devc);
  return scan;
}

CancellationResult rotational_cancellation(const PhysicalParams& p, double x, double z,
                                           const QuadratureSpec& quad, CancellationVariant v) {
  if (x < 0.0 || x > 1.0) throw DomainError("rotational_cancellation: x outside [0,1]");
  const double D2 = std::real(delta_sq(x, cplx(z), p));
  const int N = p.N;
  const double s = p.sharpness, Lam = p.Lambda();
  auto num = [&](double rho, double psi) {
    const double q0 = rho * std::cos(psi), r = rho * std::sin(psi);
    if (v == CancellationVariant::NoCounterterm) return q0 * q0;
    return q0 * q0 - r * r / 3.0;
  };
  auto den = [&](double rho) {
    const double d = rho * rho + D2;
    return d * d * d;
  };
  auto centred = [&](double rho, double psi) {
    const double c = chi_radial(N, rho, s);
    return std::array<double, 2>{num(rho, psi) * c * c * c * loop_measure(rho, psi) / den(rho),
                                 std::abs(num(rho, psi)) * c * c * c * loop_measure(rho, psi) / den(rho)};
  };
  const std::vector<double> rb = dyadic_breaks(radial_floor(p), 2.0 * Lam);
  auto base = integrate_2d(centred, rb, psi_breaks(), quad);
  const auto& bv = require_converged(base, "rotational_cancellation");
  CancellationResult out;
  out.value = bv[0];
  out.scale = bv[1];
  out.errorEstimate = base.error;
  if (v != CancellationVariant::Shifted) return out;
  // shifted weight minus chi^3: supported on a shell around [Lambda, 2 Lambda]
  const double a = std::max(std::abs(x * z), std::abs((x - 1.0) * z));
  auto diff = [&](double rho, double psi) {
    const double q0 = rho * std::cos(psi), r2 = std::pow(rho * std::sin(psi), 2);
    const double c = chi_radial(N, rho, s);
    const double c1 = chi_of_sq(N, std::pow(q0 + x * z, 2) + r2, s);
    const double c2 = chi_of_sq(N, std::pow(q0 + (x - 1.0) * z, 2) + r2, s);
    return num(rho, psi) * (c1 * c2 * c2 - c * c * c) * loop_measure(rho, psi) / den(rho);
  };
  std::vector<double> sb{std::max(0.0, Lam - a), Lam, Lam + a, 2.0 * Lam - a, 2.0 * Lam, 2.0 * Lam + a};
  std::sort(sb.begin(), sb.end());
  sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
  QuadratureSpec dq = quad;
  dq.absTolerance = std::min(quad.absTolerance, quad.relTolerance * std::abs(out.scale) * 1e-6);
  auto d = integrate_2d(diff, sb, psi_breaks(), dq);
  out.value += require_converged(d, "rotational_cancellation (shift)");
  out.errorEstimate += d.error;
  return out;
}

double rotational_cancellation_check(const PhysicalParams& p, double x, double z,
                                     const QuadratureSpec& quad) {
  return std::abs(rotational_cancellation(p, x, z, quad, CancellationVariant::Centered).value);
}

Eigen::Matrix4cd bubble_matrix(int h1, int h2, const FourVector& k, const PhysicalParams& p,
                               const QuadratureSpec& quad, double* err) {
  const CutoffFamily fam = p.family();
  for (int h : {h1, h2})
    if (h < fam.hStar || h > fam.N) throw DomainError("bubble_matrix: scale outside the ladder");
  const AngularRule& rule = on_time_axis(k) ? octahedron_rule() : displaced_rule();
  std::array<SpinorMatrix, 4> ups;
  for (int nu = 0; nu < 4; ++nu) ups[nu] = upsilon(nu, p.kappa);
  const FourVector zero = FourVector::Zero();
  auto f = [&](double rho, double psi) {
    Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
    const double w2 = scale_weight(h2, rho, fam);
    if (w2 == 0.0) return acc;
    const double meas = loop_measure(rho, psi);
    for (std::size_t i = 0; i < rule.n.size(); ++i) {
      const FourVector q = polar_point(zero, rho, psi, rule.n[i]);
      const FourVector kq = k + q;
      const double w1 = scale_weight(h1, kq.norm(), fam);
      if (w1 == 0.0) continue;
      const SpinorMatrix G1 = free_fermion(kq, p.m), G2 = free_fermion(q, p.m);
      const double c = rule.w[i] * w1 * w2 * meas;
      for (int mu = 0; mu < 4; ++mu) {
        const SpinorMatrix X = G1 * gamma(mu) * G2;
        for (int nu = 0; nu < 4; ++nu) acc(nu, mu) += c * (ups[nu] * X).trace();
      }
    }
    return acc;
  };
  std::vector<double> b = slice_breaks(h2, fam.hStar);
  auto r = integrate_2d(f, b, psi_breaks(), quad);
  if (err) *err = r.error;
  return require_converged(r, "bubble_matrix");
}

BubbleReport bubble_contribution_check(const PhysicalParams& p, const QuadratureSpec& quad, int h1,
                                       int h2) {
  BubbleReport rep;
  double e = 0.0;
  rep.D = bubble_matrix(h1, h2, FourVector::Zero(), p, quad, &e);
  rep.errorEstimate = e;
  double diagMax = 0.0;
  for (int i = 0; i < 4; ++i) diagMax = std::max(diagMax, std::abs(rep.D(i, i)));
  if (diagMax == 0.0) throw NumericError("bubble_contribution_check: vanishing diagonal");
  double off = 0.0, aniso = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i != j) off = std::max(off, std::abs(rep.D(i, j)));
    }
  for (int i = 1; i < 4; ++i) aniso = std::max(aniso, std::abs(rep.D(i, i) - rep.D(0, 0)));
  rep.offDiagonal = off / diagMax;
  rep.anisotropy = aniso / diagMax;
  const int h = std::min(h1, h2);
  const double delta = std::ldexp(1.0, h) / 64.0;
  double der = 0.0;
  for (int a = 0; a < 4; ++a) {
    FourVector k = FourVector::Zero();
    k(a) = delta;
    const Eigen::Matrix4cd dp = bubble_matrix(h1, h2, k, p, quad);
    const Eigen::Matrix4cd dm = bubble_matrix(h1, h2, -k, p, quad);
    der = std::max(der, ((dp - dm) / (2.0 * delta)).cwiseAbs().maxCoeff());
  }
  rep.derivative = der * std::ldexp(1.0, h) / diagMax;
  return rep;
}

}  // namespace g2lab
