#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "g2lab/core.hpp"
#include "g2lab/jet.hpp"

namespace g2lab {

struct QuadratureSpec {
  double relTolerance = 1e-8;
  double absTolerance = 1e-14;
  int maxSubdivisions = 4000;
};

template <typename V>
struct QuadResult {
  V value;
  double error = 0.0;
  int subdivisions = 0;
  long evaluations = 0;
  bool converged = false;
};

// --- value-type plumbing -------------------------------------------------

inline double quad_norm(double x) { return std::abs(x); }
inline double quad_norm(const cplx& x) { return std::abs(x); }
template <typename Derived>
double quad_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}
template <typename T, int K>
double quad_norm(const Jet<T, K>& j) {
  double n = 0.0;
  for (const auto& c : j.c) n = std::max(n, quad_norm(c));
  return n;
}
template <typename V, std::size_t N>
double quad_norm(const std::array<V, N>& a) {
  double n = 0.0;
  for (const auto& v : a) n = std::max(n, quad_norm(v));
  return n;
}

inline void quad_zero(double& x) { x = 0.0; }
inline void quad_zero(cplx& x) { x = 0.0; }
template <typename Derived>
void quad_zero(Eigen::MatrixBase<Derived>& m) { m.setZero(); }
template <typename T, int K>
void quad_zero(Jet<T, K>& j) { for (auto& c : j.c) c = T(0.0); }
template <typename V, std::size_t N>
void quad_zero(std::array<V, N>& a) { for (auto& v : a) quad_zero(v); }

inline void quad_axpy(double& acc, double w, double x) { acc += w * x; }
inline void quad_axpy(cplx& acc, double w, const cplx& x) { acc += w * x; }
template <typename Derived, typename Other>
void quad_axpy(Eigen::MatrixBase<Derived>& acc, double w, const Eigen::MatrixBase<Other>& x) {
  acc += w * x;
}
template <typename T, int K>
void quad_axpy(Jet<T, K>& acc, double w, const Jet<T, K>& x) {
  for (int i = 0; i <= K; ++i) acc.c[i] += w * x.c[i];
}
template <typename V, std::size_t N>
void quad_axpy(std::array<V, N>& acc, double w, const std::array<V, N>& x) {
  for (std::size_t i = 0; i < N; ++i) quad_axpy(acc[i], w, x[i]);
}

template <typename V>
V quad_diff(const V& a, const V& b) {
  V d = a;
  quad_axpy(d, -1.0, b);
  return d;
}

// --- Gauss-Kronrod 7/15 --------------------------------------------------

namespace detail {
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// 15 nodes on [-1,1] with Kronrod weights and Gauss weights (0 on Kronrod-only nodes)
struct Rule15 {
  std::array<double, 15> x, wk, wg;
};
inline const Rule15& rule15() {
  static const Rule15 r = [] {
    Rule15 q{};
    for (int i = 0; i < 7; ++i) {
      q.x[i] = -kXgk[i];
      q.x[14 - i] = kXgk[i];
      q.wk[i] = q.wk[14 - i] = kWgk[i];
      const double wg = (i % 2 == 1) ? kWg[i / 2] : 0.0;
      q.wg[i] = q.wg[14 - i] = wg;
    }
    q.x[7] = 0.0;
    q.wk[7] = kWgk[7];
    q.wg[7] = kWg[3];
    return q;
  }();
  return r;
}
}  // namespace detail

template <typename F>
auto integrate_1d(F&& f, std::vector<double> breaks, const QuadratureSpec& spec)
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
  using V = std::decay_t<decltype(f(0.0))>;
  struct Cell {
    double a, b;
    V val;
    double err;
  };
  const auto& R = detail::rule15();
  QuadResult<V> out;
  auto eval = [&](double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V k, g;
    bool init = false;
    for (int i = 0; i < 15; ++i) {
      const V v = f(c + h * R.x[i]);
      if (!init) { k = v; g = v; quad_zero(k); quad_zero(g); init = true; }
      quad_axpy(k, h * R.wk[i], v);
      if (R.wg[i] != 0.0) quad_axpy(g, h * R.wg[i], v);
    }
    out.evaluations += 15;
    const double err = quad_norm(quad_diff(k, g));
    return Cell{a, b, k, err};
  };
  if (breaks.size() < 2) throw DomainError("integrate_1d needs at least two breakpoints");
  std::sort(breaks.begin(), breaks.end());
  auto cmp = [](const Cell& l, const Cell& r) { return l.err < r.err; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> heap(cmp);
  std::vector<Cell> done;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (breaks[i + 1] > breaks[i]) heap.push(eval(breaks[i], breaks[i + 1]));
  if (heap.empty()) throw DomainError("integrate_1d: empty interval");
  auto total = [&]() {
    std::vector<Cell> cells;
    V s = heap.top().val;
    quad_zero(s);
    double e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      quad_axpy(s, 1.0, copy.top().val);
      e += copy.top().err;
      copy.pop();
    }
    return std::make_pair(s, e);
  };
  // running error sum; values are re-summed only when checking convergence
  double errSum = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) { errSum += copy.top().err; copy.pop(); }
  }
  V running = heap.top().val;
  quad_zero(running);
  {
    auto copy = heap;
    while (!copy.empty()) { quad_axpy(running, 1.0, copy.top().val); copy.pop(); }
  }
  int splits = 0;
  while (true) {
    const double tol = std::max(spec.absTolerance, spec.relTolerance * quad_norm(running));
    if (errSum <= tol) {
      auto [s, e] = total();
      const double tol2 = std::max(spec.absTolerance, spec.relTolerance * quad_norm(s));
      if (e <= tol2) {
        out.value = s;
        out.error = e;
        out.converged = true;
        break;
      }
      errSum = e;
      running = s;
    }
    if (splits >= spec.maxSubdivisions) {
      auto [s, e] = total();
      out.value = s;
      out.error = e;
      out.converged = false;
      break;
    }
    Cell worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Cell l = eval(worst.a, mid), r = eval(mid, worst.b);
    errSum += l.err + r.err - worst.err;
    quad_axpy(running, -1.0, worst.val);
    quad_axpy(running, 1.0, l.val);
    quad_axpy(running, 1.0, r.val);
    heap.push(l);
    heap.push(r);
    ++splits;
  }
  out.subdivisions = splits;
  return out;
}

template <typename F>
auto integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec) {
  return integrate_1d(std::forward<F>(f), std::vector<double>{a, b}, spec);
}

// Tensor-product G7K15 on rectangles. The cell error is the sum of the
// per-dimension estimates; the worst cell is bisected along the dimension
// with the larger estimate.
template <typename F>
auto integrate_2d(F&& f, std::vector<double> xBreaks, std::vector<double> yBreaks,
                  const QuadratureSpec& spec)
    -> QuadResult<std::decay_t<decltype(f(0.0, 0.0))>> {
  using V = std::decay_t<decltype(f(0.0, 0.0))>;
  struct Cell {
    double x0, x1, y0, y1;
    V val;
    double err, ex, ey;
  };
  const auto& R = detail::rule15();
  QuadResult<V> out;
  auto eval = [&](double x0, double x1, double y0, double y1) {
    const double cx = 0.5 * (x0 + x1), hx = 0.5 * (x1 - x0);
    const double cy = 0.5 * (y0 + y1), hy = 0.5 * (y1 - y0);
    V kk, gk, kg;
    bool init = false;
    for (int i = 0; i < 15; ++i) {
      const double x = cx + hx * R.x[i];
      for (int j = 0; j < 15; ++j) {
        const V v = f(x, cy + hy * R.x[j]);
        if (!init) {
          kk = v; gk = v; kg = v;
          quad_zero(kk); quad_zero(gk); quad_zero(kg);
          init = true;
        }
        const double w = hx * hy;
        quad_axpy(kk, w * R.wk[i] * R.wk[j], v);
        if (R.wg[i] != 0.0) quad_axpy(gk, w * R.wg[i] * R.wk[j], v);
        if (R.wg[j] != 0.0) quad_axpy(kg, w * R.wk[i] * R.wg[j], v);
      }
    }
    out.evaluations += 225;
    const double ex = quad_norm(quad_diff(kk, gk));
    const double ey = quad_norm(quad_diff(kk, kg));
    return Cell{x0, x1, y0, y1, kk, ex + ey, ex, ey};
  };
  std::sort(xBreaks.begin(), xBreaks.end());
  std::sort(yBreaks.begin(), yBreaks.end());
  if (xBreaks.size() < 2 || yBreaks.size() < 2)
    throw DomainError("integrate_2d needs at least two breakpoints per axis");
  auto cmp = [](const Cell& l, const Cell& r) { return l.err < r.err; };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i + 1 < xBreaks.size(); ++i)
    for (std::size_t j = 0; j + 1 < yBreaks.size(); ++j)
      if (xBreaks[i + 1] > xBreaks[i] && yBreaks[j + 1] > yBreaks[j])
        heap.push(eval(xBreaks[i], xBreaks[i + 1], yBreaks[j], yBreaks[j + 1]));
  if (heap.empty()) throw DomainError("integrate_2d: empty domain");
  V running = heap.top().val;
  quad_zero(running);
  double errSum = 0.0;
  {
    auto copy = heap;
    while (!copy.empty()) {
      quad_axpy(running, 1.0, copy.top().val);
      errSum += copy.top().err;
      copy.pop();
    }
  }
  auto total = [&]() {
    V s = running;
    quad_zero(s);
    double e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      quad_axpy(s, 1.0, copy.top().val);
      e += copy.top().err;
      copy.pop();
    }
    return std::make_pair(s, e);
  };
  int splits = 0;
  while (true) {
    const double tol = std::max(spec.absTolerance, spec.relTolerance * quad_norm(running));
    if (errSum <= tol) {
      auto [s, e] = total();
      const double tol2 = std::max(spec.absTolerance, spec.relTolerance * quad_norm(s));
      if (e <= tol2) {
        out.value = s;
        out.error = e;
        out.converged = true;
        break;
      }
      running = s;
      errSum = e;
    }
    if (splits >= spec.maxSubdivisions) {
      auto [s, e] = total();
      out.value = s;
      out.error = e;
      out.converged = false;
      break;
    }
    Cell w = heap.top();
    heap.pop();
    Cell a, b;
    if (w.ex >= w.ey) {
      const double m = 0.5 * (w.x0 + w.x1);
      a = eval(w.x0, m, w.y0, w.y1);
      b = eval(m, w.x1, w.y0, w.y1);
    } else {
      const double m = 0.5 * (w.y0 + w.y1);
      a = eval(w.x0, w.x1, w.y0, m);
      b = eval(w.x0, w.x1, m, w.y1);
    }
    errSum += a.err + b.err - w.err;
    quad_axpy(running, -1.0, w.val);
    quad_axpy(running, 1.0, a.val);
    quad_axpy(running, 1.0, b.val);
    heap.push(std::move(a));
    heap.push(std::move(b));
    ++splits;
  }
  out.subdivisions = splits;
  return out;
}

template <typename V>
const V& require_converged(const QuadResult<V>& r, const char* what) {
  if (!r.converged)
    throw NumericError(std::string(what) + ": quadrature tolerance not met", r.error);
  return r.value;
}

// Gauss-Legendre nodes and weights on [-1,1] (Newton iteration on P_n).
struct GaussRule {
  std::vector<double> x, w;
};
GaussRule gauss_legendre(int n);

// dyadic breakpoints lo, 2lo, 4lo, ... capped at hi; 0 prepended when lo > 0
std::vector<double> dyadic_breaks(double lo, double hi, double first = 0.0);

}  // namespace g2lab
