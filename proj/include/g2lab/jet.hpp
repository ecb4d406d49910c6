#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace g2lab {

// Truncated Taylor series in one variable: c[l] is the l-th Taylor coefficient.
template <typename T, int K>
struct Jet {
  std::array<T, K + 1> c{};

  Jet() = default;
  Jet(const T& v) { c[0] = v; }  // NOLINT: scalars promote

  static Jet variable(const T& v) {
    Jet j(v);
    if constexpr (K >= 1) j.c[1] = T(1);
    return j;
  }

  const T& value() const { return c[0]; }

  T derivative(int l) const {
    double f = 1.0;
    for (int i = 2; i <= l; ++i) f *= i;
    return c[l] * f;
  }

  Jet& operator+=(const Jet& o) { for (int i = 0; i <= K; ++i) c[i] += o.c[i]; return *this; }
  Jet& operator-=(const Jet& o) { for (int i = 0; i <= K; ++i) c[i] -= o.c[i]; return *this; }
  Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }
  Jet& operator*=(const T& s) { for (auto& x : c) x *= s; return *this; }
  Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { for (auto& x : a.c) x = -x; return a; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  }
  friend Jet operator*(Jet a, const T& s) { return a *= s; }
  friend Jet operator*(const T& s, Jet a) { return a *= s; }

  friend Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    for (int i = 0; i <= K; ++i) {
      T acc = a.c[i];
      for (int j = 1; j <= i; ++j) acc -= b.c[j] * r.c[i - j];
      r.c[i] = acc / b.c[0];
    }
    return r;
  }
  friend Jet operator/(Jet a, const T& s) {
    for (auto& x : a.c) x /= s;
    return a;
  }
  friend Jet operator/(const T& s, const Jet& b) { return Jet(s) / b; }
};

template <typename T, int K>
Jet<T, K> exp(const Jet<T, K>& a) {
  using std::exp;
  Jet<T, K> r;
  r.c[0] = exp(a.c[0]);
  // r' = a' r
  for (int n = 1; n <= K; ++n) {
    T acc{};
    for (int k = 1; k <= n; ++k) acc += T(double(k)) * a.c[k] * r.c[n - k];
    r.c[n] = acc / T(double(n));
  }
  return r;
}

template <typename T, int K>
Jet<T, K> sqrt(const Jet<T, K>& a) {
  using std::sqrt;
  Jet<T, K> r;
  r.c[0] = sqrt(a.c[0]);
  for (int n = 1; n <= K; ++n) {
    T acc = a.c[n];
    for (int k = 1; k < n; ++k) acc -= r.c[k] * r.c[n - k];
    r.c[n] = acc / (T(2.0) * r.c[0]);
  }
  return r;
}

// scalar helpers so templated code can branch on the base value
inline double base_real(double x) { return x; }
inline double base_real(const std::complex<double>& x) { return x.real(); }
template <typename T, int K>
double base_real(const Jet<T, K>& x) { return base_real(x.c[0]); }

template <typename T>
struct is_jet : std::false_type {};
template <typename T, int K>
struct is_jet<Jet<T, K>> : std::true_type {};

}  // namespace g2lab
