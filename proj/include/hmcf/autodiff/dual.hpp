#pragma once

// First-order forward dual number with N tangent directions.
//
// Used to differentiate a pointwise residual with respect to the network-output
// derivatives it consumes; N is small (≤ 27) and fixed per residual.

#include <array>
#include <cmath>
#include <cstddef>

namespace hmcf::ad {

template <std::size_t N>
struct Dual {
  double value = 0.0;
  std::array<double, N> tangent{};

  Dual() = default;
  Dual(double v) : value(v) {}  // NOLINT(google-explicit-constructor)

  static Dual variable(double v, std::size_t slot) {
    Dual d(v);
    d.tangent[slot] = 1.0;
    return d;
  }

  Dual& operator+=(const Dual& o) {
    value += o.value;
    for (std::size_t i = 0; i < N; ++i) tangent[i] += o.tangent[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value -= o.value;
    for (std::size_t i = 0; i < N; ++i) tangent[i] -= o.tangent[i];
    return *this;
  }
  Dual& operator*=(double s) {
    value *= s;
    for (auto& t : tangent) t *= s;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator-(Dual a) { return a *= -1.0; }
  friend Dual operator*(Dual a, double s) { return a *= s; }
  friend Dual operator*(double s, Dual a) { return a *= s; }
  friend Dual operator+(Dual a, double s) {
    a.value += s;
    return a;
  }
  friend Dual operator-(Dual a, double s) {
    a.value -= s;
    return a;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.value * b.value);
    for (std::size_t i = 0; i < N; ++i) r.tangent[i] = a.tangent[i] * b.value + a.value * b.tangent[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    const double inv = 1.0 / b.value;
    Dual r(a.value * inv);
    for (std::size_t i = 0; i < N; ++i) r.tangent[i] = (a.tangent[i] - r.value * b.tangent[i]) * inv;
    return r;
  }
  friend Dual operator/(Dual a, double s) { return a *= 1.0 / s; }
};

template <std::size_t N>
Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.value);
  Dual<N> r(s);
  const double ds = 0.5 / s;
  for (std::size_t i = 0; i < N; ++i) r.tangent[i] = ds * a.tangent[i];
  return r;
}

/// Primal value of a scalar that is either plain or dual.
inline double primal(double x) { return x; }
inline long double primal(long double x) { return x; }
template <std::size_t N>
double primal(const Dual<N>& x) {
  return x.value;
}

}  // namespace hmcf::ad
