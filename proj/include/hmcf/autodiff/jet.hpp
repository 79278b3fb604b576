#pragma once

// Second-order forward jets over a handful of input coordinates.
//
// A ScalarJet2<D> carries f, ∇f and the symmetric Hessian of f with respect to
// D seeded inputs. The Hessian is stored packed (upper triangle, row major),
// so symmetry holds by construction.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "hmcf/error.hpp"

namespace hmcf::ad {

/// Number of packed Hessian entries for D inputs.
constexpr std::size_t packed_size(std::size_t d) { return d * (d + 1) / 2; }

/// Packed index of (i, j) in the upper-triangular row-major layout.
constexpr std::size_t packed_index(std::size_t d, std::size_t i, std::size_t j) {
  if (i > j) {
    const std::size_t tmp = i;
    i = j;
    j = tmp;
  }
  return i * d - i * (i - 1) / 2 + (j - i);
}

/// Throws ConfigError unless d ∈ {2, 3}.
void validate_input_dim(std::size_t d);

template <std::size_t D, class T = double>
struct ScalarJet2 {
  static_assert(D == 2 || D == 3, "jets are defined over two or three inputs");
  static constexpr std::size_t kDim = D;
  static constexpr std::size_t kPacked = packed_size(D);

  T value{};
  std::array<T, D> grad{};
  std::array<T, kPacked> hess_packed{};

  ScalarJet2() = default;
  /// Constant jet: derivatives are zero.
  ScalarJet2(T v) : value(v) {}  // NOLINT(google-explicit-constructor)

  T hess(std::size_t i, std::size_t j) const { return hess_packed[packed_index(D, i, j)]; }
  void set_hess(std::size_t i, std::size_t j, T v) { hess_packed[packed_index(D, i, j)] = v; }

  ScalarJet2& operator+=(const ScalarJet2& o) {
    value += o.value;
    for (std::size_t i = 0; i < D; ++i) grad[i] += o.grad[i];
    for (std::size_t k = 0; k < kPacked; ++k) hess_packed[k] += o.hess_packed[k];
    return *this;
  }
  ScalarJet2& operator-=(const ScalarJet2& o) {
    value -= o.value;
    for (std::size_t i = 0; i < D; ++i) grad[i] -= o.grad[i];
    for (std::size_t k = 0; k < kPacked; ++k) hess_packed[k] -= o.hess_packed[k];
    return *this;
  }
  ScalarJet2& operator*=(T s) {
    value *= s;
    for (auto& g : grad) g *= s;
    for (auto& h : hess_packed) h *= s;
    return *this;
  }
  ScalarJet2& operator*=(const ScalarJet2& o) { return *this = *this * o; }
  ScalarJet2& operator/=(const ScalarJet2& o) { return *this = *this / o; }

  friend ScalarJet2 operator+(ScalarJet2 a, const ScalarJet2& b) { return a += b; }
  friend ScalarJet2 operator-(ScalarJet2 a, const ScalarJet2& b) { return a -= b; }
  friend ScalarJet2 operator-(ScalarJet2 a) { return a *= T(-1); }
  friend ScalarJet2 operator+(ScalarJet2 a, T s) {
    a.value += s;
    return a;
  }
  friend ScalarJet2 operator+(T s, ScalarJet2 a) { return a + s; }
  friend ScalarJet2 operator-(ScalarJet2 a, T s) {
    a.value -= s;
    return a;
  }
  friend ScalarJet2 operator-(T s, const ScalarJet2& a) { return -a + s; }
  friend ScalarJet2 operator*(ScalarJet2 a, T s) { return a *= s; }
  friend ScalarJet2 operator*(T s, ScalarJet2 a) { return a *= s; }

  friend ScalarJet2 operator*(const ScalarJet2& a, const ScalarJet2& b) {
    ScalarJet2 r;
    r.value = a.value * b.value;
    for (std::size_t i = 0; i < D; ++i) r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
    for (std::size_t i = 0; i < D; ++i) {
      for (std::size_t j = i; j < D; ++j) {
        const std::size_t k = packed_index(D, i, j);
        r.hess_packed[k] = a.hess_packed[k] * b.value + a.value * b.hess_packed[k] +
                           a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
      }
    }
    return r;
  }

  friend ScalarJet2 operator/(const ScalarJet2& a, const ScalarJet2& b) {
    if (b.value == T(0)) throw DomainError("jet division by zero", static_cast<double>(b.value));
    const T inv = T(1) / b.value;
    return a * chain(b, inv, -inv * inv, T(2) * inv * inv * inv);
  }
  friend ScalarJet2 operator/(ScalarJet2 a, T s) {
    if (s == T(0)) throw DomainError("jet division by zero", 0.0);
    return a *= T(1) / s;
  }
  friend ScalarJet2 operator/(T s, const ScalarJet2& b) { return ScalarJet2(s) / b; }

  /// Applies a scalar function given its value and first two derivatives at a.value.
  friend ScalarJet2 chain(const ScalarJet2& a, T f, T df, T d2f) {
    ScalarJet2 r;
    r.value = f;
    for (std::size_t i = 0; i < D; ++i) r.grad[i] = df * a.grad[i];
    for (std::size_t i = 0; i < D; ++i) {
      for (std::size_t j = i; j < D; ++j) {
        const std::size_t k = packed_index(D, i, j);
        r.hess_packed[k] = d2f * a.grad[i] * a.grad[j] + df * a.hess_packed[k];
      }
    }
    return r;
  }
};

/// Seeds D independent coordinates: value = input, grad = e_i, hess = 0.
template <std::size_t D, class T = double>
std::array<ScalarJet2<D, T>, D> seed(std::span<const T> inputs) {
  validate_input_dim(D);
  if (inputs.size() != D) {
    throw ConfigError("jet seed expects " + std::to_string(D) + " inputs, got " +
                      std::to_string(inputs.size()));
  }
  std::array<ScalarJet2<D, T>, D> out{};
  for (std::size_t i = 0; i < D; ++i) {
    out[i].value = inputs[i];
    out[i].grad[i] = T(1);
  }
  return out;
}

template <std::size_t D, class T>
ScalarJet2<D, T> sqrt(const ScalarJet2<D, T>& a) {
  using std::sqrt;
  if (!(a.value > T(0))) throw DomainError("jet sqrt of non-positive value", static_cast<double>(a.value));
  const T s = sqrt(a.value);
  const T ds = T(0.5) / s;
  return chain(a, s, ds, -ds / (T(2) * a.value));
}

template <std::size_t D, class T>
ScalarJet2<D, T> tanh(const ScalarJet2<D, T>& a) {
  using std::tanh;
  const T v = tanh(a.value);
  const T s = T(1) - v * v;
  return chain(a, v, s, T(-2) * v * s);
}

template <std::size_t D, class T>
ScalarJet2<D, T> sin(const ScalarJet2<D, T>& a) {
  using std::cos;
  using std::sin;
  const T s = sin(a.value);
  return chain(a, s, cos(a.value), -s);
}

template <std::size_t D, class T>
ScalarJet2<D, T> cos(const ScalarJet2<D, T>& a) {
  using std::cos;
  using std::sin;
  const T c = cos(a.value);
  return chain(a, c, -sin(a.value), -c);
}

template <std::size_t D, class T>
ScalarJet2<D, T> exp(const ScalarJet2<D, T>& a) {
  using std::exp;
  const T e = exp(a.value);
  return chain(a, e, e, e);
}

template <std::size_t D, class T>
ScalarJet2<D, T> log(const ScalarJet2<D, T>& a) {
  using std::log;
  if (!(a.value > T(0))) throw DomainError("jet log of non-positive value", static_cast<double>(a.value));
  const T inv = T(1) / a.value;
  return chain(a, log(a.value), inv, -inv * inv);
}

}  // namespace hmcf::ad
