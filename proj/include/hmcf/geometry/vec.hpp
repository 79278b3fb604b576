#pragma once

#include <array>
#include <cstddef>

namespace hmcf::geometry {

/// Fixed-size vector over an arbitrary scalar (double, long double, Dual).
template <class T, std::size_t N>
struct Vec {
  std::array<T, N> c{};

  T& operator[](std::size_t i) { return c[i]; }
  const T& operator[](std::size_t i) const { return c[i]; }

  friend Vec operator+(const Vec& a, const Vec& b) {
    Vec r;
    for (std::size_t i = 0; i < N; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend Vec operator-(const Vec& a, const Vec& b) {
    Vec r;
    for (std::size_t i = 0; i < N; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend Vec operator*(const T& s, const Vec& a) {
    Vec r;
    for (std::size_t i = 0; i < N; ++i) r.c[i] = s * a.c[i];
    return r;
  }
  Vec& operator+=(const Vec& o) {
    for (std::size_t i = 0; i < N; ++i) c[i] = c[i] + o.c[i];
    return *this;
  }
};

template <class T, std::size_t N>
T dot(const Vec<T, N>& a, const Vec<T, N>& b) {
  T r = a.c[0] * b.c[0];
  for (std::size_t i = 1; i < N; ++i) r = r + a.c[i] * b.c[i];
  return r;
}

template <class T, std::size_t N>
T norm_squared(const Vec<T, N>& a) {
  return dot(a, a);
}

using Vec2 = Vec<double, 2>;
using Vec3 = Vec<double, 3>;

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]}};
}

}  // namespace hmcf::geometry
