#pragma once

#include <array>
#include <cmath>

#include "hmcf/autodiff/jet.hpp"
#include "hmcf/geometry/shapes.hpp"
#include "hmcf/geometry/vec.hpp"

namespace hmcf::geometry {

/// X0(u1, u2) for any scalar type.
template <class T>
Vec<T, 3> surface_position(const SurfaceShape& shape, const T& u1, const T& u2) {
  using std::cos;
  using std::sin;
  if (shape.kind == SurfaceShape::Kind::Torus) {
    const T ring = shape.major + shape.minor * cos(u2);
    return {{ring * cos(u1), ring * sin(u1), shape.minor * sin(u2)}};
  }
  const T s1 = sin(u1);
  return {{shape.a * s1 * cos(u2), shape.b * s1 * sin(u2), shape.c * cos(u1)}};
}

Vec3 surface_initial(const SurfaceShape& shape, double u1, double u2);

/// Outward unit normal of the initial surface (the inner normal is its negative).
/// Regular at the poles of sphere and ellipsoid.
Vec3 surface_outward_normal(const SurfaceShape& shape, double u1, double u2);

/// X1 = −r1(u1)·N0 where N0 is the inner unit normal.
Vec3 surface_initial_velocity(const SurfaceShape& shape, const VelocityProfile& profile, double u1, double u2);

struct Metric {
  std::array<std::array<double, 2>, 2> g{};
  std::array<std::array<double, 2>, 2> g_inv{};
  double det = 0.0;
};

/// g_ij = X_{u_i}·X_{u_j}; throws SingularParametrization when det g ≤ metric_eps.
Metric surface_metric(const Vec3& x_u1, const Vec3& x_u2, double metric_eps = 1e-12);

template <class T>
struct SurfaceDerivatives {
  Vec<T, 3> d1, d2, dt, d11, d12, d22, d1t, d2t, dtt;
};

/// f_s = X_tt + βX_t − Δ_S X + sign·Σ g^{ij}(X_t·X_{t u_i}) X_{u_j}.
///
/// Δ_S X = (1/√g) ∂_i(g^{ij}√g X_j) is expanded by the product rule:
///   g^{ij} X_ij + (∂_i g^{ij} + g^{ij} ∂_i ln√g) X_j,
/// with ∂_k g_ij = X_ik·X_j + X_i·X_jk, ∂_k g⁻¹ = −g⁻¹(∂_k g)g⁻¹ and
/// ∂_k ln√g = ½ tr(g⁻¹ ∂_k g). The caller guarantees det g > 0.
template <class T>
Vec<T, 3> surface_residual(const SurfaceDerivatives<T>& d, double beta, int tangential_sign) {
  const T g11 = dot(d.d1, d.d1);
  const T g12 = dot(d.d1, d.d2);
  const T g22 = dot(d.d2, d.d2);
  const T inv_det = T(1.0) / (g11 * g22 - g12 * g12);
  const T i11 = g22 * inv_det;
  const T i12 = -(g12 * inv_det);
  const T i22 = g11 * inv_det;

  // ∂_k g for k = 1, 2.
  const T a11 = T(2.0) * dot(d.d11, d.d1);
  const T a12 = dot(d.d11, d.d2) + dot(d.d1, d.d12);
  const T a22 = T(2.0) * dot(d.d12, d.d2);
  const T b11 = T(2.0) * dot(d.d12, d.d1);
  const T b12 = dot(d.d12, d.d2) + dot(d.d1, d.d22);
  const T b22 = T(2.0) * dot(d.d22, d.d2);

  // ∂_k g⁻¹ = −g⁻¹ (∂_k g) g⁻¹ for symmetric 2×2 matrices.
  auto sandwich = [&](const T& m11, const T& m12, const T& m22, T& o11, T& o12, T& o22) {
    const T p11 = i11 * m11 + i12 * m12;
    const T p12 = i11 * m12 + i12 * m22;
    const T p21 = i12 * m11 + i22 * m12;
    const T p22 = i12 * m12 + i22 * m22;
    o11 = -(p11 * i11 + p12 * i12);
    o12 = -(p11 * i12 + p12 * i22);
    o22 = -(p21 * i12 + p22 * i22);
  };
  T da11, da12, da22, db11, db12, db22;
  sandwich(a11, a12, a22, da11, da12, da22);
  sandwich(b11, b12, b22, db11, db12, db22);

  const T log1 = T(0.5) * (i11 * a11 + T(2.0) * i12 * a12 + i22 * a22);
  const T log2 = T(0.5) * (i11 * b11 + T(2.0) * i12 * b12 + i22 * b22);

  const T c1 = da11 + db12 + i11 * log1 + i12 * log2;
  const T c2 = da12 + db22 + i12 * log1 + i22 * log2;

  const T e1 = dot(d.dt, d.d1t);
  const T e2 = dot(d.dt, d.d2t);
  const T t1 = i11 * e1 + i12 * e2;
  const T t2 = i12 * e1 + i22 * e2;
  const double sign = static_cast<double>(tangential_sign);

  Vec<T, 3> f;
  for (std::size_t k = 0; k < 3; ++k) {
    const T laplace = i11 * d.d11[k] + T(2.0) * i12 * d.d12[k] + i22 * d.d22[k] + c1 * d.d1[k] + c2 * d.d2[k];
    const T tangential = t1 * d.d1[k] + t2 * d.d2[k];
    f[k] = d.dtt[k] + d.dt[k] * beta - laplace + tangential * sign;
  }
  return f;
}

/// Extracts derivatives from X jets seeded over (u1, u2, t).
template <class T>
SurfaceDerivatives<T> surface_derivatives(const std::array<ad::ScalarJet2<3, T>, 3>& x) {
  SurfaceDerivatives<T> d;
  for (std::size_t k = 0; k < 3; ++k) {
    d.d1[k] = x[k].grad[0];
    d.d2[k] = x[k].grad[1];
    d.dt[k] = x[k].grad[2];
    d.d11[k] = x[k].hess(0, 0);
    d.d12[k] = x[k].hess(0, 1);
    d.d22[k] = x[k].hess(1, 1);
    d.d1t[k] = x[k].hess(0, 2);
    d.d2t[k] = x[k].hess(1, 2);
    d.dtt[k] = x[k].hess(2, 2);
  }
  return d;
}

/// Residual from jets; throws SingularParametrization on a degenerate metric.
Vec3 surface_residual(const std::array<ad::ScalarJet2<3>, 3>& x, const FlowParams& flow,
                      const ResidualOptions& options = {});

}  // namespace hmcf::geometry
