#include <cmath>
#include <string>

#include "hmcf/error.hpp"
#include "hmcf/geometry/curve.hpp"
#include "hmcf/geometry/surface.hpp"

namespace hmcf::geometry {

void CurveShape::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError("curve semi-axes must be positive and finite");
  }
  if (kind == Kind::Circle && a != b) throw ConfigError("circle must have equal semi-axes");
}

void SurfaceShape::validate() const {
  if (kind == Kind::Torus) {
    if (!(minor > 0.0) || !(major > minor) || !std::isfinite(major)) {
      throw ConfigError("torus requires 0 < r < R");
    }
    return;
  }
  if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0) || !std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw ConfigError("surface radii must be positive and finite");
  }
  if (kind == Kind::Sphere && (a != b || b != c)) throw ConfigError("sphere must have equal semi-axes");
}

std::string SurfaceShape::name() const {
  switch (kind) {
    case Kind::Sphere:
      return "sphere";
    case Kind::Ellipsoid:
      return "ellipsoid";
    case Kind::Torus:
      return "torus";
  }
  return "surface";
}

std::string VelocityProfile::name() const {
  switch (kind) {
    case Kind::SinU:
      return "sin_u";
    case Kind::CosU:
      return "cos_u";
    case Kind::Constant:
      break;
  }
  return "constant";
}

// --- curves ---------------------------------------------------------------

Vec2 curve_initial(const CurveShape& shape, double u) { return curve_position(shape, u); }

Vec2 curve_inner_normal(const CurveShape& shape, double u) {
  const Vec2 tangent{{-shape.a * std::sin(u), shape.b * std::cos(u)}};
  const double len = std::sqrt(norm_squared(tangent));
  if (!(len > 0.0)) throw GeometryError("degenerate tangent of initial curve at u=" + std::to_string(u));
  Vec2 normal{{-tangent[1] / len, tangent[0] / len}};
  const Vec2 to_centroid = Vec2{{0.0, 0.0}} - curve_initial(shape, u);
  if (dot(normal, to_centroid) < 0.0) normal = -1.0 * normal;
  return normal;
}

Vec2 curve_initial_velocity(const CurveShape& shape, const VelocityProfile& profile, double u) {
  return -profile.speed(u) * curve_inner_normal(shape, u);
}

Vec2 curve_residual(const std::array<ad::ScalarJet2<2>, 2>& gamma, const FlowParams& flow,
                    const ResidualOptions& options) {
  const auto d = curve_derivatives(gamma);
  const double speed = std::sqrt(norm_squared(d.du));
  if (speed <= options.tangent_eps) {
    throw SingularParametrization("curve tangent vanishes: |gamma_u| = " + std::to_string(speed));
  }
  return curve_residual(d, flow.beta);
}

// --- surfaces -------------------------------------------------------------

Vec3 surface_initial(const SurfaceShape& shape, double u1, double u2) { return surface_position(shape, u1, u2); }

Vec3 surface_outward_normal(const SurfaceShape& shape, double u1, double u2) {
  Vec3 n;
  if (shape.kind == SurfaceShape::Kind::Torus) {
    n = {{std::cos(u1) * std::cos(u2), std::sin(u1) * std::cos(u2), std::sin(u2)}};
  } else {
    // X_u1 × X_u2 divided by sin u1, which stays finite through the poles.
    const double s1 = std::sin(u1);
    n = {{shape.b * shape.c * s1 * std::cos(u2), shape.a * shape.c * s1 * std::sin(u2),
          shape.a * shape.b * std::cos(u1)}};
  }
  const double len = std::sqrt(norm_squared(n));
  if (!(len > 0.0)) throw GeometryError("degenerate normal of initial surface");
  return (1.0 / len) * n;
}

Vec3 surface_initial_velocity(const SurfaceShape& shape, const VelocityProfile& profile, double u1, double u2) {
  return profile.speed(u1) * surface_outward_normal(shape, u1, u2);
}

Metric surface_metric(const Vec3& x_u1, const Vec3& x_u2, double metric_eps) {
  Metric m;
  m.g[0][0] = dot(x_u1, x_u1);
  m.g[0][1] = m.g[1][0] = dot(x_u1, x_u2);
  m.g[1][1] = dot(x_u2, x_u2);
  m.det = m.g[0][0] * m.g[1][1] - m.g[0][1] * m.g[0][1];
  if (!(m.det > metric_eps)) {
    throw SingularParametrization("degenerate surface metric: det g = " + std::to_string(m.det));
  }
  m.g_inv[0][0] = m.g[1][1] / m.det;
  m.g_inv[1][1] = m.g[0][0] / m.det;
  m.g_inv[0][1] = m.g_inv[1][0] = -m.g[0][1] / m.det;
  return m;
}

Vec3 surface_residual(const std::array<ad::ScalarJet2<3>, 3>& x, const FlowParams& flow,
                      const ResidualOptions& options) {
  const auto d = surface_derivatives(x);
  surface_metric(d.d1, d.d2, options.metric_eps);
  return surface_residual(d, flow.beta, options.tangential_sign);
}

}  // namespace hmcf::geometry
