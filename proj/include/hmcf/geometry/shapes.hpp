#pragma once

#include <cmath>
#include <numbers>
#include <string>

namespace hmcf::geometry {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Initial closed plane curve. Circles are ellipses with equal semi-axes.
struct CurveShape {
  enum class Kind { Circle, Ellipse };
  Kind kind = Kind::Circle;
  double a = 1.0;  // x semi-axis (r0 for circles)
  double b = 1.0;  // y semi-axis

  static CurveShape circle(double r0) { return {Kind::Circle, r0, r0}; }
  static CurveShape ellipse(double a, double b) { return {Kind::Ellipse, a, b}; }
  double radius() const { return a; }
  void validate() const;
  std::string name() const { return kind == Kind::Circle ? "circle" : "ellipse"; }
};

/// Initial closed surface. Spheres are ellipsoids with equal semi-axes.
struct SurfaceShape {
  enum class Kind { Sphere, Ellipsoid, Torus };
  Kind kind = Kind::Sphere;
  double a = 1.0;  // ellipsoid semi-axes (r0 for spheres)
  double b = 1.0;
  double c = 1.0;
  double major = 2.0;  // torus R
  double minor = 1.0;  // torus r

  static SurfaceShape sphere(double r0) { return {Kind::Sphere, r0, r0, r0, 0.0, 0.0}; }
  static SurfaceShape ellipsoid(double a, double b, double c) { return {Kind::Ellipsoid, a, b, c, 0.0, 0.0}; }
  static SurfaceShape torus(double major, double minor) { return {Kind::Torus, 0.0, 0.0, 0.0, major, minor}; }
  double radius() const { return a; }
  bool has_poles() const { return kind != Kind::Torus; }
  /// Upper bound of u1: π for polar parametrizations, 2π for the torus.
  double u1_max() const { return has_poles() ? std::numbers::pi : kTwoPi; }
  void validate() const;
  std::string name() const;
};

/// Signed normal speed of the initial velocity as a function of one angle:
/// constant r1, r1·sin(u) or r1·cos(u). Positive speeds point outward.
struct VelocityProfile {
  enum class Kind { Constant, SinU, CosU };
  Kind kind = Kind::Constant;
  double r1 = 0.0;

  double speed(double angle) const {
    switch (kind) {
      case Kind::SinU:
        return r1 * std::sin(angle);
      case Kind::CosU:
        return r1 * std::cos(angle);
      case Kind::Constant:
        break;
    }
    return r1;
  }
  std::string name() const;
};

/// Dissipative coefficient β of ∂²F/∂t² + β ∂F/∂t.
struct FlowParams {
  double beta = 0.0;
};

/// Numerical guards and sign convention shared by the residual operators.
struct ResidualOptions {
  double tangent_eps = 1e-8;   // |γ_u| below this is singular
  double metric_eps = 1e-12;   // det g below this is degenerate
  int tangential_sign = -1;    // coefficient of Σ g^{ij}(X_t·X_{t u_i}) X_{u_j} in f_s
};

}  // namespace hmcf::geometry
