#pragma once

#include <array>
#include <cmath>

#include "hmcf/autodiff/dual.hpp"
#include "hmcf/autodiff/jet.hpp"
#include "hmcf/geometry/shapes.hpp"
#include "hmcf/geometry/vec.hpp"

namespace hmcf::geometry {

/// γ0(u) for any scalar type (double, long double, jets).
template <class T>
Vec<T, 2> curve_position(const CurveShape& shape, const T& u) {
  using std::cos;
  using std::sin;
  return {{shape.a * cos(u), shape.b * sin(u)}};
}

Vec2 curve_initial(const CurveShape& shape, double u);

/// Inner unit normal of the initial curve: rotated tangent, oriented toward the centroid.
Vec2 curve_inner_normal(const CurveShape& shape, double u);

/// γ1(u) = −r1(u)·N0(u).
Vec2 curve_initial_velocity(const CurveShape& shape, const VelocityProfile& profile, double u);

/// The partial derivatives of γ(u, t) that enter the curve residual.
template <class T>
struct CurveDerivatives {
  Vec<T, 2> du, dt, duu, dut, dtt;
};

/// f_c = γ_tt + βγ_t − [γ_uu/|γ_u|² − (γ_u·γ_uu)γ_u/|γ_u|⁴] + (γ_ut·γ_t)γ_u/|γ_u|².
/// The caller guarantees |γ_u| > 0.
template <class T>
Vec<T, 2> curve_residual(const CurveDerivatives<T>& d, double beta) {
  const T speed2 = norm_squared(d.du);
  const T inv = T(1.0) / speed2;
  const T along = dot(d.du, d.duu) * inv * inv;
  const T tangential = dot(d.dut, d.dt) * inv;
  Vec<T, 2> f;
  for (std::size_t k = 0; k < 2; ++k) {
    const T curvature = d.duu[k] * inv - along * d.du[k];
    f[k] = d.dtt[k] + d.dt[k] * beta - curvature + tangential * d.du[k];
  }
  return f;
}

/// Extracts derivatives from γ jets seeded over (u, t).
template <class T>
CurveDerivatives<T> curve_derivatives(const std::array<ad::ScalarJet2<2, T>, 2>& gamma) {
  CurveDerivatives<T> d;
  for (std::size_t k = 0; k < 2; ++k) {
    d.du[k] = gamma[k].grad[0];
    d.dt[k] = gamma[k].grad[1];
    d.duu[k] = gamma[k].hess(0, 0);
    d.dut[k] = gamma[k].hess(0, 1);
    d.dtt[k] = gamma[k].hess(1, 1);
  }
  return d;
}

/// Residual from jets; throws SingularParametrization when |γ_u| ≤ tangent_eps.
Vec2 curve_residual(const std::array<ad::ScalarJet2<2>, 2>& gamma, const FlowParams& flow,
                    const ResidualOptions& options = {});

}  // namespace hmcf::geometry
