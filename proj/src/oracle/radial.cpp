#include "hmcf/oracle/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hmcf/error.hpp"
#include "hmcf/oracle/special.hpp"

namespace hmcf::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

// Coefficient α(R) in r(t) = R·exp(−erf⁻¹(α t)²): √(2/(R²π)) for curves, √(4/(R²π)) for spheres.
double alpha(RadialKind kind, double radius) {
  const double num = kind == RadialKind::Curve ? 2.0 : 4.0;
  return std::sqrt(num / (radius * radius * kPi));
}

// Exponent in the peak radius r0·e^{e}: r1²/2 for curves, r1²/4 for spheres.
double peak_exponent(RadialKind kind, double r1) { return kind == RadialKind::Curve ? 0.5 * r1 * r1 : 0.25 * r1 * r1; }

void check_inputs(double r0, double r1) {
  if (!(r0 > 0.0)) throw DomainError("radial closed form requires r0 > 0", r0);
  if (r1 < 0.0) throw DomainError("radial closed form is stated for r1 >= 0 only", r1);
}

}  // namespace

double curvature_factor(RadialKind kind) { return kind == RadialKind::Curve ? 1.0 : 2.0; }

std::string to_string(RadialKind kind) { return kind == RadialKind::Curve ? "curve" : "sphere"; }

double closed_form_turning_time(RadialKind kind, double r0, double r1) {
  check_inputs(r0, r1);
  if (r1 == 0.0) return 0.0;
  return std::sqrt(kPi / 2.0) * r0 * std::exp(peak_exponent(kind, r1)) * std::erf(r1 / std::sqrt(2.0));
}

double closed_form_peak_radius(RadialKind kind, double r0, double r1) {
  check_inputs(r0, r1);
  return r0 * std::exp(peak_exponent(kind, r1));
}

double closed_form_collapse_time(RadialKind kind, double r0, double r1) {
  check_inputs(r0, r1);
  if (r1 == 0.0) return 1.0 / alpha(kind, r0);
  return closed_form_turning_time(kind, r0, r1) + 1.0 / alpha(kind, closed_form_peak_radius(kind, r0, r1));
}

double radial_closed_form(RadialKind kind, double r0, double r1, double t) {
  check_inputs(r0, r1);
  const double collapse = closed_form_collapse_time(kind, r0, r1);
  if (t < 0.0 || t >= collapse) {
    throw DomainError("time outside [0, collapse); collapse time is " + std::to_string(collapse), t);
  }
  if (r1 == 0.0) {
    const double w = erf_inv(t * alpha(kind, r0));
    return r0 * std::exp(-w * w);
  }
  const double peak = closed_form_peak_radius(kind, r0, r1);
  const double turning = closed_form_turning_time(kind, r0, r1);
  if (t <= turning) {
    const double arg = -t * std::exp(-peak_exponent(kind, r1)) * alpha(kind, r0) + std::erf(r1 / std::sqrt(2.0));
    const double w = erf_inv(arg);
    return peak * std::exp(-w * w);
  }
  const double w = erf_inv((t - turning) * alpha(kind, peak));
  return peak * std::exp(-w * w);
}

// --- RK4 ------------------------------------------------------------------

RadialSolution radial_rk4(RadialKind kind, double r0, double r1, double beta, const RadialOdeOptions& options) {
  if (!(options.dt > 0.0)) throw DomainError("RK4 step must be positive", options.dt);
  if (!(r0 > 0.0)) throw DomainError("RK4 requires r0 > 0", r0);
  RadialSolution sol;
  sol.k = curvature_factor(kind);
  sol.beta = beta;
  const double k = sol.k;
  auto accel = [k, beta](double r, double v) { return -k / r - beta * v; };

  const auto max_steps = static_cast<std::size_t>(std::ceil(options.t_max / options.dt));
  sol.times.reserve(std::min<std::size_t>(max_steps + 1, 1u << 22));
  sol.radii.reserve(sol.times.capacity());
  sol.velocities.reserve(sol.times.capacity());

  double r = r0;
  double v = r1;
  double t = 0.0;
  const double h = options.dt;
  sol.times.push_back(t);
  sol.radii.push_back(r);
  sol.velocities.push_back(v);
  for (std::size_t n = 1; n <= max_steps; ++n) {
    const double k1r = v;
    const double k1v = accel(r, v);
    const double k2r = v + 0.5 * h * k1v;
    const double k2v = accel(r + 0.5 * h * k1r, v + 0.5 * h * k1v);
    const double k3r = v + 0.5 * h * k2v;
    const double k3v = accel(r + 0.5 * h * k2r, v + 0.5 * h * k2v);
    const double k4r = v + h * k3v;
    const double k4v = accel(r + h * k3r, v + h * k3v);
    const double r_next = r + h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    const double v_next = v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double t_next = static_cast<double>(n) * h;

    if (!sol.turning_time && v > 0.0 && v_next <= 0.0) {
      // ṙ is linear to O(h²) within a step.
      sol.turning_time = t + h * v / (v - v_next);
    }
    if (!(r_next >= options.r_stop) || !std::isfinite(r_next)) {
      sol.collapse_time = t_next;
      break;
    }
    r = r_next;
    v = v_next;
    t = t_next;
    sol.times.push_back(t);
    sol.radii.push_back(r);
    sol.velocities.push_back(v);
  }
  return sol;
}

namespace {

struct Bracket {
  std::size_t i;
  double s;  // fraction in [0, 1]
  double h;
};

Bracket locate(const RadialSolution& sol, double t) {
  if (sol.times.size() < 2) throw DomainError("radial solution has fewer than two samples", t);
  if (t < sol.times.front() || t > sol.times.back()) {
    throw DomainError("time outside the integrated interval [0, " + std::to_string(sol.times.back()) + "]", t);
  }
  auto it = std::upper_bound(sol.times.begin(), sol.times.end(), t);
  std::size_t i = it == sol.times.begin() ? 0 : static_cast<std::size_t>(it - sol.times.begin()) - 1;
  if (i + 1 >= sol.times.size()) i = sol.times.size() - 2;
  const double h = sol.times[i + 1] - sol.times[i];
  return {i, (t - sol.times[i]) / h, h};
}

double hermite(double y0, double y1, double d0, double d1, double s, double h) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * d1;
}

}  // namespace

double RadialSolution::radius_at(double t) const {
  const auto b = locate(*this, t);
  return hermite(radii[b.i], radii[b.i + 1], velocities[b.i], velocities[b.i + 1], b.s, b.h);
}

double RadialSolution::velocity_at(double t) const {
  const auto b = locate(*this, t);
  const double a0 = -k / radii[b.i] - beta * velocities[b.i];
  const double a1 = -k / radii[b.i + 1] - beta * velocities[b.i + 1];
  return hermite(velocities[b.i], velocities[b.i + 1], a0, a1, b.s, b.h);
}

double RadialSolution::acceleration_at(double t) const { return -k / radius_at(t) - beta * velocity_at(t); }

double RadialSolution::peak_radius() const { return *std::max_element(radii.begin(), radii.end()); }

double relative_l2(std::span<const double> predicted, std::span<const double> reference) {
  if (predicted.size() != reference.size()) throw ConfigError("relative_l2 requires equal lengths");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = predicted[i] - reference[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  if (!(den > 0.0)) throw DomainError("relative_l2 reference has zero norm", den);
  return std::sqrt(num) / std::sqrt(den);
}

}  // namespace hmcf::oracle
