#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hmcf::oracle {

/// Radially symmetric reductions: r'' + β r' = −k/r with k = 1 for circles, k = 2 for spheres.
enum class RadialKind { Curve, Sphere };

double curvature_factor(RadialKind kind);
std::string to_string(RadialKind kind);

/// Closed-form radius from the analytic lemmas, evaluated exactly as stated
/// (β = 0, r1 ≥ 0). For r1 > 0 the expanding branch is used up to the turning
/// time T_s, followed by the zero-velocity solution started from r0·e^{r1²/2k'}.
/// Throws DomainError for t outside [0, collapse) or r1 < 0.
double radial_closed_form(RadialKind kind, double r0, double r1, double t);

/// Collapse time implied by the closed form.
double closed_form_collapse_time(RadialKind kind, double r0, double r1);

/// Turning time T_s of the closed form (0 when r1 = 0).
double closed_form_turning_time(RadialKind kind, double r0, double r1);

/// Peak radius r0·e^{r1²/2} (curve) or r0·e^{r1²/4} (sphere) stated by the lemmas.
double closed_form_peak_radius(RadialKind kind, double r0, double r1);

struct RadialOdeOptions {
  double dt = 1e-4;
  double r_stop = 1e-3;
  double t_max = 100.0;
};

/// RK4 trajectory of the radial ODE, sampled at every step.
struct RadialSolution {
  double k = 1.0;
  double beta = 0.0;
  std::vector<double> times;
  std::vector<double> radii;
  std::vector<double> velocities;
  /// Time at which r first dropped below r_stop; a lower bound on the collapse time.
  std::optional<double> collapse_time;
  /// End of the expansion phase (ṙ changes sign from + to −), when there is one.
  std::optional<double> turning_time;

  double end_time() const { return times.back(); }
  /// Cubic Hermite interpolation on the stored steps (O(dt⁴)).
  double radius_at(double t) const;
  double velocity_at(double t) const;
  /// r'' from the ODE itself at the interpolated state.
  double acceleration_at(double t) const;
  double peak_radius() const;
};

/// Classical RK4 on (r, ṙ), halting when r < r_stop or t ≥ t_max.
RadialSolution radial_rk4(RadialKind kind, double r0, double r1, double beta, const RadialOdeOptions& options = {});

/// ‖predicted − reference‖₂ / ‖reference‖₂. Throws DomainError on zero reference
/// norm and ConfigError on a length mismatch.
double relative_l2(std::span<const double> predicted, std::span<const double> reference);

}  // namespace hmcf::oracle
