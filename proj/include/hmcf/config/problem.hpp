#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "hmcf/geometry/shapes.hpp"
#include "hmcf/network/forward.hpp"
#include "hmcf/network/parameters.hpp"

namespace hmcf::config {

enum class ProblemKind { Curve, Surface };

/// How X_{u1} is constrained at the poles.
///  Meridian: X_{u1}(pole, φ) + X_{u1}(pole, φ+π) = 0, the smoothness condition of a
///            regular surface written in polar coordinates.
///  Literal:  X_{u1}(pole, φ) = 0 at every φ.
enum class PoleSmoothness { Meridian, Literal };

struct SamplingSpec {
  std::size_t n_f = 20000;
  std::size_t n_0 = 200;
  std::size_t n_b = 200;
  std::size_t n_p = 200;
  double pole_delta = 0.01;   // interior collar excluded around sin u1 = 0
  std::size_t pole_ring = 4;  // u2 angles per pole sample (even)
};

struct CurveSchedule {
  std::size_t adam1_steps = 20000;
  double adam1_lr = 1e-3;
  std::size_t adam2_steps = 60000;
  double adam2_lr = 1e-4;
  std::size_t lbfgs_iters = 500;
  std::size_t warmup_steps = 2000;  // steps i < warmup_steps use warmup_weight
  double warmup_weight = 100.0;
};

struct SurfaceSchedule {
  std::size_t adam_steps = 100000;
  double max_lr = 1e-3;
  double warmup_fraction = 0.3;
  double div_factor = 25.0;
  double final_div_factor = 1e4;
  double clip = 1.0;
  std::size_t tier1_end = 10000;  // i < tier1_end: tier_weight
  std::size_t tier2_end = 20000;  // i < tier2_end: tier_weight·tier_decay
  double tier_weight = 1000.0;
  double tier_decay = 0.1;
  std::size_t lbfgs_iters = 500;
};

struct AdamSpec {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct LbfgsSpec {
  std::size_t history = 10;
  double initial_step = 0.1;
  double g_tol = 1e-9;
  std::size_t max_evals = 20;
  double c1 = 1e-4;
  double c2 = 0.9;
};

struct ValidationSpec {
  std::size_t interval = 500;
  std::size_t points = 0;  // 0: N_f / 4
};

struct EvaluationSpec {
  std::size_t time_samples = 100;
  std::size_t curve_samples = 200;      // u samples for curves
  std::size_t surface_u1_samples = 10;  // polar/ring grid for surfaces
  std::size_t surface_u2_samples = 20;
  std::size_t snapshot_times = 7;
};

/// One fully resolved experiment.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::Curve;
  geometry::CurveShape curve;
  geometry::SurfaceShape surface;
  geometry::VelocityProfile velocity;
  double beta = 0.0;
  double t_train = 1.1;
  double t_display = 1.2;
  nn::NetworkShape network{2, 2, 7, 50};
  SamplingSpec sampling;
  CurveSchedule curve_schedule;
  SurfaceSchedule surface_schedule;
  AdamSpec adam;
  LbfgsSpec lbfgs;
  ValidationSpec validation;
  EvaluationSpec evaluation;
  std::uint64_t init_seed = 1;
  std::uint64_t sample_seed = 2;
  geometry::ResidualOptions residual;
  bool antipodal = true;
  bool normalize_inputs = false;
  PoleSmoothness pole_smoothness = PoleSmoothness::Meridian;
  std::string output_dir = "runs/default";

  bool is_curve() const { return kind == ProblemKind::Curve; }
  bool has_poles() const { return kind == ProblemKind::Surface && surface.has_poles(); }
  bool is_torus() const { return kind == ProblemKind::Surface && !surface.has_poles(); }
  std::size_t input_dim() const { return is_curve() ? 2 : 3; }
  std::string geometry_name() const { return is_curve() ? curve.name() : surface.name(); }

  /// Parameter box of the shape (without time): lower and upper bounds per angle.
  double param_hi(std::size_t axis) const;
  /// Interior sampling box for one input coordinate (time last).
  std::pair<double, double> interior_box(std::size_t axis) const;

  /// Input normalization implied by normalize_inputs.
  nn::InputTransform input_transform() const;

  std::size_t validation_points() const {
    return validation.points > 0 ? validation.points : std::max<std::size_t>(1, sampling.n_f / 4);
  }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

}  // namespace hmcf::config
