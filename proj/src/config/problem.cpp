#include "hmcf/config/problem.hpp"

#include <array>
#include <cmath>
#include <string>

#include "hmcf/error.hpp"

namespace hmcf::config {

namespace {

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError("invalid `" + field + "`: " + message);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

double ProblemSpec::param_hi(std::size_t axis) const {
  if (is_curve()) return geometry::kTwoPi;
  if (axis == 0) return surface.u1_max();
  return geometry::kTwoPi;
}

std::pair<double, double> ProblemSpec::interior_box(std::size_t axis) const {
  const std::size_t time_axis = input_dim() - 1;
  if (axis == time_axis) return {0.0, t_train};
  if (has_poles() && axis == 0) return {sampling.pole_delta, surface.u1_max() - sampling.pole_delta};
  return {0.0, param_hi(axis)};
}

nn::InputTransform ProblemSpec::input_transform() const {
  if (!normalize_inputs) return {};
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  const std::size_t d = input_dim();
  for (std::size_t i = 0; i + 1 < d; ++i) hi[i] = param_hi(i);
  hi[d - 1] = t_train;
  return nn::InputTransform::to_unit_box(std::span<const double>(lo.data(), d), std::span<const double>(hi.data(), d));
}

void ProblemSpec::validate() const {
  if (is_curve()) {
    curve.validate();
  } else {
    surface.validate();
  }
  require(std::isfinite(velocity.r1), "velocity.r1", "must be finite");
  require(std::isfinite(beta) && beta >= 0.0, "beta", "must be finite and >= 0");
  require(finite_positive(t_train), "time.train", "must be positive");
  require(std::isfinite(t_display) && t_display >= t_train, "time.display", "must be >= time.train");
  try {
    network.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("invalid `network`: ") + e.what());
  }
  require(network.input_dim == input_dim() && network.output_dim == input_dim(), "network",
          "dimensions must match the geometry");
  require(sampling.n_f >= 1, "sampling.n_f", "must be >= 1");
  require(sampling.n_0 >= 1, "sampling.n_0", "must be >= 1");
  require(sampling.n_b >= 1, "sampling.n_b", "must be >= 1");
  if (has_poles()) {
    require(sampling.n_p >= 1, "sampling.n_p", "must be >= 1");
    require(sampling.pole_ring >= 2 && sampling.pole_ring % 2 == 0, "sampling.pole_ring", "must be even and >= 2");
    require(sampling.pole_delta >= 0.0 && sampling.pole_delta < 0.5, "sampling.pole_delta", "must lie in [0, 0.5)");
  }
  const auto& cs = curve_schedule;
  require(finite_positive(cs.adam1_lr), "schedule.adam1_lr", "must be positive");
  require(finite_positive(cs.adam2_lr), "schedule.adam2_lr", "must be positive");
  require(finite_positive(cs.warmup_weight), "schedule.warmup_weight", "must be positive");
  const auto& ss = surface_schedule;
  require(finite_positive(ss.max_lr), "schedule.max_lr", "must be positive");
  require(ss.warmup_fraction > 0.0 && ss.warmup_fraction < 1.0, "schedule.warmup_fraction", "must lie in (0, 1)");
  require(ss.div_factor >= 1.0, "schedule.div_factor", "must be >= 1");
  require(ss.final_div_factor >= 1.0, "schedule.final_div_factor", "must be >= 1");
  require(finite_positive(ss.clip), "schedule.clip", "must be positive");
  require(ss.tier1_end <= ss.tier2_end, "schedule.tier2_end", "must be >= tier1_end");
  require(finite_positive(ss.tier_weight), "schedule.tier_weight", "must be positive");
  require(finite_positive(ss.tier_decay), "schedule.tier_decay", "must be positive");
  require(adam.beta1 >= 0.0 && adam.beta1 < 1.0, "adam.beta1", "must lie in [0, 1)");
  require(adam.beta2 >= 0.0 && adam.beta2 < 1.0, "adam.beta2", "must lie in [0, 1)");
  require(finite_positive(adam.eps), "adam.eps", "must be positive");
  require(lbfgs.history >= 1, "lbfgs.history", "must be >= 1");
  require(finite_positive(lbfgs.initial_step), "lbfgs.initial_step", "must be positive");
  require(lbfgs.g_tol >= 0.0, "lbfgs.g_tol", "must be >= 0");
  require(lbfgs.max_evals >= 1, "lbfgs.max_evals", "must be >= 1");
  require(lbfgs.c1 > 0.0 && lbfgs.c1 < lbfgs.c2 && lbfgs.c2 < 1.0, "lbfgs.c1", "need 0 < c1 < c2 < 1");
  require(validation.interval >= 1, "validation.interval", "must be >= 1");
  require(evaluation.time_samples >= 2, "evaluation.time_samples", "must be >= 2");
  require(evaluation.curve_samples >= 3, "evaluation.curve_samples", "must be >= 3");
  require(evaluation.surface_u1_samples >= 1, "evaluation.surface_u1_samples", "must be >= 1");
  require(evaluation.surface_u2_samples >= 3, "evaluation.surface_u2_samples", "must be >= 3");
  require(residual.tangential_sign == 1 || residual.tangential_sign == -1, "flags.tangential_sign",
          "must be +1 or -1");
  require(residual.tangent_eps >= 0.0, "tolerances.tangent_eps", "must be >= 0");
  require(residual.metric_eps >= 0.0, "tolerances.metric_eps", "must be >= 0");
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

}  // namespace hmcf::config
