#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace hmcf::ad {

/// ∇θ L, aligned with the ParameterVector layout it was computed for.
struct ParameterGradient {
  std::vector<double> values;
};

struct LossAndGradient {
  double loss = 0.0;
  ParameterGradient grad;
};

/// A deterministic scalar loss over flat parameters. Returns L(θ) and writes
/// ∂L/∂θ into the second argument (same length as θ, overwritten).
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

/// Evaluates the loss and its gradient, rejecting non-finite results with a
/// DivergenceError that names the first offending gradient component.
LossAndGradient loss_gradient(std::span<const double> params, const Objective& objective);

/// Throws DivergenceError if the loss or any gradient entry is not finite.
void require_finite(double loss, std::span<const double> grad);

}  // namespace hmcf::ad
