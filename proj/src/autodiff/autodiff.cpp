#include <cmath>
#include <limits>
#include <string>

#include "hmcf/autodiff/gradient.hpp"
#include "hmcf/autodiff/jet.hpp"
#include "hmcf/error.hpp"

namespace hmcf::ad {

void validate_input_dim(std::size_t d) {
  if (d != 2 && d != 3) {
    throw ConfigError("jets are seeded over 2 or 3 input coordinates, got " + std::to_string(d));
  }
}

void require_finite(double loss, std::span<const double> grad) {
  if (!std::isfinite(loss)) {
    throw DivergenceError("non-finite loss " + std::to_string(loss), std::numeric_limits<std::size_t>::max());
  }
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw DivergenceError("non-finite gradient entry at component " + std::to_string(i), i);
    }
  }
}

LossAndGradient loss_gradient(std::span<const double> params, const Objective& objective) {
  LossAndGradient out;
  out.grad.values.assign(params.size(), 0.0);
  out.loss = objective(params, out.grad.values);
  require_finite(out.loss, out.grad.values);
  return out;
}

}  // namespace hmcf::ad
