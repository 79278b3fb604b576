#include "hmcf/network/forward.hpp"

namespace hmcf::nn {

InputTransform InputTransform::to_unit_box(std::span<const double> lo, std::span<const double> hi) {
  if (lo.size() != hi.size() || lo.size() > 3) throw ConfigError("input box must have at most 3 coordinates");
  InputTransform t;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) throw ConfigError("input box must have hi > lo in every coordinate");
    t.offset[i] = 0.5 * (lo[i] + hi[i]);
    t.scale[i] = 2.0 / (hi[i] - lo[i]);
  }
  return t;
}

bool InputTransform::is_identity() const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (offset[i] != 0.0 || scale[i] != 1.0) return false;
  }
  return true;
}

std::vector<double> forward_values(const ParameterVector& params, std::span<const double> point,
                                   const InputTransform& transform) {
  const auto& shape = params.shape();
  if (point.size() != shape.input_dim) throw ConfigError("point dimension does not match network input");
  Eigen::VectorXd a(static_cast<Eigen::Index>(shape.input_dim));
  for (std::size_t i = 0; i < shape.input_dim; ++i) {
    a(static_cast<Eigen::Index>(i)) = (point[i] - transform.offset[i]) * transform.scale[i];
  }
  for (std::size_t l = 0; l < shape.layer_count(); ++l) {
    Eigen::VectorXd z = params.weight(l) * a + params.bias(l);
    if (!z.allFinite()) throw NumericOverflow("non-finite activation in layer " + std::to_string(l), l);
    if (l + 1 < shape.layer_count()) z = z.array().tanh().matrix();
    a = std::move(z);
  }
  return {a.data(), a.data() + a.size()};
}

}  // namespace hmcf::nn
