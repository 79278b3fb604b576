#pragma once

// Pointwise network evaluation on jets. This is the reference path: simple,
// allocation-heavy, and used for diagnostics and to cross-check the batched
// engine in network/batch.hpp.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hmcf/autodiff/jet.hpp"
#include "hmcf/error.hpp"
#include "hmcf/network/parameters.hpp"

namespace hmcf::nn {

/// Optional affine map applied to raw inputs: x' = (x - offset) * scale.
struct InputTransform {
  std::array<double, 3> offset{0.0, 0.0, 0.0};
  std::array<double, 3> scale{1.0, 1.0, 1.0};

  /// Maps the box [lo_i, hi_i] onto [-1, 1] in every coordinate.
  static InputTransform to_unit_box(std::span<const double> lo, std::span<const double> hi);
  bool is_identity() const;
};

/// Propagates jets through layers; every layer but the last applies tanh.
template <std::size_t D, class T>
std::vector<ad::ScalarJet2<D, T>> propagate_jets(const std::vector<LayerMatrices>& layers,
                                                 std::vector<ad::ScalarJet2<D, T>> activation) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l].weight;
    const auto& b = layers[l].bias;
    if (static_cast<std::size_t>(w.cols()) != activation.size()) {
      throw ConfigError("layer " + std::to_string(l) + " expects " + std::to_string(w.cols()) +
                        " inputs, got " + std::to_string(activation.size()));
    }
    const bool hidden = l + 1 < layers.size();
    std::vector<ad::ScalarJet2<D, T>> next(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      ad::ScalarJet2<D, T> z(static_cast<T>(b(r)));
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        z += static_cast<T>(w(r, c)) * activation[static_cast<std::size_t>(c)];
      }
      if (hidden) z = tanh(z);
      using std::isfinite;
      if (!isfinite(static_cast<double>(z.value))) {
        throw NumericOverflow("non-finite activation in layer " + std::to_string(l), l);
      }
      next[static_cast<std::size_t>(r)] = z;
    }
    activation = std::move(next);
  }
  return activation;
}

/// Network outputs with input gradients and Hessians at one point.
template <std::size_t D, class T = double>
std::vector<ad::ScalarJet2<D, T>> forward_jets(const ParameterVector& params,
                                               std::span<const double> point,
                                               const InputTransform& transform = {}) {
  if (params.shape().input_dim != D) {
    throw ConfigError("network input_dim " + std::to_string(params.shape().input_dim) +
                      " does not match jet dimension " + std::to_string(D));
  }
  std::array<T, D> raw{};
  for (std::size_t i = 0; i < D; ++i) raw[i] = static_cast<T>(point[i]);
  auto seeded = ad::seed<D, T>(raw);
  std::vector<ad::ScalarJet2<D, T>> input(seeded.begin(), seeded.end());
  for (std::size_t i = 0; i < D; ++i) {
    input[i] = (input[i] - static_cast<T>(transform.offset[i])) * static_cast<T>(transform.scale[i]);
  }
  return propagate_jets<D, T>(params.unflatten(), std::move(input));
}

/// Plain network values at one point (no derivatives).
std::vector<double> forward_values(const ParameterVector& params, std::span<const double> point,
                                   const InputTransform& transform = {});

}  // namespace hmcf::nn
