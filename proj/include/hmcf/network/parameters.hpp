#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hmcf::nn {

/// Fully connected tanh network: input_dim → [hidden_width]×hidden_layers → output_dim.
/// Hidden layers use tanh, the output layer is affine.
struct NetworkShape {
  std::size_t input_dim = 2;
  std::size_t output_dim = 2;
  std::size_t hidden_layers = 1;
  std::size_t hidden_width = 1;

  /// Throws ConfigError on an invalid shape.
  void validate() const;
  std::size_t layer_count() const { return hidden_layers + 1; }
  friend bool operator==(const NetworkShape&, const NetworkShape&) = default;
};

/// Location of one layer's weights (column-major rows×cols) and bias inside θ.
struct LayerLayout {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;
};

std::vector<LayerLayout> make_layout(const NetworkShape& shape);

struct LayerMatrices {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
};

/// Flat θ together with the layout that gives it meaning.
class ParameterVector {
 public:
  ParameterVector() = default;
  /// Zero-initialized parameters for the shape.
  explicit ParameterVector(const NetworkShape& shape);
  ParameterVector(const NetworkShape& shape, std::vector<double> values);

  const NetworkShape& shape() const { return shape_; }
  const std::vector<LayerLayout>& layout() const { return layout_; }
  std::size_t size() const { return values_.size(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  Eigen::Map<const Eigen::MatrixXd> weight(std::size_t layer) const;
  Eigen::Map<Eigen::MatrixXd> weight(std::size_t layer);
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t layer) const;
  Eigen::Map<Eigen::VectorXd> bias(std::size_t layer);

  std::vector<LayerMatrices> unflatten() const;
  static ParameterVector flatten(const NetworkShape& shape, const std::vector<LayerMatrices>& layers);

 private:
  NetworkShape shape_;
  std::vector<LayerLayout> layout_;
  // Fixed base alignment so vectorized kernels over the weight maps round the same way
  // regardless of where the buffer lands.
  std::vector<double, Eigen::aligned_allocator<double>> values_;
};

/// Total parameter count Σ (rows·cols + rows).
std::size_t parameter_count(const NetworkShape& shape);

/// Weights uniform on ±√(6/(fan_in+fan_out)), biases zero. Deterministic per seed.
ParameterVector init_xavier(const NetworkShape& shape, std::uint64_t seed);

}  // namespace hmcf::nn
