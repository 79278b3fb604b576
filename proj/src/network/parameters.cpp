#include "hmcf/network/parameters.hpp"

#include <cmath>
#include <string>

#include "hmcf/error.hpp"
#include "hmcf/random.hpp"

namespace hmcf::nn {

void NetworkShape::validate() const {
  if (input_dim != 2 && input_dim != 3) {
    throw ConfigError("network input_dim must be 2 or 3, got " + std::to_string(input_dim));
  }
  if (output_dim != 2 && output_dim != 3) {
    throw ConfigError("network output_dim must be 2 or 3, got " + std::to_string(output_dim));
  }
  if (hidden_layers < 1) throw ConfigError("network hidden_layers must be at least 1");
  if (hidden_width < 1) throw ConfigError("network hidden_width must be at least 1");
}

std::vector<LayerLayout> make_layout(const NetworkShape& shape) {
  shape.validate();
  std::vector<LayerLayout> layout;
  std::size_t offset = 0;
  std::size_t fan_in = shape.input_dim;
  for (std::size_t l = 0; l < shape.layer_count(); ++l) {
    const bool last = l + 1 == shape.layer_count();
    LayerLayout layer;
    layer.rows = last ? shape.output_dim : shape.hidden_width;
    layer.cols = fan_in;
    layer.weight_offset = offset;
    offset += layer.rows * layer.cols;
    layer.bias_offset = offset;
    offset += layer.rows;
    layout.push_back(layer);
    fan_in = layer.rows;
  }
  return layout;
}

std::size_t parameter_count(const NetworkShape& shape) {
  const auto layout = make_layout(shape);
  return layout.back().bias_offset + layout.back().rows;
}

ParameterVector::ParameterVector(const NetworkShape& shape)
    : shape_(shape), layout_(make_layout(shape)), values_(parameter_count(shape), 0.0) {}

ParameterVector::ParameterVector(const NetworkShape& shape, std::vector<double> values)
    : shape_(shape), layout_(make_layout(shape)), values_(values.begin(), values.end()) {
  if (values_.size() != parameter_count(shape)) {
    throw ConfigError("parameter vector has " + std::to_string(values_.size()) +
                      " entries, shape requires " + std::to_string(parameter_count(shape)));
  }
}

Eigen::Map<const Eigen::MatrixXd> ParameterVector::weight(std::size_t layer) const {
  const auto& l = layout_.at(layer);
  return {values_.data() + l.weight_offset, static_cast<Eigen::Index>(l.rows),
          static_cast<Eigen::Index>(l.cols)};
}

Eigen::Map<Eigen::MatrixXd> ParameterVector::weight(std::size_t layer) {
  const auto& l = layout_.at(layer);
  return {values_.data() + l.weight_offset, static_cast<Eigen::Index>(l.rows),
          static_cast<Eigen::Index>(l.cols)};
}

Eigen::Map<const Eigen::VectorXd> ParameterVector::bias(std::size_t layer) const {
  const auto& l = layout_.at(layer);
  return {values_.data() + l.bias_offset, static_cast<Eigen::Index>(l.rows)};
}

Eigen::Map<Eigen::VectorXd> ParameterVector::bias(std::size_t layer) {
  const auto& l = layout_.at(layer);
  return {values_.data() + l.bias_offset, static_cast<Eigen::Index>(l.rows)};
}

std::vector<LayerMatrices> ParameterVector::unflatten() const {
  std::vector<LayerMatrices> layers;
  layers.reserve(layout_.size());
  for (std::size_t l = 0; l < layout_.size(); ++l) layers.push_back({weight(l), bias(l)});
  return layers;
}

ParameterVector ParameterVector::flatten(const NetworkShape& shape,
                                         const std::vector<LayerMatrices>& layers) {
  ParameterVector p(shape);
  if (layers.size() != p.layout_.size()) throw ConfigError("layer count does not match shape");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& lay = p.layout_[l];
    if (static_cast<std::size_t>(layers[l].weight.rows()) != lay.rows ||
        static_cast<std::size_t>(layers[l].weight.cols()) != lay.cols ||
        static_cast<std::size_t>(layers[l].bias.size()) != lay.rows) {
      throw ConfigError("layer " + std::to_string(l) + " matrices do not match shape");
    }
    p.weight(l) = layers[l].weight;
    p.bias(l) = layers[l].bias;
  }
  return p;
}

ParameterVector init_xavier(const NetworkShape& shape, std::uint64_t seed) {
  ParameterVector p(shape);
  Rng rng(mix_seed(seed));
  for (std::size_t l = 0; l < p.layout().size(); ++l) {
    const auto& lay = p.layout()[l];
    const double bound = std::sqrt(6.0 / static_cast<double>(lay.rows + lay.cols));
    auto w = p.weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-bound, bound);
    }
  }
  return p;
}

}  // namespace hmcf::nn
