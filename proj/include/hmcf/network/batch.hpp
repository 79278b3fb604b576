#pragma once

// Batched jet propagation with reverse accumulation over parameters.
//
// Every activation is a width × (C·N) matrix holding C derivative components
// for N points, component c occupying columns [c·N, (c+1)·N). Components are
// ordered value, ∂_i (i < D), then the packed upper-triangular Hessian. The
// forward pass is one GEMM per layer over all components at once; backward
// reverses both the GEMMs and the tanh jet rule, yielding ∂L/∂θ for any loss
// that is a function of the output jets.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmcf/autodiff/jet.hpp"
#include "hmcf/network/forward.hpp"
#include "hmcf/network/parameters.hpp"

namespace hmcf::nn {

/// Derivative order carried by a batch: values only, first, or second partials.
enum class JetOrder { Value = 0, First = 1, Second = 2 };

std::size_t jet_components(std::size_t input_dim, JetOrder order);

class BatchJetEngine {
 public:
  BatchJetEngine(const NetworkShape& shape, JetOrder order, InputTransform transform = {});

  /// points is input_dim × N in raw coordinates.
  void forward(const ParameterVector& params, const Eigen::MatrixXd& points);

  /// Accumulates ∂L/∂θ into grad given ∂L/∂(output components), shaped like output().
  /// Must follow forward() with the same parameters.
  void backward(const ParameterVector& params, const Eigen::MatrixXd& output_adjoint,
                std::span<double> grad) const;

  std::size_t points() const { return points_; }
  std::size_t components() const { return components_; }
  JetOrder order() const { return order_; }
  const NetworkShape& shape() const { return shape_; }

  /// output_dim × (C·N) matrix of output jets.
  const Eigen::MatrixXd& output() const { return output_; }

  Eigen::Index value_col(std::size_t n) const { return static_cast<Eigen::Index>(n); }
  Eigen::Index grad_col(std::size_t i, std::size_t n) const {
    return static_cast<Eigen::Index>((1 + i) * points_ + n);
  }
  Eigen::Index hess_col(std::size_t i, std::size_t j, std::size_t n) const {
    return static_cast<Eigen::Index>((1 + shape_.input_dim + ad::packed_index(shape_.input_dim, i, j)) *
                                         points_ +
                                     n);
  }

  double value(std::size_t out, std::size_t n) const { return output_(static_cast<Eigen::Index>(out), value_col(n)); }
  double grad(std::size_t out, std::size_t i, std::size_t n) const {
    return output_(static_cast<Eigen::Index>(out), grad_col(i, n));
  }
  double hess(std::size_t out, std::size_t i, std::size_t j, std::size_t n) const {
    return output_(static_cast<Eigen::Index>(out), hess_col(i, j, n));
  }

 private:
  void tanh_forward(const Eigen::MatrixXd& z, Eigen::MatrixXd& a) const;
  void tanh_backward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& a, const Eigen::MatrixXd& da,
                     Eigen::MatrixXd& dz) const;

  NetworkShape shape_;
  JetOrder order_;
  InputTransform transform_;
  std::size_t components_;
  std::size_t points_ = 0;
  std::vector<Eigen::MatrixXd> layer_inputs_;  // activation entering layer l
  std::vector<Eigen::MatrixXd> preactivations_;  // hidden-layer z, all components
  Eigen::MatrixXd output_;

  // Scratch reused across calls; fresh multi-megabyte buffers cost page faults every step.
  mutable Eigen::MatrixXd da_, dz_a_, dz_b_, gw_;
  mutable Eigen::VectorXd gb_;
};

}  // namespace hmcf::nn
