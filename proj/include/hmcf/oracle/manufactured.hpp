#pragma once

#include <functional>

#include <Eigen/Dense>

#include "hmcf/network/batch.hpp"
#include "hmcf/oracle/radial.hpp"

namespace hmcf::oracle {

/// Radially symmetric exact closure r(t)·e(u) standing in for a network:
/// e(u) = (cos u, sin u) for curves, the unit-sphere map for spheres. Produces
/// output jets in the batched-engine layout, with r, ṙ, r̈ supplied by callables.
class RadialClosure {
 public:
  using Scalar = std::function<double(double)>;

  RadialClosure(RadialKind kind, Scalar r, Scalar r_dot, Scalar r_ddot);
  /// r, ṙ from the RK4 trajectory and r̈ from the ODE at the interpolated state.
  RadialClosure(RadialKind kind, const RadialSolution& solution);

  /// Jets of the closure at input points (2 × N for curves, 3 × N for spheres).
  Eigen::MatrixXd jets(const Eigen::MatrixXd& points, nn::JetOrder order) const;
  /// Values only (output_dim × N).
  Eigen::MatrixXd values(const Eigen::MatrixXd& points) const;

  RadialKind kind() const { return kind_; }

 private:
  RadialKind kind_;
  Scalar r_;
  Scalar r_dot_;
  Scalar r_ddot_;
};

}  // namespace hmcf::oracle
