#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hmcf::optim {

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction; the learning rate is supplied per step.
class Adam {
 public:
  Adam(std::size_t parameters, AdamHyper hyper = {});

  /// θ ← θ − lr·m̂/(√v̂ + ε). Throws DivergenceError naming the first
  /// parameter whose update is not finite; θ is left untouched in that case.
  void step(std::span<double> params, std::span<const double> grad, double lr);

  std::size_t step_count() const { return t_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }
  const AdamHyper& hyper() const { return hyper_; }

 private:
  AdamHyper hyper_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::vector<double> update_;
  std::size_t t_ = 0;
};

/// Rescales grad to global L2 norm `threshold` when it is larger. Returns the norm before clipping.
double clip_gradient(std::span<double> grad, double threshold);

double l2_norm(std::span<const double> v);

}  // namespace hmcf::optim
