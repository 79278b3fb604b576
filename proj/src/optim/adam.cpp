#include "hmcf/optim/adam.hpp"

#include <cmath>

#include "hmcf/error.hpp"

namespace hmcf::optim {

Adam::Adam(std::size_t parameters, AdamHyper hyper)
    : hyper_(hyper), m_(parameters, 0.0), v_(parameters, 0.0), update_(parameters, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad, double lr) {
  const std::size_t n = m_.size();
  if (params.size() != n || grad.size() != n) throw ConfigError("Adam: parameter and gradient sizes differ");
  const std::size_t t = t_ + 1;
  const double b1 = hyper_.beta1;
  const double b2 = hyper_.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double bc2_sqrt = std::sqrt(1.0 - std::pow(b2, static_cast<double>(t)));
  const double step_size = lr / bc1;

  // Compute into scratch first so a non-finite update leaves the state intact.
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    const double m = b1 * m_[i] + (1.0 - b1) * g;
    const double v = b2 * v_[i] + (1.0 - b2) * g * g;
    const double u = step_size * m / (std::sqrt(v) / bc2_sqrt + hyper_.eps);
    if (!std::isfinite(u)) throw DivergenceError("non-finite Adam update at parameter " + std::to_string(i), i);
    update_[i] = u;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    params[i] -= update_[i];
  }
  t_ = t;
}

double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double clip_gradient(std::span<double> grad, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("clip threshold must be positive");
  const double norm = l2_norm(grad);
  if (norm > threshold) {
    const double scale = threshold / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

}  // namespace hmcf::optim
