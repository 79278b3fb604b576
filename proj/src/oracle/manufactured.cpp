#include "hmcf/oracle/manufactured.hpp"

#include <array>
#include <cmath>
#include <memory>

#include "hmcf/autodiff/jet.hpp"
#include "hmcf/error.hpp"

namespace hmcf::oracle {

RadialClosure::RadialClosure(RadialKind kind, Scalar r, Scalar r_dot, Scalar r_ddot)
    : kind_(kind), r_(std::move(r)), r_dot_(std::move(r_dot)), r_ddot_(std::move(r_ddot)) {}

RadialClosure::RadialClosure(RadialKind kind, const RadialSolution& solution) : kind_(kind) {
  auto sol = std::make_shared<RadialSolution>(solution);
  r_ = [sol](double t) { return sol->radius_at(t); };
  r_dot_ = [sol](double t) { return sol->velocity_at(t); };
  r_ddot_ = [sol](double t) { return sol->acceleration_at(t); };
}

Eigen::MatrixXd RadialClosure::jets(const Eigen::MatrixXd& points, nn::JetOrder order) const {
  const std::size_t d = kind_ == RadialKind::Curve ? 2 : 3;
  if (static_cast<std::size_t>(points.rows()) != d) throw ConfigError("closure points have the wrong dimension");
  const std::size_t comps = nn::jet_components(d, order);
  const auto n = static_cast<std::size_t>(points.cols());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(comps * n));
  auto col = [n](std::size_t comp, std::size_t p) { return static_cast<Eigen::Index>(comp * n + p); };
  auto hcol = [&](std::size_t i, std::size_t j, std::size_t p) { return col(1 + d + ad::packed_index(d, i, j), p); };

  for (std::size_t p = 0; p < n; ++p) {
    const auto pc = static_cast<Eigen::Index>(p);
    const double t = points(static_cast<Eigen::Index>(d - 1), pc);
    const double r = r_(t);
    const double rd = order == nn::JetOrder::Value ? 0.0 : r_dot_(t);
    const double rdd = order == nn::JetOrder::Second ? r_ddot_(t) : 0.0;
    if (kind_ == RadialKind::Curve) {
      const double u = points(0, pc);
      const std::array<double, 2> e{std::cos(u), std::sin(u)};
      const std::array<double, 2> eu{-std::sin(u), std::cos(u)};
      for (std::size_t k = 0; k < 2; ++k) {
        const auto o = static_cast<Eigen::Index>(k);
        out(o, col(0, p)) = r * e[k];
        if (order == nn::JetOrder::Value) continue;
        out(o, col(1, p)) = r * eu[k];
        out(o, col(2, p)) = rd * e[k];
        if (order != nn::JetOrder::Second) continue;
        out(o, hcol(0, 0, p)) = -r * e[k];
        out(o, hcol(0, 1, p)) = rd * eu[k];
        out(o, hcol(1, 1, p)) = rdd * e[k];
      }
      continue;
    }
    const double u1 = points(0, pc);
    const double u2 = points(1, pc);
    const double s1 = std::sin(u1), c1 = std::cos(u1), s2 = std::sin(u2), c2 = std::cos(u2);
    const std::array<double, 3> e{s1 * c2, s1 * s2, c1};
    const std::array<double, 3> e1{c1 * c2, c1 * s2, -s1};
    const std::array<double, 3> e2{-s1 * s2, s1 * c2, 0.0};
    const std::array<double, 3> e12{-c1 * s2, c1 * c2, 0.0};
    const std::array<double, 3> e22{-s1 * c2, -s1 * s2, 0.0};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto o = static_cast<Eigen::Index>(k);
      out(o, col(0, p)) = r * e[k];
      if (order == nn::JetOrder::Value) continue;
      out(o, col(1, p)) = r * e1[k];
      out(o, col(2, p)) = r * e2[k];
      out(o, col(3, p)) = rd * e[k];
      if (order != nn::JetOrder::Second) continue;
      out(o, hcol(0, 0, p)) = -r * e[k];
      out(o, hcol(0, 1, p)) = r * e12[k];
      out(o, hcol(1, 1, p)) = r * e22[k];
      out(o, hcol(0, 2, p)) = rd * e1[k];
      out(o, hcol(1, 2, p)) = rd * e2[k];
      out(o, hcol(2, 2, p)) = rdd * e[k];
    }
  }
  return out;
}

Eigen::MatrixXd RadialClosure::values(const Eigen::MatrixXd& points) const {
  return jets(points, nn::JetOrder::Value);
}

}  // namespace hmcf::oracle
