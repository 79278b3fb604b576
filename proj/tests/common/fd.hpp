#pragma once

// Finite-difference references shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "hmcf/network/parameters.hpp"

namespace hmcf::testing {

/// Network values in long double, so central differences lose little to rounding.
inline std::vector<long double> values_ld(const std::vector<nn::LayerMatrices>& layers, std::vector<long double> a) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const auto& w = layers[l].weight;
    std::vector<long double> z(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      long double acc = layers[l].bias(r);
      for (Eigen::Index c = 0; c < w.cols(); ++c) acc += static_cast<long double>(w(r, c)) * a[static_cast<std::size_t>(c)];
      z[static_cast<std::size_t>(r)] = l + 1 < layers.size() ? std::tanh(acc) : acc;
    }
    a = std::move(z);
  }
  return a;
}

struct FdJet {
  std::vector<std::vector<long double>> grad;               // [out][i]
  std::vector<std::vector<std::vector<long double>>> hess;  // [out][i][j]
};

/// Central differences of every output: first partials (2-point) and second
/// partials (3-point diagonal, 4-point mixed) with step h.
inline FdJet fd_jets(const std::vector<nn::LayerMatrices>& layers, const std::vector<double>& x, long double h) {
  const std::size_t d = x.size();
  std::vector<long double> base(x.begin(), x.end());
  auto eval = [&](std::size_t i, long double di, std::size_t j, long double dj) {
    auto p = base;
    p[i] += di;
    p[j] += dj;
    return values_ld(layers, p);
  };
  const auto f0 = values_ld(layers, base);
  const std::size_t m = f0.size();
  FdJet out;
  out.grad.assign(m, std::vector<long double>(d));
  out.hess.assign(m, std::vector<std::vector<long double>>(d, std::vector<long double>(d)));
  for (std::size_t i = 0; i < d; ++i) {
    const auto fp = eval(i, h, i, 0);
    const auto fm = eval(i, -h, i, 0);
    for (std::size_t o = 0; o < m; ++o) {
      out.grad[o][i] = (fp[o] - fm[o]) / (2 * h);
      out.hess[o][i][i] = (fp[o] - 2 * f0[o] + fm[o]) / (h * h);
    }
    for (std::size_t j = i + 1; j < d; ++j) {
      const auto pp = eval(i, h, j, h);
      const auto pm = eval(i, h, j, -h);
      const auto mp = eval(i, -h, j, h);
      const auto mm = eval(i, -h, j, -h);
      for (std::size_t o = 0; o < m; ++o) {
        out.hess[o][i][j] = out.hess[o][j][i] = (pp[o] - pm[o] - mp[o] + mm[o]) / (4 * h * h);
      }
    }
  }
  return out;
}

/// |a − b| / max(|b|, floor): relative error that does not explode on exact zeros.
inline double rel_err(double a, double b, double floor) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

}  // namespace hmcf::testing
