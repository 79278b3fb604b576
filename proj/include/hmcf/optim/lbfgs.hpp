#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hmcf/autodiff/gradient.hpp"

namespace hmcf::optim {

struct LbfgsOptions {
  std::size_t history = 10;
  double initial_step = 0.1;  // trial step of the first line search
  double g_tol = 1e-9;        // stop when ‖∇f‖₂ < g_tol
  std::size_t max_evals = 20; // function evaluations per line search
  double c1 = 1e-4;
  double c2 = 0.9;
  std::size_t max_failures = 2;  // consecutive failed searches before giving up
};

/// Curvature pairs kept by the two-loop recursion.
struct LbfgsState {
  std::deque<std::vector<double>> s;
  std::deque<std::vector<double>> y;
  std::deque<double> rho;

  std::size_t size() const { return s.size(); }
  void clear();
  /// Stores (s, y) if s·y > 1e-12·|s|·|y|; drops the oldest pair past `capacity`. Returns whether stored.
  bool push(std::vector<double> s_k, std::vector<double> y_k, std::size_t capacity);
  /// d = −H·g via the two-loop recursion, scaled by γ = s·y/y·y of the newest pair.
  std::vector<double> direction(std::span<const double> g) const;
};

struct LbfgsResult {
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  std::size_t line_search_failures = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  std::string stop_reason;
};

/// Called after every accepted iteration with the 1-based iteration index and loss.
using LbfgsCallback = std::function<void(std::size_t iteration, double loss)>;

/// Minimizes f from x in place. A failed strong-Wolfe search falls back to a
/// halving steepest-descent step; `max_failures` consecutive failures end the run.
LbfgsResult lbfgs_run(std::vector<double>& x, const ad::Objective& f, std::size_t max_iters,
                      const LbfgsOptions& options = {}, const LbfgsCallback& callback = {});

}  // namespace hmcf::optim
