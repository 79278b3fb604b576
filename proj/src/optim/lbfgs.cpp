#include "hmcf/optim/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hmcf/optim/adam.hpp"

namespace hmcf::optim {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// One point on the search line.
struct Probe {
  double step = 0.0;
  double f = 0.0;
  double slope = 0.0;  // φ'(step) = ∇f·d
  std::vector<double> g;
};

bool finite_probe(const Probe& p) {
  if (!std::isfinite(p.f) || !std::isfinite(p.slope)) return false;
  return std::all_of(p.g.begin(), p.g.end(), [](double v) { return std::isfinite(v); });
}

// Minimizer of the cubic interpolating (a, fa, ga) and (b, fb, gb), clamped to the
// middle 80% of the bracket; falls back to bisection.
double cubic_step(const Probe& a, const Probe& b) {
  const double lo = std::min(a.step, b.step);
  const double hi = std::max(a.step, b.step);
  const double pad = 0.1 * (hi - lo);
  const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.step - b.step);
  const double disc = d1 * d1 - a.slope * b.slope;
  double t = 0.5 * (lo + hi);
  if (disc >= 0.0 && std::isfinite(disc)) {
    const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom != 0.0) {
      const double cand = b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
      if (std::isfinite(cand)) t = cand;
    }
  }
  return std::clamp(t, lo + pad, hi - pad);
}

class LineSearch {
 public:
  LineSearch(const ad::Objective& f, std::span<const double> x, std::span<const double> d, double f0, double slope0,
             const LbfgsOptions& opt)
      : f_(f), x_(x), d_(d), f0_(f0), slope0_(slope0), opt_(opt), trial_(x.size()) {}

  Probe eval(double step) {
    Probe p;
    p.step = step;
    p.g.assign(x_.size(), 0.0);
    for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + step * d_[i];
    try {
      p.f = f_(trial_, p.g);
    } catch (const std::exception&) {
      // Treated as an overshoot; the search backs off.
      p.f = kInf;
    }
    p.slope = finite_probe(p) ? dot(p.g, d_) : kInf;
    if (!finite_probe(p)) p.f = kInf;
    ++evals_;
    if (p.f < f0_ + opt_.c1 * step * slope0_ && (!best_ || p.f < best_->f)) best_ = p;
    return p;
  }

  bool armijo(const Probe& p) const { return p.f <= f0_ + opt_.c1 * p.step * slope0_; }
  bool curvature(const Probe& p) const { return std::abs(p.slope) <= -opt_.c2 * slope0_; }
  bool budget() const { return evals_ < opt_.max_evals; }

  // Strong Wolfe search; returns the accepted probe or, when only sufficient
  // decrease was achieved, the best such probe. Empty on failure.
  std::optional<Probe> run(double step0) {
    Probe prev{0.0, f0_, slope0_, {}};
    double step = step0;
    for (std::size_t i = 0; budget(); ++i) {
      Probe cur = eval(step);
      if (!armijo(cur) || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
      if (curvature(cur)) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      step *= 2.0;
    }
    return best_;
  }

  std::size_t evaluations() const { return evals_; }

 private:
  std::optional<Probe> zoom(Probe lo, Probe hi) {
    while (budget()) {
      // Without a finite value at hi only bisection is safe.
      const double step = std::isfinite(hi.f) ? cubic_step(lo, hi) : 0.5 * (lo.step + hi.step);
      Probe cur = eval(step);
      if (!armijo(cur) || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (curvature(cur)) return cur;
        if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
      if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, std::abs(lo.step))) break;
    }
    return best_;
  }

  const ad::Objective& f_;
  std::span<const double> x_;
  std::span<const double> d_;
  double f0_;
  double slope0_;
  const LbfgsOptions& opt_;
  std::vector<double> trial_;
  std::size_t evals_ = 0;
  std::optional<Probe> best_;
};

}  // namespace

void LbfgsState::clear() {
  s.clear();
  y.clear();
  rho.clear();
}

bool LbfgsState::push(std::vector<double> s_k, std::vector<double> y_k, std::size_t capacity) {
  const double sy = dot(s_k, y_k);
  if (!(sy > 1e-12 * l2_norm(s_k) * l2_norm(y_k))) return false;
  s.push_back(std::move(s_k));
  y.push_back(std::move(y_k));
  rho.push_back(1.0 / sy);
  while (s.size() > capacity) {
    s.pop_front();
    y.pop_front();
    rho.pop_front();
  }
  return true;
}

std::vector<double> LbfgsState::direction(std::span<const double> g) const {
  std::vector<double> q(g.begin(), g.end());
  const std::size_t m = s.size();
  std::vector<double> alpha(m, 0.0);
  for (std::size_t k = m; k-- > 0;) {
    alpha[k] = rho[k] * dot(s[k], q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * y[k][i];
  }
  if (m > 0) {
    const double gamma = dot(s.back(), y.back()) / dot(y.back(), y.back());
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double beta = rho[k] * dot(y[k], q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * s[k][i];
  }
  for (double& v : q) v = -v;
  return q;
}

LbfgsResult lbfgs_run(std::vector<double>& x, const ad::Objective& f, std::size_t max_iters,
                      const LbfgsOptions& options, const LbfgsCallback& callback) {
  LbfgsResult result;
  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  double fx = f(x, g);
  result.evaluations = 1;
  ad::require_finite(fx, g);
  result.loss = fx;
  result.grad_norm = l2_norm(g);
  if (result.grad_norm < options.g_tol) {
    result.converged = true;
    result.stop_reason = "gradient norm below tolerance";
    return result;
  }
  if (max_iters == 0) {
    result.stop_reason = "iteration limit";
    return result;
  }

  LbfgsState state;
  std::size_t failures = 0;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    std::vector<double> d = state.direction(g);
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      state.clear();
      d = state.direction(g);
      slope = dot(g, d);
    }
    const double step0 = state.size() == 0 && iter == 1
                             ? options.initial_step * std::min(1.0, 1.0 / std::max(result.grad_norm, 1e-300))
                             : 1.0;
    LineSearch search(f, x, d, fx, slope, options);
    std::optional<Probe> accepted = search.run(step0);
    result.evaluations += search.evaluations();

    if (!accepted) {
      ++result.line_search_failures;
      // Steepest descent with halving.
      state.clear();
      std::vector<double> sd(n);
      for (std::size_t i = 0; i < n; ++i) sd[i] = -g[i];
      const double sd_slope = -result.grad_norm * result.grad_norm;
      LbfgsOptions halving = options;
      halving.max_evals = 1;
      double step = options.initial_step / std::max(result.grad_norm, 1e-300);
      for (int h = 0; h < 40 && !accepted; ++h, step *= 0.5) {
        LineSearch probe(f, x, sd, fx, sd_slope, halving);
        Probe p = probe.eval(step);
        ++result.evaluations;
        if (probe.armijo(p)) accepted = std::move(p);
      }
      if (accepted) {
        d = sd;
      } else if (++failures >= options.max_failures) {
        result.stop_reason = "line search failed";
        return result;
      } else {
        continue;
      }
    }
    failures = 0;

    std::vector<double> s_k(n);
    std::vector<double> y_k(n);
    for (std::size_t i = 0; i < n; ++i) {
      s_k[i] = accepted->step * d[i];
      y_k[i] = accepted->g[i] - g[i];
      x[i] += s_k[i];
    }
    const double f_prev = fx;
    fx = accepted->f;
    g = std::move(accepted->g);
    state.push(std::move(s_k), std::move(y_k), options.history);
    result.iterations = iter;
    result.loss = fx;
    result.grad_norm = l2_norm(g);
    if (callback) callback(iter, fx);
    if (result.grad_norm < options.g_tol) {
      result.converged = true;
      result.stop_reason = "gradient norm below tolerance";
      return result;
    }
    if (fx == f_prev && accepted->step * l2_norm(d) == 0.0) {
      result.stop_reason = "no progress";
      return result;
    }
  }
  result.stop_reason = "iteration limit";
  return result;
}

}  // namespace hmcf::optim
