#include "hmcf/loss/loss.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hmcf/autodiff/dual.hpp"
#include "hmcf/error.hpp"
#include "hmcf/geometry/curve.hpp"
#include "hmcf/geometry/surface.hpp"

namespace hmcf::loss {

using Eigen::Index;
using Eigen::MatrixXd;

double weighted_total(const LossReport& r) {
  double total = r.weights.f * r.pde;
  total += r.weights.ic * r.ic;
  total += r.weights.bc * r.bc;
  if (r.pole) total += r.weights.pole * *r.pole;
  return total;
}

namespace {

void add(MatrixXd* adj, std::size_t out, Index col, double v) { (*adj)(static_cast<Index>(out), col) += v; }

// Loads Q derivative vectors of R components into dual slots q·R + k, evaluates the
// residual, accumulates |f|² and, when requested, weight·∂|f|²/∂(slot) into the adjoint.
template <std::size_t R, std::size_t Q, class Derivs, class Fields, class Valid, class Residual>
double dual_term(const JetView& jets, const std::array<Index, Q>& cols, Derivs& d, const Fields& fields,
                 Valid valid, Residual residual, MatrixXd* adjoint, double coef, bool& skipped) {
  using D = ad::Dual<R * Q>;
  for (std::size_t q = 0; q < Q; ++q) {
    for (std::size_t k = 0; k < R; ++k) (*fields[q])[k] = D::variable(jets.at(k, cols[q]), q * R + k);
  }
  if (!valid(d)) {
    skipped = true;
    return 0.0;
  }
  skipped = false;
  const auto f = residual(d);
  double sq = 0.0;
  for (std::size_t k = 0; k < R; ++k) sq += f[k].value * f[k].value;
  if (adjoint != nullptr) {
    for (std::size_t slot = 0; slot < R * Q; ++slot) {
      double g = 0.0;
      for (std::size_t k = 0; k < R; ++k) g += f[k].value * f[k].tangent[slot];
      add(adjoint, slot % R, cols[slot / R], 2.0 * coef * g);
    }
  }
  return sq;
}

}  // namespace

// --- PDE residuals -----------------------------------------------------------

double curve_pde_term(const JetView& jets, double beta, const geometry::ResidualOptions& options,
                      std::size_t& skipped, MatrixXd* adjoint, double weight) {
  using D = ad::Dual<10>;
  const std::size_t n = jets.points();
  const double eps2 = options.tangent_eps * options.tangent_eps;
  const double coef = weight / static_cast<double>(n);
  geometry::CurveDerivatives<D> d;
  const std::array<geometry::Vec<D, 2>*, 5> fields{&d.du, &d.dt, &d.duu, &d.dut, &d.dtt};
  auto valid = [eps2](const geometry::CurveDerivatives<D>& x) { return ad::primal(norm_squared(x.du)) > eps2; };
  auto residual = [beta](const geometry::CurveDerivatives<D>& x) { return geometry::curve_residual(x, beta); };
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::array<Index, 5> cols{jets.grad_col(0, p), jets.grad_col(1, p), jets.hess_col(0, 0, p),
                                    jets.hess_col(0, 1, p), jets.hess_col(1, 1, p)};
    bool skip = false;
    sum += dual_term<2, 5>(jets, cols, d, fields, valid, residual, adjoint, coef, skip);
    if (skip) ++skipped;
  }
  return sum / static_cast<double>(n);
}

double surface_pde_term(const JetView& jets, double beta, const geometry::ResidualOptions& options,
                        std::size_t& skipped, MatrixXd* adjoint, double weight) {
  using D = ad::Dual<27>;
  const std::size_t n = jets.points();
  const double coef = weight / static_cast<double>(n);
  const double metric_eps = options.metric_eps;
  const int sign = options.tangential_sign;
  geometry::SurfaceDerivatives<D> d;
  const std::array<geometry::Vec<D, 3>*, 9> fields{&d.d1, &d.d2, &d.dt, &d.d11, &d.d12, &d.d22, &d.d1t, &d.d2t, &d.dtt};
  auto valid = [metric_eps](const geometry::SurfaceDerivatives<D>& x) {
    const double g11 = ad::primal(dot(x.d1, x.d1));
    const double g12 = ad::primal(dot(x.d1, x.d2));
    const double g22 = ad::primal(dot(x.d2, x.d2));
    return g11 * g22 - g12 * g12 > metric_eps;
  };
  auto residual = [beta, sign](const geometry::SurfaceDerivatives<D>& x) {
    return geometry::surface_residual(x, beta, sign);
  };
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::array<Index, 9> cols{jets.grad_col(0, p),    jets.grad_col(1, p),    jets.grad_col(2, p),
                                    jets.hess_col(0, 0, p), jets.hess_col(0, 1, p), jets.hess_col(1, 1, p),
                                    jets.hess_col(0, 2, p), jets.hess_col(1, 2, p), jets.hess_col(2, 2, p)};
    bool skip = false;
    sum += dual_term<3, 9>(jets, cols, d, fields, valid, residual, adjoint, coef, skip);
    if (skip) ++skipped;
  }
  return sum / static_cast<double>(n);
}

// --- initial and periodic conditions -----------------------------------------

double initial_term(const JetView& jets, const sampling::InitialSet& set, MatrixXd* adjoint, double weight) {
  const std::size_t n = jets.points();
  const std::size_t dims = static_cast<std::size_t>(set.position.rows());
  const std::size_t t_axis = jets.input_dim() - 1;
  const double coef = 2.0 * weight / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < dims; ++k) {
      const double dx = jets.value(k, p) - set.position(static_cast<Index>(k), static_cast<Index>(p));
      const double dv = jets.grad(k, t_axis, p) - set.velocity(static_cast<Index>(k), static_cast<Index>(p));
      sum += dx * dx + dv * dv;
      if (adjoint != nullptr) {
        add(adjoint, k, jets.value_col(p), coef * dx);
        add(adjoint, k, jets.grad_col(t_axis, p), coef * dv);
      }
    }
  }
  return sum / static_cast<double>(n);
}

Eigen::MatrixXd periodic_points(const sampling::PeriodicSet& set) {
  MatrixXd pts(set.low.rows(), set.low.cols() + set.high.cols());
  pts << set.low, set.high;
  return pts;
}

double periodic_term(const JetView& jets, std::size_t axis, MatrixXd* adjoint, double weight) {
  const std::size_t n = jets.points() / 2;
  const std::size_t dims = jets.input_dim();
  const double coef = 2.0 * weight / static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < dims; ++k) {
      const double dx = jets.value(k, p) - jets.value(k, n + p);
      const double dd = jets.grad(k, axis, p) - jets.grad(k, axis, n + p);
      sum += dx * dx + dd * dd;
      if (adjoint != nullptr) {
        add(adjoint, k, jets.value_col(p), coef * dx);
        add(adjoint, k, jets.value_col(n + p), -coef * dx);
        add(adjoint, k, jets.grad_col(axis, p), coef * dd);
        add(adjoint, k, jets.grad_col(axis, n + p), -coef * dd);
      }
    }
  }
  return sum / static_cast<double>(n);
}

// --- poles ---------------------------------------------------------------------

Eigen::MatrixXd pole_points(const sampling::PoleSet& set, std::size_t ring, double u1_max) {
  const std::size_t n = set.u2.size();
  MatrixXd pts(3, static_cast<Index>(2 * n * ring));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < ring; ++k) {
      const double phi = set.u2[i] + geometry::kTwoPi * static_cast<double>(k) / static_cast<double>(ring);
      pts.col(static_cast<Index>(i * ring + k)) << 0.0, phi, set.t[i];
      pts.col(static_cast<Index>(n * ring + i * ring + k)) << u1_max, phi, set.t[i];
    }
  }
  return pts;
}

PoleTerm pole_term(const JetView& jets, std::size_t samples, std::size_t ring, bool antipodal,
                   config::PoleSmoothness smoothness, MatrixXd* adjoint, double weight) {
  const double inv_k = 1.0 / static_cast<double>(ring);
  const double c = weight / static_cast<double>(samples);
  const std::size_t half = ring / 2;
  PoleTerm term;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t north0 = i * ring;
    const std::size_t south0 = samples * ring + i * ring;
    std::array<double, 3> nbar{};
    std::array<double, 3> sbar{};
    for (std::size_t k = 0; k < ring; ++k) {
      for (std::size_t o = 0; o < 3; ++o) {
        nbar[o] += jets.value(o, north0 + k) * inv_k;
        sbar[o] += jets.value(o, south0 + k) * inv_k;
      }
    }
    for (std::size_t o = 0; o < 3; ++o) {
      const double anti = nbar[o] + sbar[o];
      if (antipodal) term.position += anti * anti;
      for (std::size_t k = 0; k < ring; ++k) {
        const double dn = jets.value(o, north0 + k) - nbar[o];
        const double ds = jets.value(o, south0 + k) - sbar[o];
        term.position += (dn * dn + ds * ds) * inv_k;
        if (adjoint != nullptr) {
          double gn = 2.0 * inv_k * dn;
          double gs = 2.0 * inv_k * ds;
          if (antipodal) {
            gn += 2.0 * inv_k * anti;
            gs += 2.0 * inv_k * anti;
          }
          add(adjoint, o, jets.value_col(north0 + k), c * gn);
          add(adjoint, o, jets.value_col(south0 + k), c * gs);
        }
      }
      for (std::size_t k = 0; k < ring; ++k) {
        for (std::size_t base : {north0, south0}) {
          const double v = jets.grad(o, 1, base + k);
          term.derivative += v * v * inv_k;
          if (adjoint != nullptr) add(adjoint, o, jets.grad_col(1, base + k), c * 2.0 * inv_k * v);
        }
      }
      for (std::size_t base : {north0, south0}) {
        if (smoothness == config::PoleSmoothness::Literal) {
          for (std::size_t k = 0; k < ring; ++k) {
            const double v = jets.grad(o, 0, base + k);
            term.derivative += v * v * inv_k;
            if (adjoint != nullptr) add(adjoint, o, jets.grad_col(0, base + k), c * 2.0 * inv_k * v);
          }
        } else {
          for (std::size_t k = 0; k < half; ++k) {
            const double v = jets.grad(o, 0, base + k) + jets.grad(o, 0, base + k + half);
            term.derivative += 2.0 * inv_k * v * v;
            if (adjoint != nullptr) {
              add(adjoint, o, jets.grad_col(0, base + k), c * 4.0 * inv_k * v);
              add(adjoint, o, jets.grad_col(0, base + k + half), c * 4.0 * inv_k * v);
            }
          }
        }
      }
    }
  }
  term.position /= static_cast<double>(samples);
  term.derivative /= static_cast<double>(samples);
  return term;
}

double pole_position_loss(std::span<const geometry::Vec3> north, std::span<const geometry::Vec3> south,
                          bool antipodal) {
  if (north.empty() || south.empty()) throw ConfigError("pole_position_loss needs north and south samples");
  auto mean = [](std::span<const geometry::Vec3> pts) {
    geometry::Vec3 m{};
    for (const auto& p : pts) m += p;
    return (1.0 / static_cast<double>(pts.size())) * m;
  };
  auto spread = [](std::span<const geometry::Vec3> pts, const geometry::Vec3& m) {
    double s = 0.0;
    for (const auto& p : pts) s += geometry::norm_squared(p - m);
    return s / static_cast<double>(pts.size());
  };
  const auto nbar = mean(north);
  const auto sbar = mean(south);
  double loss = spread(north, nbar) + spread(south, sbar);
  if (antipodal) loss += geometry::norm_squared(nbar + sbar);
  return loss;
}

PoleAnchor pole_anchor(const nn::ParameterVector& params, const config::ProblemSpec& problem,
                       std::span<const double> u2_samples, std::span<const double> times) {
  if (!problem.has_poles()) throw UnsupportedError("pole anchor requires a sphere or ellipsoid problem");
  if (u2_samples.empty()) throw ConfigError("pole anchor needs at least one u2 sample");
  const std::size_t m = u2_samples.size();
  const std::size_t nt = times.size();
  MatrixXd pts(3, static_cast<Index>(2 * m * nt));
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      pts.col(static_cast<Index>(j * m + k)) << 0.0, u2_samples[k], times[j];
      pts.col(static_cast<Index>(nt * m + j * m + k)) << problem.surface.u1_max(), u2_samples[k], times[j];
    }
  }
  nn::BatchJetEngine engine(params.shape(), nn::JetOrder::Value, problem.input_transform());
  engine.forward(params, pts);
  PoleAnchor anchor;
  anchor.north.resize(nt);
  anchor.south.resize(nt);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t o = 0; o < 3; ++o) {
        anchor.north[j][o] += engine.value(o, j * m + k) * inv;
        anchor.south[j][o] += engine.value(o, nt * m + j * m + k) * inv;
      }
    }
  }
  return anchor;
}

// --- assembly --------------------------------------------------------------------

namespace {

// Slots of the point sets inside one batch.
enum Slot : std::size_t { kInterior = 0, kInitial = 1, kBoundary0 = 2, kBoundary1 = 3, kPole = 4 };

// Runs every term of the problem. `jets(slot, points, order)` returns the output
// jets of a point set; `backward(slot, adjoint)` is called only when want_grad.
template <class Jets, class Backward>
LossReport assemble(const config::ProblemSpec& problem, const sampling::SampleBatch& batch, const LossWeights& w,
                    Jets&& jets, Backward&& backward, bool want_grad) {
  LossReport report;
  report.weights = w;
  const std::size_t d = problem.input_dim();
  MatrixXd adj;
  auto adjoint_for = [&](const MatrixXd& m) -> MatrixXd* {
    if (!want_grad) return nullptr;
    adj.setZero(m.rows(), m.cols());
    return &adj;
  };

  {
    const MatrixXd& m = jets(kInterior, batch.interior, nn::JetOrder::Second);
    const JetView view(m, static_cast<std::size_t>(batch.interior.cols()), d);
    MatrixXd* a = adjoint_for(m);
    report.pde = problem.is_curve()
                     ? curve_pde_term(view, problem.beta, problem.residual, report.skipped, a, w.f)
                     : surface_pde_term(view, problem.beta, problem.residual, report.skipped, a, w.f);
    if (a) backward(kInterior, *a);
  }
  {
    const MatrixXd& m = jets(kInitial, batch.initial.points, nn::JetOrder::First);
    const JetView view(m, static_cast<std::size_t>(batch.initial.points.cols()), d);
    MatrixXd* a = adjoint_for(m);
    report.ic = initial_term(view, batch.initial, a, w.ic);
    if (a) backward(kInitial, *a);
  }
  for (std::size_t b = 0; b < batch.boundary.size(); ++b) {
    const auto& set = batch.boundary[b];
    const MatrixXd pts = periodic_points(set);
    const MatrixXd& m = jets(kBoundary0 + b, pts, nn::JetOrder::First);
    const JetView view(m, static_cast<std::size_t>(pts.cols()), d);
    MatrixXd* a = adjoint_for(m);
    report.bc += periodic_term(view, set.axis, a, w.bc);
    if (a) backward(kBoundary0 + b, *a);
  }
  if (batch.pole) {
    const std::size_t ring = problem.sampling.pole_ring;
    const MatrixXd pts = pole_points(*batch.pole, ring, problem.surface.u1_max());
    const MatrixXd& m = jets(kPole, pts, nn::JetOrder::First);
    const JetView view(m, static_cast<std::size_t>(pts.cols()), d);
    MatrixXd* a = adjoint_for(m);
    const auto term =
        pole_term(view, batch.pole->u2.size(), ring, problem.antipodal, problem.pole_smoothness, a, w.pole);
    report.pole = term.total();
    if (a) backward(kPole, *a);
  }
  report.total = weighted_total(report);
  return report;
}

}  // namespace

LossEvaluator::LossEvaluator(const config::ProblemSpec& problem)
    : problem_(problem),
      interior_(problem.network, nn::JetOrder::Second, problem.input_transform()),
      initial_(problem.network, nn::JetOrder::First, problem.input_transform()),
      pole_(problem.network, nn::JetOrder::First, problem.input_transform()) {
  for (int i = 0; i < 2; ++i) boundary_.emplace_back(problem.network, nn::JetOrder::First, problem.input_transform());
}

LossReport LossEvaluator::evaluate(const nn::ParameterVector& params, const sampling::SampleBatch& batch,
                                   const LossWeights& weights, std::span<double> grad) {
  const bool want_grad = !grad.empty();
  if (want_grad) {
    if (grad.size() != params.size()) throw ConfigError("gradient buffer size does not match parameters");
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  auto engine = [&](std::size_t slot) -> nn::BatchJetEngine& {
    switch (slot) {
      case kInterior:
        return interior_;
      case kInitial:
        return initial_;
      case kBoundary0:
        return boundary_[0];
      case kBoundary1:
        return boundary_[1];
      default:
        return pole_;
    }
  };
  auto jets = [&](std::size_t slot, const MatrixXd& pts, nn::JetOrder) -> const MatrixXd& {
    auto& e = engine(slot);
    e.forward(params, pts);
    return e.output();
  };
  auto backward = [&](std::size_t slot, const MatrixXd& adj) { engine(slot).backward(params, adj, grad); };
  return assemble(problem_, batch, weights, jets, backward, want_grad);
}

LossReport evaluate_source(const config::ProblemSpec& problem, const JetSource& source,
                           const sampling::SampleBatch& batch, const LossWeights& weights) {
  MatrixXd held;
  auto jets = [&](std::size_t, const MatrixXd& pts, nn::JetOrder order) -> const MatrixXd& {
    held = source(pts, order);
    return held;
  };
  auto backward = [](std::size_t, const MatrixXd&) {};
  return assemble(problem, batch, weights, jets, backward, false);
}

LossReport curve_loss(const nn::ParameterVector& params, const sampling::SampleBatch& batch,
                      const config::ProblemSpec& problem, const LossWeights& weights) {
  if (!problem.is_curve()) throw ConfigError("curve_loss requires a curve problem");
  LossEvaluator eval(problem);
  return eval.evaluate(params, batch, weights);
}

LossReport surface_loss(const nn::ParameterVector& params, const sampling::SampleBatch& batch,
                        const config::ProblemSpec& problem, const LossWeights& weights) {
  if (problem.is_curve()) throw ConfigError("surface_loss requires a surface problem");
  LossEvaluator eval(problem);
  return eval.evaluate(params, batch, weights);
}

}  // namespace hmcf::loss
