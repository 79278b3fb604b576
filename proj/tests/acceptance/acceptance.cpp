// Acceptance runner: one PASS/FAIL line per criterion.
//
//   hmcf_acceptance [fast|curve|curve_r1|surface|all]...
//
// fast covers 1, 2, 3, 9 (seconds); curve covers 4, 7, 8; curve_r1 covers 5;
// surface covers 6. Training runs are written under $HMCF_ACCEPT_DIR (default
// the build tree).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fd.hpp"
#include "hmcf/config/io.hpp"
#include "hmcf/error.hpp"
#include "hmcf/eval/evaluate.hpp"
#include "hmcf/geometry/curve.hpp"
#include "hmcf/geometry/surface.hpp"
#include "hmcf/loss/loss.hpp"
#include "hmcf/network/batch.hpp"
#include "hmcf/network/forward.hpp"
#include "hmcf/optim/adam.hpp"
#include "hmcf/optim/lbfgs.hpp"
#include "hmcf/oracle/manufactured.hpp"
#include "hmcf/oracle/radial.hpp"
#include "hmcf/random.hpp"
#include "hmcf/sampling/sampling.hpp"
#include "hmcf/trainer/trainer.hpp"

using namespace hmcf;
namespace fs = std::filesystem;

namespace {

// Verdict lines are echoed as they arrive and repeated, in order, at the end.
std::map<int, std::string> verdicts;
int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  char head[64];
  std::snprintf(head, sizeof head, "%s criterion %d: ", pass ? "PASS" : "FAIL", id);
  verdicts[id] = head + detail;
  std::printf("  -> %s\n", verdicts[id].c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const char* fmt, double a = 0, double b = 0, double c = 0) {
  std::printf("  ");
  std::printf(fmt, a, b, c);
  std::printf("\n");
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

fs::path work_dir() {
  if (const char* e = std::getenv("HMCF_ACCEPT_DIR"); e != nullptr && *e != '\0') return e;
  return HMCF_ACCEPT_DEFAULT_DIR;
}

config::ProblemSpec preset(const std::string& name) {
  return config::load_problem(fs::path(HMCF_PRESET_DIR) / name);
}

// --- 1: autodiff ---------------------------------------------------------------

struct AutodiffErrors {
  double first = 0.0;
  double second = 0.0;
};

// Per-output floor: 1e-3 of the largest derivative of that output, so entries that
// vanish exactly (or nearly) are compared on the scale of their neighbours.
template <std::size_t D>
void compare_point(const nn::ParameterVector& params, const std::vector<double>& x, const nn::BatchJetEngine& batch,
                   std::size_t col, AutodiffErrors& err) {
  const auto jets = nn::forward_jets<D>(params, x);
  const auto layers = params.unflatten();
  const auto fd1 = testing::fd_jets(layers, x, 1e-6L);
  const auto fd2 = testing::fd_jets(layers, x, 1e-4L);
  for (std::size_t o = 0; o < jets.size(); ++o) {
    double g_scale = 1e-12, h_scale = 1e-12;
    for (std::size_t i = 0; i < D; ++i) {
      g_scale = std::max(g_scale, std::abs(static_cast<double>(fd1.grad[o][i])));
      for (std::size_t j = 0; j < D; ++j) h_scale = std::max(h_scale, std::abs(static_cast<double>(fd2.hess[o][i][j])));
    }
    for (std::size_t i = 0; i < D; ++i) {
      const double ref = static_cast<double>(fd1.grad[o][i]);
      err.first = std::max(err.first, testing::rel_err(jets[o].grad[i], ref, 1e-3 * g_scale));
      err.first = std::max(err.first, testing::rel_err(batch.grad(o, i, col), ref, 1e-3 * g_scale));
      for (std::size_t j = i; j < D; ++j) {
        const double href = static_cast<double>(fd2.hess[o][i][j]);
        err.second = std::max(err.second, testing::rel_err(jets[o].hess(i, j), href, 1e-3 * h_scale));
        err.second = std::max(err.second, testing::rel_err(batch.hess(o, i, j, col), href, 1e-3 * h_scale));
      }
    }
  }
}

double curve_loss_gradient_error() {
  const auto problem = config::parse_problem(R"({"geometry": {"type": "circle", "r0": 1},
    "network": {"hidden_layers": 3, "hidden_width": 8},
    "sampling": {"n_f": 10, "n_0": 10, "n_b": 10}})");
  auto params = nn::init_xavier(problem.network, 11);
  Rng rng(12);
  for (double& v : params.values()) v += rng.uniform(-0.05, 0.05);
  const auto batch = sampling::build_batch(problem, 13);
  loss::LossEvaluator eval(problem);
  const loss::LossWeights w{1.0, 1.0, 1.0, 0.0};
  std::vector<double> grad(params.size());
  eval.evaluate(params, batch, w, grad);
  double scale = 0.0;
  for (double g : grad) scale = std::max(scale, std::abs(g));
  double worst = 0.0;
  const double h = 1e-5;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto a = params, b = params;
    a[k] += h;
    b[k] -= h;
    // Fourth-order central difference keeps truncation well below the tolerance.
    auto a2 = params, b2 = params;
    a2[k] += 2 * h;
    b2[k] -= 2 * h;
    const double fd = (8 * (eval.evaluate(a, batch, w).total - eval.evaluate(b, batch, w).total) -
                       (eval.evaluate(a2, batch, w).total - eval.evaluate(b2, batch, w).total)) /
                      (12 * h);
    worst = std::max(worst, testing::rel_err(grad[k], fd, 1e-3 * scale));
  }
  return worst;
}

void criterion1() {
  Rng rng(2024);
  AutodiffErrors err;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = trial % 2 == 0 ? 2 : 3;
    nn::NetworkShape shape{d, d, 1 + rng.below(7), 1 + rng.below(50)};
    auto params = nn::init_xavier(shape, 1000 + static_cast<std::uint64_t>(trial));
    for (std::size_t l = 0; l < shape.layer_count(); ++l) {
      for (Eigen::Index i = 0; i < params.bias(l).size(); ++i) params.bias(l)(i) = rng.uniform(-1.0, 1.0);
    }
    // Training boxes: u in [0, 2π] (u1 in [0, π] for surfaces), t in [0, 1.3].
    std::vector<double> x(d);
    x[0] = rng.uniform(0.0, d == 2 ? 2 * std::numbers::pi : std::numbers::pi);
    if (d == 3) x[1] = rng.uniform(0.0, 2 * std::numbers::pi);
    x[d - 1] = rng.uniform(0.0, 1.3);
    nn::BatchJetEngine batch(shape, nn::JetOrder::Second);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(d), 1);
    for (std::size_t i = 0; i < d; ++i) pts(static_cast<Eigen::Index>(i), 0) = x[i];
    batch.forward(params, pts);
    if (d == 2) {
      compare_point<2>(params, x, batch, 0, err);
    } else {
      compare_point<3>(params, x, batch, 0, err);
    }
  }
  const double grad_err = curve_loss_gradient_error();
  note("max rel err: first partials %.3e, second partials %.3e, loss parameter gradient %.3e", err.first, err.second,
       grad_err);
  verdict(1, err.first < 1e-6 && err.second < 1e-4 && grad_err < 1e-4,
          fmt("autodiff vs finite differences (200 pairs up to 7x50): %.2e < 1e-6, %.2e < 1e-4, gradient %.2e < 1e-4",
              err.first, err.second, grad_err));
}

// --- 2: oracle -----------------------------------------------------------------

struct BranchGap {
  double expanding = 0.0;
  double contracting = 0.0;
};

BranchGap closed_form_gap(oracle::RadialKind kind, double r1) {
  oracle::RadialOdeOptions opt;
  opt.dt = 1e-5;
  const auto sol = oracle::radial_rk4(kind, 1.0, r1, 0.0, opt);
  const double T = std::min(oracle::closed_form_collapse_time(kind, 1.0, r1), sol.end_time());
  const double ts = oracle::closed_form_turning_time(kind, 1.0, r1);
  BranchGap gap;
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double t = 0.9 * T * i / n;
    const double d = std::abs(sol.radius_at(t) - oracle::radial_closed_form(kind, 1.0, r1, t));
    (t < ts ? gap.expanding : gap.contracting) = std::max(t < ts ? gap.expanding : gap.contracting, d);
  }
  return gap;
}

void criterion2() {
  using oracle::RadialKind;
  const auto g0 = closed_form_gap(RadialKind::Curve, 0.0);
  const auto g1 = closed_form_gap(RadialKind::Curve, 1.0);
  note("curve r1=0: max |RK4 - closed form| %.3e", g0.contracting);
  note("curve r1=1: expanding branch %.3e, contracting branch %.3e", g1.expanding, g1.contracting);
  oracle::RadialOdeOptions opt;
  opt.dt = 1e-5;
  const auto curve = oracle::radial_rk4(RadialKind::Curve, 1.0, 0.0, 0.0, opt);
  const auto sphere = oracle::radial_rk4(RadialKind::Sphere, 1.0, 0.0, 0.0, opt);
  const double tc = curve.collapse_time.value_or(NAN);
  const double ts = sphere.collapse_time.value_or(NAN);
  const double ec = std::abs(tc - std::sqrt(std::numbers::pi / 2));
  const double es = std::abs(ts - std::sqrt(std::numbers::pi) / 2);
  note("RK4 collapse: curve %.6f (|diff| %.2e), sphere %.6f", tc, ec, ts);
  note("               sphere |diff| %.2e", es);

  // Sphere r1 > 0 branch: reported, not gated.
  const auto gs = closed_form_gap(RadialKind::Sphere, 1.0);
  const double r0_printed = oracle::radial_closed_form(RadialKind::Sphere, 1.0, 1.0, 0.0);
  note("DISCREPANCY sphere r1=1: closed form as printed gives r(0) = %.6f (expected 1); max gap to RK4 %.3e "
       "(expanding) / %.3e (contracting). RK4 is the reference.",
       r0_printed, gs.expanding, gs.contracting);
  const bool pass = g0.contracting < 1e-6 && g1.expanding < 1e-6 && g1.contracting < 1e-6 && ec < 1e-3 && es < 1e-3;
  verdict(2, pass,
          fmt("RK4 vs closed form %.2e / %.2e / %.2e < 1e-6", g0.contracting, g1.expanding, g1.contracting) +
              fmt("; collapse-time errors curve %.2e, sphere %.2e < 1e-3", ec, es));
}

// --- 3: manufactured residuals ----------------------------------------------------

template <class T, std::size_t N>
geometry::Vec<T, N> column(const loss::JetView& v, Eigen::Index col) {
  geometry::Vec<T, N> r;
  for (std::size_t k = 0; k < N; ++k) r[k] = v.at(k, col);
  return r;
}

void criterion3() {
  Rng rng(77);
  double curve_worst = 0.0;
  for (double beta : {0.0, 1.0, 5.0}) {
    oracle::RadialOdeOptions opt;
    opt.dt = 1e-5;
    const auto sol = oracle::radial_rk4(oracle::RadialKind::Curve, 1.0, 0.0, beta, opt);
    const oracle::RadialClosure closure(oracle::RadialKind::Curve, sol);
    Eigen::MatrixXd pts(2, 50);
    for (Eigen::Index i = 0; i < 50; ++i) {
      pts(0, i) = rng.uniform(0.0, 2 * std::numbers::pi);
      pts(1, i) = rng.uniform(0.0, 0.9 * sol.end_time());
    }
    const auto jets = closure.jets(pts, nn::JetOrder::Second);
    const loss::JetView v(jets, 50, 2);
    for (std::size_t p = 0; p < 50; ++p) {
      geometry::CurveDerivatives<double> d{column<double, 2>(v, v.grad_col(0, p)), column<double, 2>(v, v.grad_col(1, p)),
                                           column<double, 2>(v, v.hess_col(0, 0, p)),
                                           column<double, 2>(v, v.hess_col(0, 1, p)),
                                           column<double, 2>(v, v.hess_col(1, 1, p))};
      const auto f = geometry::curve_residual(d, beta);
      curve_worst = std::max(curve_worst, std::sqrt(geometry::norm_squared(f)));
    }
  }
  oracle::RadialOdeOptions opt;
  opt.dt = 1e-5;
  const auto sol = oracle::radial_rk4(oracle::RadialKind::Sphere, 1.0, 0.0, 0.0, opt);
  const oracle::RadialClosure closure(oracle::RadialKind::Sphere, sol);
  Eigen::MatrixXd pts(3, 50);
  for (Eigen::Index i = 0; i < 50; ++i) {
    pts(0, i) = rng.uniform(0.05, std::numbers::pi - 0.05);
    pts(1, i) = rng.uniform(0.0, 2 * std::numbers::pi);
    pts(2, i) = rng.uniform(0.0, 0.9 * sol.end_time());
  }
  const auto jets = closure.jets(pts, nn::JetOrder::Second);
  const loss::JetView v(jets, 50, 3);
  double sphere_worst = 0.0;
  for (std::size_t p = 0; p < 50; ++p) {
    geometry::SurfaceDerivatives<double> d{
        column<double, 3>(v, v.grad_col(0, p)),    column<double, 3>(v, v.grad_col(1, p)),
        column<double, 3>(v, v.grad_col(2, p)),    column<double, 3>(v, v.hess_col(0, 0, p)),
        column<double, 3>(v, v.hess_col(0, 1, p)), column<double, 3>(v, v.hess_col(1, 1, p)),
        column<double, 3>(v, v.hess_col(0, 2, p)), column<double, 3>(v, v.hess_col(1, 2, p)),
        column<double, 3>(v, v.hess_col(2, 2, p))};
    const auto f = geometry::surface_residual(d, 0.0, -1);
    sphere_worst = std::max(sphere_worst, std::sqrt(geometry::norm_squared(f)));
  }
  verdict(3, curve_worst < 1e-10 && sphere_worst < 1e-8,
          fmt("manufactured residual max norm: curve %.2e < 1e-10 (beta 0,1,5), sphere %.2e < 1e-8", curve_worst,
              sphere_worst));
}

// --- 9: sampling and optimizer properties --------------------------------------------

void criterion9() {
  std::size_t batches = 0, stratified = 0;
  const std::vector<std::string> configs{
      R"({"geometry": {"type": "circle", "r0": 1}, "sampling": {"n_f": 5000, "n_0": 100, "n_b": 100}})",
      R"({"geometry": {"type": "ellipse", "a": 1.5, "b": 1}, "time": {"train": 2.0}, "sampling": {"n_f": 777, "n_0": 31, "n_b": 17}})",
      R"({"geometry": {"type": "sphere", "r0": 1}, "sampling": {"n_f": 4000, "n_0": 100, "n_b": 100, "n_p": 100}})",
      R"({"geometry": {"type": "ellipsoid", "a": 1, "b": 1.2, "c": 0.8}, "sampling": {"n_f": 999, "n_0": 50, "n_b": 40, "n_p": 30}})",
      R"({"geometry": {"type": "torus", "R": 2, "r": 1}, "sampling": {"n_f": 2000, "n_0": 100, "n_b": 100}})"};
  for (const auto& text : configs) {
    const auto p = config::parse_problem(text);
    for (std::uint64_t step = 0; step < 40; ++step) {
      ++batches;
      if (sampling::batch_is_stratified(sampling::build_batch(p, sampling::step_seed(p.sample_seed, step)), p)) {
        ++stratified;
      }
    }
  }

  Rng rng(9);
  double clip_err = 0.0;
  bool clip_untouched = true;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> g(1 + rng.below(300));
    const double scale = std::pow(10.0, rng.uniform(-3.0, 3.0));
    for (double& v : g) v = scale * rng.uniform(-1.0, 1.0);
    const auto before = g;
    const double max_norm = rng.uniform(0.1, 2.0);
    const double pre = optim::clip_gradient(g, max_norm);
    double post = 0.0;
    for (double v : g) post += v * v;
    post = std::sqrt(post);
    clip_err = std::max(clip_err, std::abs(post - std::min(pre, max_norm)));
    if (pre <= max_norm && g != before) clip_untouched = false;
  }

  // ½ xᵀAx, A = BᵀB + I.
  const std::size_t n = 10;
  std::vector<double> a(n * n), b(n * n);
  Rng qrng(42);
  for (double& v : b) v = qrng.uniform(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (std::size_t k = 0; k < n; ++k) s += b[k * n + i] * b[k * n + j];
      a[i * n + j] = s;
    }
  }
  auto quad = [&](std::span<const double> x, std::span<double> g) {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < n; ++j) ax += a[i * n + j] * x[j];
      g[i] = ax;
      f += 0.5 * x[i] * ax;
    }
    return f;
  };
  std::vector<double> x(n);
  for (double& v : x) v = qrng.uniform(-1.0, 1.0);
  optim::LbfgsOptions opt;
  opt.g_tol = 1e-10;
  const auto r = optim::lbfgs_run(x, quad, 30, opt);

  note("LHS: %.0f of %.0f batches stratified in every coordinate", static_cast<double>(stratified),
       static_cast<double>(batches));
  note("clip: max |post norm - min(pre, max)| %.3e; L-BFGS: %.0f iterations, grad norm %.3e", clip_err,
       static_cast<double>(r.iterations), r.grad_norm);
  const bool pass = stratified == batches && clip_err < 1e-12 && clip_untouched && r.grad_norm < 1e-10 &&
                    r.iterations <= 30;
  verdict(9, pass,
          fmt("LHS %.0f/%.0f batches stratified; clip error %.2e < 1e-12; L-BFGS grad %.2e < 1e-10", static_cast<double>(stratified),
              static_cast<double>(batches), clip_err, r.grad_norm) +
              fmt(" in %.0f <= 30 iterations", static_cast<double>(r.iterations)));
}

// --- training runs ----------------------------------------------------------------

struct TrainedRun {
  config::ProblemSpec problem;
  trainer::RunRecord record;
  eval::EvalSummary summary;
  std::string history_csv;
};

TrainedRun train_and_evaluate(const std::string& preset_name, const std::string& tag) {
  TrainedRun run;
  run.problem = preset(preset_name);
  const fs::path dir = work_dir() / tag;
  run.problem.output_dir = dir.string();
  std::printf("  training %s into %s\n", preset_name.c_str(), dir.c_str());
  std::fflush(stdout);
  trainer::TrainOptions opt;
  opt.on_step = [](const trainer::HistoryRow& row) {
    if (row.step % 2500 == 0) {
      std::printf("    step %zu total %.4e\n", row.step, row.report.total);
      std::fflush(stdout);
    }
  };
  run.record = trainer::train(run.problem, opt);
  trainer::write_run(run.record, run.problem, dir);
  std::stringstream ss;
  trainer::write_history_csv(ss, run.record.history);
  run.history_csv = ss.str();
  run.summary = eval::run_evaluation(run.record.best.params, run.problem, dir / "eval");
  std::printf("  %.1f s, %zu history rows, best step %zu, validation loss %.3e, L-BFGS: %s%s\n",
              run.record.wall_seconds, run.record.history.size(), run.record.best.step, run.record.best.total_loss,
              run.record.lbfgs_stop_reason.c_str(), run.record.diverged ? " (DIVERGED)" : "");
  std::fflush(stdout);
  return run;
}

void curve_group() {
  const auto run = train_and_evaluate("desk/circle_r1_0_b0.json", "accept_circle_r1_0");
  const auto& s = run.summary;
  const double final_total = run.record.history.empty() ? NAN : run.record.history.back().report.total;
  note("final training loss %.3e (target < 1e-4, informational)", final_total);
  const double rel = s.train ? s.train->rel_l2 : NAN;
  note("rel L2 on [0, T_train] %.3e; on [0, T_display] %.3e", rel, s.display ? s.display->rel_l2 : NAN);
  verdict(4, !run.record.diverged && rel < 5e-3, fmt("desk circle r1=0 mean-radius rel L2 %.3e < 5e-3", rel));

  const double T = eval::horizon(run.problem);
  const double normal =
      eval::normality_defect(eval::network_jets(run.record.best.params, run.problem), run.problem, 0.1 * T, 0.8 * T);
  verdict(7, normal < 0.05, fmt("normality defect on [0.1T, 0.8T] (T = %.4f) %.3e < 0.05", T, normal));

  const auto again = train_and_evaluate("desk/circle_r1_0_b0.json", "accept_circle_r1_0_repeat");
  const bool same = again.history_csv == run.history_csv && !run.history_csv.empty();
  verdict(8, same,
          std::string("repeated run loss history ") + (same ? "bitwise identical" : "DIFFERS") +
              fmt(" (%.0f bytes)", static_cast<double>(run.history_csv.size())));
}

void curve_r1_group() {
  const auto run = train_and_evaluate("desk/circle_r1_1_b0.json", "accept_circle_r1_1");
  const auto& s = run.summary;
  const double rel = s.train ? s.train->rel_l2 : NAN;
  const double peak = s.train ? s.train->peak_predicted : NAN;
  const double target = std::exp(0.5);
  const double peak_err = std::abs(peak - target) / target;
  note("reference peak %.5f, predicted peak %.5f", s.train ? s.train->peak_reference : NAN, peak);
  verdict(5, !run.record.diverged && rel < 1e-2 && peak_err < 0.02,
          fmt("desk circle r1=1 rel L2 %.3e < 1e-2; peak %.4f within %.2f%% of e^0.5 (< 2%%)", rel, peak,
              100 * peak_err));
}

void surface_group() {
  const auto run = train_and_evaluate("desk/sphere_r1_0_b0.json", "accept_sphere_r1_0");
  const auto& s = run.summary;
  const double rel = s.train ? s.train->rel_l2 : NAN;
  const double pole = s.pole_var.value_or(NAN);
  note("normality defect (reported, not gating) %.3e", s.normality);
  verdict(6, !run.record.diverged && rel < 5e-2 && s.periodicity < 1e-2 && pole < 1e-2,
          fmt("desk sphere r1=0 rel L2 %.3e < 5e-2; periodicity %.2e < 1e-2; pole u2-variance %.2e < 1e-2", rel,
              s.periodicity, pole));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> groups;
  for (int i = 1; i < argc; ++i) groups.insert(argv[i]);
  if (groups.empty() || groups.count("all")) groups = {"fast", "curve", "curve_r1", "surface"};
  for (const auto& g : groups) {
    if (g != "fast" && g != "curve" && g != "curve_r1" && g != "surface") {
      std::fprintf(stderr, "unknown group %s (fast, curve, curve_r1, surface, all)\n", g.c_str());
      return 2;
    }
  }
  try {
    if (groups.count("fast")) {
      criterion1();
      criterion2();
      criterion3();
    }
    if (groups.count("curve")) curve_group();
    if (groups.count("curve_r1")) curve_r1_group();
    if (groups.count("surface")) surface_group();
    if (groups.count("fast")) criterion9();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("\n");
  for (const auto& [id, line] : verdicts) std::printf("%s\n", line.c_str());
  return failures == 0 ? 0 : 1;
}
