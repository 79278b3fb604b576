#include "hmcf/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "hmcf/error.hpp"
#include "hmcf/network/batch.hpp"

namespace hmcf::eval {

using Eigen::Index;
using Eigen::MatrixXd;

ValueSource network_values(const nn::ParameterVector& params, const config::ProblemSpec& problem) {
  auto engine = std::make_shared<nn::BatchJetEngine>(params.shape(), nn::JetOrder::Value, problem.input_transform());
  return [engine, params](const MatrixXd& points) -> MatrixXd {
    engine->forward(params, points);
    return engine->output();
  };
}

loss::JetSource network_jets(const nn::ParameterVector& params, const config::ProblemSpec& problem) {
  const auto transform = problem.input_transform();
  return [params, transform](const MatrixXd& points, nn::JetOrder order) -> MatrixXd {
    nn::BatchJetEngine engine(params.shape(), order, transform);
    engine.forward(params, points);
    return engine.output();
  };
}

std::vector<double> time_grid(double t0, double t1, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {t0};
  std::vector<double> ts(n);
  for (std::size_t j = 0; j < n; ++j) {
    ts[j] = t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(n - 1);
  }
  ts.back() = t1;
  return ts;
}

namespace {

// Parameter-space grid used for radii and diagnostics (no time coordinate).
MatrixXd param_grid(const config::ProblemSpec& p) {
  const auto& e = p.evaluation;
  if (p.is_curve()) {
    MatrixXd g(1, static_cast<Index>(e.curve_samples));
    for (std::size_t j = 0; j < e.curve_samples; ++j) {
      g(0, static_cast<Index>(j)) = geometry::kTwoPi * static_cast<double>(j) / static_cast<double>(e.curve_samples);
    }
    return g;
  }
  const std::size_t n1 = e.surface_u1_samples;
  const std::size_t n2 = e.surface_u2_samples;
  const double u1_max = p.surface.u1_max();
  MatrixXd g(2, static_cast<Index>(n1 * n2));
  for (std::size_t i = 0; i < n1; ++i) {
    const double u1 = p.has_poles() ? u1_max * (static_cast<double>(i) + 0.5) / static_cast<double>(n1)
                                    : u1_max * static_cast<double>(i) / static_cast<double>(n1);
    for (std::size_t j = 0; j < n2; ++j) {
      g.col(static_cast<Index>(i * n2 + j)) << u1, geometry::kTwoPi * static_cast<double>(j) / static_cast<double>(n2);
    }
  }
  return g;
}

// Appends time t to every column of a parameter grid.
MatrixXd with_time(const MatrixXd& grid, double t) {
  MatrixXd pts(grid.rows() + 1, grid.cols());
  pts.topRows(grid.rows()) = grid;
  pts.bottomRows(1).setConstant(t);
  return pts;
}

// All times stacked: column block j holds the grid at times[j].
MatrixXd space_time(const MatrixXd& grid, std::span<const double> times) {
  MatrixXd pts(grid.rows() + 1, grid.cols() * static_cast<Index>(times.size()));
  for (std::size_t j = 0; j < times.size(); ++j) {
    pts.middleCols(static_cast<Index>(j) * grid.cols(), grid.cols()) = with_time(grid, times[j]);
  }
  return pts;
}

}  // namespace

oracle::RadialSolution mean_radius_trajectory(const ValueSource& source, const config::ProblemSpec& problem,
                                              std::span<const double> times) {
  const MatrixXd grid = param_grid(problem);
  const Index m = grid.cols();
  const MatrixXd values = source(space_time(grid, times));
  oracle::RadialSolution traj;
  traj.times.assign(times.begin(), times.end());
  traj.radii.resize(times.size());
  for (std::size_t j = 0; j < times.size(); ++j) {
    const auto block = values.middleCols(static_cast<Index>(j) * m, m);
    const Eigen::VectorXd centroid = block.rowwise().mean();
    traj.radii[j] = (block.colwise() - centroid).colwise().norm().mean();
  }
  return traj;
}

oracle::RadialKind oracle_kind(const config::ProblemSpec& p) {
  const bool constant = p.velocity.kind == geometry::VelocityProfile::Kind::Constant;
  if (constant && p.is_curve() && p.curve.kind == geometry::CurveShape::Kind::Circle) return oracle::RadialKind::Curve;
  if (constant && !p.is_curve() && p.surface.kind == geometry::SurfaceShape::Kind::Sphere) {
    return oracle::RadialKind::Sphere;
  }
  throw UnsupportedError("no oracle for this geometry");
}

oracle::RadialSolution reference_solution(const config::ProblemSpec& p) {
  const auto kind = oracle_kind(p);
  const double r0 = p.is_curve() ? p.curve.radius() : p.surface.radius();
  oracle::RadialOdeOptions opt;
  opt.dt = 1e-5;
  opt.t_max = 1.5 * std::max(p.t_display, 1.0) + 10.0;
  return oracle::radial_rk4(kind, r0, p.velocity.r1, p.beta, opt);
}

double horizon(const config::ProblemSpec& p) {
  try {
    const auto sol = reference_solution(p);
    if (sol.collapse_time) return *sol.collapse_time;
  } catch (const UnsupportedError&) {
  }
  return p.t_train;
}

RadiusComparison compare_radius(const ValueSource& source, const config::ProblemSpec& problem,
                                std::span<const double> times) {
  const auto ref = reference_solution(problem);
  const auto traj = mean_radius_trajectory(source, problem, times);
  RadiusComparison c;
  c.times = traj.times;
  c.predicted = traj.radii;
  c.reference.reserve(times.size());
  for (double t : times) c.reference.push_back(ref.radius_at(t));
  c.rel_l2 = oracle::relative_l2(c.predicted, c.reference);
  c.peak_predicted = *std::max_element(c.predicted.begin(), c.predicted.end());
  c.peak_reference = *std::max_element(c.reference.begin(), c.reference.end());
  return c;
}

double normality_defect(const loss::JetSource& source, const config::ProblemSpec& problem, double t_lo,
                        double t_hi) {
  const MatrixXd grid = param_grid(problem);
  const auto times = time_grid(t_lo, t_hi, problem.evaluation.time_samples);
  const MatrixXd pts = space_time(grid, times);
  const MatrixXd jets = source(pts, nn::JetOrder::First);
  const std::size_t d = problem.input_dim();
  const loss::JetView view(jets, static_cast<std::size_t>(pts.cols()), d);
  double worst = 0.0;
  for (std::size_t p = 0; p < view.points(); ++p) {
    for (std::size_t axis = 0; axis + 1 < d; ++axis) {
      double dot = 0.0, nt = 0.0, nu = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double xt = view.grad(k, d - 1, p);
        const double xu = view.grad(k, axis, p);
        dot += xt * xu;
        nt += xt * xt;
        nu += xu * xu;
      }
      worst = std::max(worst, std::abs(dot) / (std::sqrt(nt) * std::sqrt(nu) + 1e-12));
    }
  }
  return worst;
}

double periodicity_defect(const ValueSource& source, const config::ProblemSpec& problem,
                          std::span<const double> times) {
  // Pairs of parameter points that must coincide.
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  if (problem.is_curve()) {
    pairs.push_back({{0.0}, {geometry::kTwoPi}});
  } else {
    const MatrixXd grid = param_grid(problem);
    const std::size_t n2 = problem.evaluation.surface_u2_samples;
    for (Index c = 0; c < grid.cols(); c += static_cast<Index>(n2)) {
      pairs.push_back({{grid(0, c), 0.0}, {grid(0, c), geometry::kTwoPi}});
    }
    if (problem.is_torus()) {
      for (Index c = 0; c < static_cast<Index>(n2); ++c) {
        pairs.push_back({{0.0, grid(1, c)}, {geometry::kTwoPi, grid(1, c)}});
      }
    }
  }
  const auto dims = static_cast<Index>(problem.input_dim() - 1);
  MatrixXd lo(dims, static_cast<Index>(pairs.size()));
  MatrixXd hi(dims, static_cast<Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (Index k = 0; k < dims; ++k) {
      lo(k, static_cast<Index>(i)) = pairs[i].first[static_cast<std::size_t>(k)];
      hi(k, static_cast<Index>(i)) = pairs[i].second[static_cast<std::size_t>(k)];
    }
  }
  const MatrixXd a = source(space_time(lo, times));
  const MatrixXd b = source(space_time(hi, times));
  return (a - b).colwise().norm().maxCoeff();
}

double pole_variance(const ValueSource& source, const config::ProblemSpec& problem, std::span<const double> times) {
  if (!problem.has_poles()) throw UnsupportedError("pole variance requires a sphere or ellipsoid problem");
  const std::size_t m = problem.evaluation.surface_u2_samples;
  double worst = 0.0;
  for (double pole : {0.0, problem.surface.u1_max()}) {
    MatrixXd grid(2, static_cast<Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      grid.col(static_cast<Index>(j)) << pole, geometry::kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    }
    const MatrixXd values = source(space_time(grid, times));
    for (std::size_t t = 0; t < times.size(); ++t) {
      const auto block = values.middleCols(static_cast<Index>(t * m), static_cast<Index>(m));
      const Eigen::VectorXd mean = block.rowwise().mean();
      worst = std::max(worst, (block.colwise() - mean).colwise().squaredNorm().mean());
    }
  }
  return worst;
}

namespace {

// Closed grid (endpoints included) used for snapshots.
MatrixXd snapshot_grid(const config::ProblemSpec& p) {
  const auto& e = p.evaluation;
  if (p.is_curve()) {
    MatrixXd g(1, static_cast<Index>(e.curve_samples + 1));
    for (std::size_t j = 0; j <= e.curve_samples; ++j) {
      g(0, static_cast<Index>(j)) = geometry::kTwoPi * static_cast<double>(j) / static_cast<double>(e.curve_samples);
    }
    return g;
  }
  const std::size_t n1 = e.surface_u1_samples + 1;
  const std::size_t n2 = e.surface_u2_samples + 1;
  MatrixXd g(2, static_cast<Index>(n1 * n2));
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      g.col(static_cast<Index>(i * n2 + j)) << p.surface.u1_max() * static_cast<double>(i) / static_cast<double>(n1 - 1),
          geometry::kTwoPi * static_cast<double>(j) / static_cast<double>(n2 - 1);
    }
  }
  return g;
}

void write_row(std::ostream& os, std::span<const double> xs, bool extrapolated) {
  char buf[32];
  for (double x : xs) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf << ',';
  }
  os << (extrapolated ? 1 : 0) << '\n';
}

}  // namespace

void write_snapshot_csv(std::ostream& os, const ValueSource& source, const config::ProblemSpec& problem,
                        std::span<const double> times) {
  const MatrixXd grid = snapshot_grid(problem);
  const MatrixXd values = source(space_time(grid, times));
  os << (problem.is_curve() ? "t,u,x,y,extrapolated\n" : "t,u1,u2,x,y,z,extrapolated\n");
  const Index m = grid.cols();
  std::vector<double> row;
  for (std::size_t j = 0; j < times.size(); ++j) {
    for (Index c = 0; c < m; ++c) {
      row.clear();
      row.push_back(times[j]);
      for (Index k = 0; k < grid.rows(); ++k) row.push_back(grid(k, c));
      for (Index k = 0; k < values.rows(); ++k) row.push_back(values(k, static_cast<Index>(j) * m + c));
      write_row(os, row, times[j] > problem.t_train);
    }
  }
}

EvalSummary evaluate(const ValueSource& values, const loss::JetSource& jets, const config::ProblemSpec& problem) {
  EvalSummary s;
  const auto& e = problem.evaluation;
  const auto train_times = time_grid(0.0, problem.t_train, e.time_samples);
  try {
    oracle_kind(problem);
    s.train = compare_radius(values, problem, train_times);
    s.display = compare_radius(values, problem, time_grid(0.0, problem.t_display, e.time_samples));
  } catch (const UnsupportedError& err) {
    s.oracle_note = err.what();
  }
  const double T = horizon(problem);
  s.normality = normality_defect(jets, problem, 0.1 * T, std::min(0.8 * T, problem.t_display));
  s.periodicity = periodicity_defect(values, problem, train_times);
  if (problem.has_poles()) s.pole_var = pole_variance(values, problem, train_times);
  return s;
}

EvalSummary run_evaluation(const nn::ParameterVector& params, const config::ProblemSpec& problem,
                           const std::filesystem::path& out_dir) {
  if (!(params.shape() == problem.network)) throw ConfigError("checkpoint network shape does not match the config");
  std::filesystem::create_directories(out_dir);
  const auto values = network_values(params, problem);
  EvalSummary s = evaluate(values, network_jets(params, problem), problem);

  if (s.display) {
    std::ofstream os(out_dir / "trajectory.csv");
    os << "t,radius_pred,radius_ref,extrapolated\n";
    const auto& d = *s.display;
    for (std::size_t j = 0; j < d.times.size(); ++j) {
      const double row[] = {d.times[j], d.predicted[j], d.reference[j]};
      write_row(os, row, d.times[j] > problem.t_train);
    }
  }
  {
    std::ofstream os(out_dir / "snapshot.csv");
    const auto times = time_grid(0.0, problem.t_display, problem.evaluation.snapshot_times);
    write_snapshot_csv(os, values, problem, times);
    s.snapshot_rows = static_cast<std::size_t>(snapshot_grid(problem).cols()) * times.size();
  }
  nlohmann::json j;
  j["geometry"] = problem.geometry_name();
  if (s.train) {
    j["rel_l2_train_horizon"] = s.train->rel_l2;
    j["rel_l2_display_horizon"] = s.display->rel_l2;
    j["peak_radius_predicted"] = s.train->peak_predicted;
    j["peak_radius_reference"] = s.train->peak_reference;
  } else {
    j["oracle"] = s.oracle_note;
  }
  j["normality_max"] = s.normality;
  j["periodicity_max"] = s.periodicity;
  if (s.pole_var) j["pole_u2_variance_max"] = *s.pole_var;
  std::ofstream(out_dir / "diagnostics.json") << j.dump(2) << '\n';
  return s;
}

}  // namespace hmcf::eval
