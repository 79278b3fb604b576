#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hmcf/config/problem.hpp"
#include "hmcf/loss/loss.hpp"
#include "hmcf/network/parameters.hpp"
#include "hmcf/oracle/radial.hpp"

namespace hmcf::eval {

/// Output values (output_dim × N) at input points (input_dim × N).
using ValueSource = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& points)>;

ValueSource network_values(const nn::ParameterVector& params, const config::ProblemSpec& problem);
loss::JetSource network_jets(const nn::ParameterVector& params, const config::ProblemSpec& problem);

/// n equally spaced times on [t0, t1], endpoints included.
std::vector<double> time_grid(double t0, double t1, std::size_t n);

/// Mean distance of the predicted curve/surface to its centroid at each time.
/// Curves use `curve_samples` equally spaced u; surfaces a u1 × u2 grid with
/// u1 at cell midpoints. Only times and radii are filled in the result.
oracle::RadialSolution mean_radius_trajectory(const ValueSource& source, const config::ProblemSpec& problem,
                                              std::span<const double> times);

/// Kind of radial oracle for the problem. Throws UnsupportedError
/// ("no oracle for this geometry") unless it is a circle or sphere with a constant profile.
oracle::RadialKind oracle_kind(const config::ProblemSpec& problem);

/// RK4 reference trajectory (dt = 1e-5), the binding oracle.
oracle::RadialSolution reference_solution(const config::ProblemSpec& problem);

/// Collapse time of the reference, or T_train when the geometry has no oracle.
double horizon(const config::ProblemSpec& problem);

struct RadiusComparison {
  std::vector<double> times;
  std::vector<double> predicted;
  std::vector<double> reference;
  double rel_l2 = 0.0;
  double peak_predicted = 0.0;
  double peak_reference = 0.0;
};

RadiusComparison compare_radius(const ValueSource& source, const config::ProblemSpec& problem,
                                std::span<const double> times);

/// max |X_t·X_{u_i}| / (|X_t||X_{u_i}| + 1e-12) over the evaluation grid for t in [t_lo, t_hi].
double normality_defect(const loss::JetSource& source, const config::ProblemSpec& problem, double t_lo,
                        double t_hi);

/// max |X(…, 0, …) − X(…, 2π, …)| across every periodic direction of the parametrization.
double periodicity_defect(const ValueSource& source, const config::ProblemSpec& problem,
                          std::span<const double> times);

/// Largest u2-variance (1/M)Σ|X(pole, u2_j, t) − mean|² over both poles and all times.
double pole_variance(const ValueSource& source, const config::ProblemSpec& problem, std::span<const double> times);

/// Rows `t,u,x,y` (curves) or `t,u1,u2,x,y,z` (surfaces) plus an `extrapolated` flag.
void write_snapshot_csv(std::ostream& os, const ValueSource& source, const config::ProblemSpec& problem,
                        std::span<const double> times);

struct EvalSummary {
  std::optional<RadiusComparison> train;    // on [0, T_train]
  std::optional<RadiusComparison> display;  // on [0, T_display]
  std::string oracle_note;
  double normality = 0.0;
  double periodicity = 0.0;
  std::optional<double> pole_var;
  std::size_t snapshot_rows = 0;
};

/// Computes every diagnostic and writes trajectory.csv (when an oracle exists),
/// snapshot.csv and diagnostics.json into out_dir.
EvalSummary run_evaluation(const nn::ParameterVector& params, const config::ProblemSpec& problem,
                           const std::filesystem::path& out_dir);

EvalSummary evaluate(const ValueSource& values, const loss::JetSource& jets, const config::ProblemSpec& problem);

}  // namespace hmcf::eval
