#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hmcf/config/problem.hpp"
#include "hmcf/geometry/vec.hpp"
#include "hmcf/network/batch.hpp"
#include "hmcf/network/parameters.hpp"
#include "hmcf/sampling/sampling.hpp"

namespace hmcf::loss {

struct LossWeights {
  double f = 1.0;
  double ic = 1.0;
  double bc = 1.0;
  double pole = 1.0;
};

/// Per-component mean squared losses and their weighted total.
struct LossReport {
  double pde = 0.0;
  double ic = 0.0;
  double bc = 0.0;  // sum over periodicity sets (bc1 + bc2 for the torus)
  std::optional<double> pole;
  LossWeights weights;
  double total = 0.0;
  std::size_t skipped = 0;  // interior points with a degenerate parametrization
};

/// w_f·pde + w_0·ic + w_b·bc (+ w_p·pole), summed left to right.
double weighted_total(const LossReport& report);

/// Read-only access to output jets in the BatchJetEngine column layout.
class JetView {
 public:
  JetView(const Eigen::MatrixXd& jets, std::size_t points, std::size_t input_dim)
      : m_(&jets), n_(points), d_(input_dim) {}
  std::size_t points() const { return n_; }
  std::size_t input_dim() const { return d_; }
  Eigen::Index value_col(std::size_t n) const { return static_cast<Eigen::Index>(n); }
  Eigen::Index grad_col(std::size_t i, std::size_t n) const { return static_cast<Eigen::Index>((1 + i) * n_ + n); }
  Eigen::Index hess_col(std::size_t i, std::size_t j, std::size_t n) const {
    return static_cast<Eigen::Index>((1 + d_ + ad::packed_index(d_, i, j)) * n_ + n);
  }
  double at(std::size_t o, Eigen::Index col) const { return (*m_)(static_cast<Eigen::Index>(o), col); }
  double value(std::size_t o, std::size_t n) const { return (*m_)(static_cast<Eigen::Index>(o), value_col(n)); }
  double grad(std::size_t o, std::size_t i, std::size_t n) const {
    return (*m_)(static_cast<Eigen::Index>(o), grad_col(i, n));
  }
  double hess(std::size_t o, std::size_t i, std::size_t j, std::size_t n) const {
    return (*m_)(static_cast<Eigen::Index>(o), hess_col(i, j, n));
  }

 private:
  const Eigen::MatrixXd* m_;
  std::size_t n_;
  std::size_t d_;
};

// --- individual terms ------------------------------------------------------
// Each returns the mean squared error of its point set. When `adjoint` is non-null
// it receives weight·∂(term)/∂(jet component), shaped like the jets.

double curve_pde_term(const JetView& jets, double beta, const geometry::ResidualOptions& options,
                      std::size_t& skipped, Eigen::MatrixXd* adjoint = nullptr, double weight = 1.0);

double surface_pde_term(const JetView& jets, double beta, const geometry::ResidualOptions& options,
                        std::size_t& skipped, Eigen::MatrixXd* adjoint = nullptr, double weight = 1.0);

/// Mean of |X − X0|² + |X_t − X1|² over the initial points.
double initial_term(const JetView& jets, const sampling::InitialSet& set, Eigen::MatrixXd* adjoint = nullptr,
                    double weight = 1.0);

/// Jets of 2N points, the N `low` points followed by the N `high` points.
/// Mean of |X(low) − X(high)|² + |∂_axis X(low) − ∂_axis X(high)|².
double periodic_term(const JetView& jets, std::size_t axis, Eigen::MatrixXd* adjoint = nullptr, double weight = 1.0);

struct PoleTerm {
  double position = 0.0;    // spread about the anchors plus antipodal coupling
  double derivative = 0.0;  // X_{u1}, X_{u2} conditions
  double total() const { return position + derivative; }
};

/// Input points of the pole rings: for sample i and k < K, north (0, u2_i + 2πk/K, t_i)
/// at column i·K + k and south (π, …) at column N·K + i·K + k.
Eigen::MatrixXd pole_points(const sampling::PoleSet& set, std::size_t ring, double u1_max);

/// Pole loss on ring jets laid out by pole_points (first-order jets).
PoleTerm pole_term(const JetView& jets, std::size_t samples, std::size_t ring, bool antipodal,
                   config::PoleSmoothness smoothness, Eigen::MatrixXd* adjoint = nullptr, double weight = 1.0);

/// Position part of the pole loss for one time sample: spread of the north and
/// south outputs about their means, plus |N̄ + S̄|² when antipodal.
double pole_position_loss(std::span<const geometry::Vec3> north, std::span<const geometry::Vec3> south,
                          bool antipodal);

/// Anchor r(t) realized as the mean pole prediction over u2 samples, per time sample.
struct PoleAnchor {
  std::vector<geometry::Vec3> north;
  std::vector<geometry::Vec3> south;
};

PoleAnchor pole_anchor(const nn::ParameterVector& params, const config::ProblemSpec& problem,
                       std::span<const double> u2_samples, std::span<const double> times);

// --- assembled losses -------------------------------------------------------

/// Produces output jets (output_dim × C·N) for input points (input_dim × N).
using JetSource = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& points, nn::JetOrder order)>;

/// Evaluates the full loss of a problem on a batch, optionally with ∂L/∂θ.
/// Holds the batched engines so repeated calls reuse their buffers.
class LossEvaluator {
 public:
  explicit LossEvaluator(const config::ProblemSpec& problem);

  /// grad, when non-empty, is overwritten with the gradient of report.total.
  LossReport evaluate(const nn::ParameterVector& params, const sampling::SampleBatch& batch,
                      const LossWeights& weights, std::span<double> grad = {});

 private:
  config::ProblemSpec problem_;
  nn::BatchJetEngine interior_;
  nn::BatchJetEngine initial_;
  std::vector<nn::BatchJetEngine> boundary_;
  nn::BatchJetEngine pole_;
};

/// Same assembly with jets taken from an arbitrary source (no gradient).
LossReport evaluate_source(const config::ProblemSpec& problem, const JetSource& source,
                           const sampling::SampleBatch& batch, const LossWeights& weights);

/// Network loss for curve problems.
LossReport curve_loss(const nn::ParameterVector& params, const sampling::SampleBatch& batch,
                      const config::ProblemSpec& problem, const LossWeights& weights);

/// Network loss for surface problems; polar or toroidal mode follows the shape.
LossReport surface_loss(const nn::ParameterVector& params, const sampling::SampleBatch& batch,
                        const config::ProblemSpec& problem, const LossWeights& weights);

/// Column-wise concatenation of the low and high points of a periodic set.
Eigen::MatrixXd periodic_points(const sampling::PeriodicSet& set);

}  // namespace hmcf::loss
