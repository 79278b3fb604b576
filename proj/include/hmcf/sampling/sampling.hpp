#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hmcf/config/problem.hpp"

namespace hmcf::sampling {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Latin hypercube sample: a d × n matrix, one column per point. In every
/// dimension each of the n equal strata holds exactly one point.
Eigen::MatrixXd lhs(std::size_t n, std::span<const Interval> bounds, std::uint64_t seed);

/// True when row `dim` of samples places exactly one point in each stratum of `bounds`.
bool is_stratified(const Eigen::MatrixXd& samples, std::size_t dim, Interval bounds);

/// Initial-condition points at t = 0 with their targets.
struct InitialSet {
  Eigen::MatrixXd points;    // input_dim × N_0
  Eigen::MatrixXd position;  // output_dim × N_0
  Eigen::MatrixXd velocity;  // output_dim × N_0
};

/// Periodicity pairs: `low` and `high` differ only in coordinate `axis` (0 vs 2π).
struct PeriodicSet {
  std::size_t axis = 0;
  Eigen::MatrixXd low;   // input_dim × N_b
  Eigen::MatrixXd high;  // input_dim × N_b
};

/// Pole collocation samples (u2, t); the loss builds north/south rings from them.
struct PoleSet {
  std::vector<double> u2;
  std::vector<double> t;
};

struct SampleBatch {
  std::size_t input_dim = 2;
  Eigen::MatrixXd interior;  // input_dim × N_f
  InitialSet initial;
  std::vector<PeriodicSet> boundary;  // one set (curve, polar surface) or two (torus)
  std::optional<PoleSet> pole;        // polar surfaces only

  std::size_t point_count() const;
};

/// Samples every point set of the problem from one seed.
SampleBatch build_batch(const config::ProblemSpec& problem, std::uint64_t seed);

/// Seed of the batch used at a given training step (seed ⊕ step).
inline std::uint64_t step_seed(std::uint64_t seed, std::uint64_t step) { return seed ^ step; }

/// Checks the per-dimension stratification of every sampled coordinate in the batch.
bool batch_is_stratified(const SampleBatch& batch, const config::ProblemSpec& problem);

}  // namespace hmcf::sampling
