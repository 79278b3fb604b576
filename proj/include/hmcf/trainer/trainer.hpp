#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hmcf/config/problem.hpp"
#include "hmcf/loss/loss.hpp"
#include "hmcf/network/checkpoint.hpp"
#include "hmcf/network/parameters.hpp"

namespace hmcf::trainer {

/// One logged optimizer step: the loss at the parameters the step started from
/// (Adam) or arrived at (L-BFGS), with the rate and weights in force.
struct HistoryRow {
  std::size_t step = 0;
  double lr = 0.0;
  loss::LossReport report;
};

struct RunRecord {
  std::vector<HistoryRow> history;
  nn::Checkpoint best;   // lowest unit-weight validation loss seen
  nn::Checkpoint final;  // parameters at the end of the run (last finite ones after divergence)
  double wall_seconds = 0.0;
  std::size_t skipped_points = 0;
  std::uint64_t init_seed = 0;
  std::uint64_t sample_seed = 0;
  bool diverged = false;
  std::string divergence_message;
  std::string lbfgs_stop_reason;
};

struct TrainOptions {
  /// Starting parameters instead of Xavier initialization (resume).
  std::optional<nn::ParameterVector> initial;
  /// Steps ≤ start_step are skipped; their schedule positions still count.
  std::size_t start_step = 0;
  /// Progress callback, invoked for every history row.
  std::function<void(const HistoryRow&)> on_step;
};

/// Curve weights of Adam phase 1 at 1-based step i.
loss::LossWeights curve_weights(const config::CurveSchedule& schedule, std::size_t step);
/// Surface weights at 1-based Adam step i.
loss::LossWeights surface_weights(const config::SurfaceSchedule& schedule, std::size_t step);

/// Adam at two rates on a fixed batch, then L-BFGS, all on the same parameters.
RunRecord train_curve(const config::ProblemSpec& problem, const TrainOptions& options = {});

/// Adam with fresh batches, tiered weights, clipping and one-cycle rates, then
/// L-BFGS from the best state on a fixed batch with unit weights.
RunRecord train_surface(const config::ProblemSpec& problem, const TrainOptions& options = {});

RunRecord train(const config::ProblemSpec& problem, const TrainOptions& options = {});

/// CSV: step,lr,w_f,w_0,w_b,w_p,pde,ic,bc,pole,total, numbers printed with %.17g.
void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history);

/// Writes manifest.json, loss_history.csv, best.ckpt and final.ckpt into dir.
void write_run(const RunRecord& record, const config::ProblemSpec& problem, const std::filesystem::path& dir);

}  // namespace hmcf::trainer
