#include "hmcf/trainer/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "hmcf/autodiff/gradient.hpp"
#include "hmcf/config/io.hpp"
#include "hmcf/error.hpp"
#include "hmcf/optim/adam.hpp"
#include "hmcf/optim/lbfgs.hpp"
#include "hmcf/optim/schedule.hpp"
#include "hmcf/random.hpp"
#include "hmcf/sampling/sampling.hpp"

namespace hmcf::trainer {

loss::LossWeights curve_weights(const config::CurveSchedule& schedule, std::size_t step) {
  const double w = step < schedule.warmup_steps ? schedule.warmup_weight : 1.0;
  return {1.0, w, w, 0.0};
}

loss::LossWeights surface_weights(const config::SurfaceSchedule& schedule, std::size_t step) {
  double w = 1.0;
  if (step < schedule.tier1_end) {
    w = schedule.tier_weight;
  } else if (step < schedule.tier2_end) {
    w = schedule.tier_weight * schedule.tier_decay;
  }
  return {1.0, w, w, w};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

loss::LossWeights unit_weights(const config::ProblemSpec& p) { return {1.0, 1.0, 1.0, p.has_poles() ? 1.0 : 0.0}; }

// Shared state of one training run.
class Session {
 public:
  Session(const config::ProblemSpec& problem, const TrainOptions& options)
      : problem_(problem),
        options_(options),
        evaluator_(problem),
        params_(options.initial ? *options.initial : nn::init_xavier(problem.network, problem.init_seed)),
        grad_(params_.size(), 0.0) {
    if (!(params_.shape() == problem.network)) throw ConfigError("initial parameters do not match the network shape");
    config::ProblemSpec val = problem;
    val.sampling.n_f = problem.validation_points();
    validation_ = sampling::build_batch(val, mix_seed(problem.sample_seed + 0x76616c6964ULL));
    record_.init_seed = problem.init_seed;
    record_.sample_seed = problem.sample_seed;
    record_.best = {params_, 0, kInf};
  }

  bool skip(std::size_t step) const { return step <= options_.start_step; }

  const loss::LossReport& gradient(const sampling::SampleBatch& batch, const loss::LossWeights& w) {
    report_ = evaluator_.evaluate(params_, batch, w, grad_);
    ad::require_finite(report_.total, grad_);
    return report_;
  }

  void log(std::size_t step, double lr, const loss::LossReport& report) {
    record_.history.push_back({step, lr, report});
    record_.skipped_points += report.skipped;
    if (options_.on_step) options_.on_step(record_.history.back());
  }

  // Unit-weight loss on the validation batch; keeps the lowest.
  void track_best(std::size_t step) {
    const auto rep = evaluator_.evaluate(params_, validation_, unit_weights(problem_));
    if (std::isfinite(rep.total) && rep.total < record_.best.total_loss) record_.best = {params_, step, rep.total};
  }

  void maybe_track(std::size_t step) {
    if (step % problem_.validation.interval == 0) track_best(step);
  }

  // L-BFGS on a fixed batch with unit weights; rows are numbered from first_step.
  void lbfgs(const sampling::SampleBatch& batch, std::size_t iters, std::size_t first_step) {
    if (iters == 0 || skip(first_step + iters - 1)) return;
    const auto& cfg = problem_.lbfgs;
    optim::LbfgsOptions opt;
    opt.history = cfg.history;
    opt.initial_step = cfg.initial_step;
    opt.g_tol = cfg.g_tol;
    opt.max_evals = cfg.max_evals;
    opt.c1 = cfg.c1;
    opt.c2 = cfg.c2;
    const auto w = unit_weights(problem_);
    nn::ParameterVector trial = params_;
    std::vector<loss::LossReport> seen;  // reports of the current iteration, matched by total
    ad::Objective f = [&](std::span<const double> x, std::span<double> g) {
      std::copy(x.begin(), x.end(), trial.values().begin());
      auto rep = evaluator_.evaluate(trial, batch, w, g);
      seen.push_back(rep);
      return rep.total;
    };
    auto on_iter = [&](std::size_t iter, double value) {
      loss::LossReport rep;
      for (auto it = seen.rbegin(); it != seen.rend(); ++it) {
        if (it->total == value) {
          rep = *it;
          break;
        }
      }
      seen.clear();
      log(first_step + iter - 1, cfg.initial_step, rep);
    };
    std::vector<double> x(params_.values().begin(), params_.values().end());
    const auto result = optim::lbfgs_run(x, f, iters, opt, on_iter);
    std::copy(x.begin(), x.end(), params_.values().begin());
    record_.lbfgs_stop_reason = result.stop_reason;
  }

  nn::ParameterVector& params() { return params_; }
  std::vector<double>& grad() { return grad_; }
  RunRecord& record() { return record_; }
  const config::ProblemSpec& problem() const { return problem_; }

  RunRecord finish(std::size_t last_step, std::chrono::steady_clock::time_point start) {
    const auto rep = evaluator_.evaluate(params_, validation_, unit_weights(problem_));
    record_.final = {params_, last_step, rep.total};
    if (!record_.diverged && std::isfinite(rep.total) && rep.total < record_.best.total_loss) {
      record_.best = record_.final;
    }
    record_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(record_);
  }

  void diverged(const std::exception& e) {
    record_.diverged = true;
    record_.divergence_message = e.what();
  }

 private:
  const config::ProblemSpec& problem_;
  const TrainOptions& options_;
  loss::LossEvaluator evaluator_;
  nn::ParameterVector params_;
  std::vector<double> grad_;
  sampling::SampleBatch validation_;
  loss::LossReport report_;
  RunRecord record_;
};

optim::AdamHyper adam_hyper(const config::ProblemSpec& p) { return {p.adam.beta1, p.adam.beta2, p.adam.eps}; }

}  // namespace

RunRecord train_curve(const config::ProblemSpec& problem, const TrainOptions& options) {
  if (!problem.is_curve()) throw ConfigError("train_curve requires a curve problem");
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  Session s(problem, options);
  const auto& cs = problem.curve_schedule;
  const auto batch = sampling::build_batch(problem, problem.sample_seed);
  optim::Adam adam(s.params().size(), adam_hyper(problem));
  std::size_t step = 0;
  try {
    s.track_best(0);
    for (std::size_t i = 1; i <= cs.adam1_steps; ++i) {
      step = i;
      if (s.skip(step)) continue;
      const auto& rep = s.gradient(batch, curve_weights(cs, i));
      s.log(step, cs.adam1_lr, rep);
      adam.step(s.params().values(), s.grad(), cs.adam1_lr);
      s.maybe_track(step);
    }
    for (std::size_t i = 1; i <= cs.adam2_steps; ++i) {
      step = cs.adam1_steps + i;
      if (s.skip(step)) continue;
      const auto& rep = s.gradient(batch, {1.0, 1.0, 1.0, 0.0});
      s.log(step, cs.adam2_lr, rep);
      adam.step(s.params().values(), s.grad(), cs.adam2_lr);
      s.maybe_track(step);
    }
    s.lbfgs(batch, cs.lbfgs_iters, cs.adam1_steps + cs.adam2_steps + 1);
    step = cs.adam1_steps + cs.adam2_steps + cs.lbfgs_iters;
  } catch (const DivergenceError& e) {
    s.diverged(e);
  } catch (const NumericOverflow& e) {
    s.diverged(e);
  }
  return s.finish(step, start);
}

RunRecord train_surface(const config::ProblemSpec& problem, const TrainOptions& options) {
  if (problem.is_curve()) throw ConfigError("train_surface requires a surface problem");
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  Session s(problem, options);
  const auto& ss = problem.surface_schedule;
  const auto schedule =
      optim::LrSchedule::one_cycle(ss.max_lr, ss.adam_steps, ss.warmup_fraction, ss.div_factor, ss.final_div_factor);
  optim::Adam adam(s.params().size(), adam_hyper(problem));
  std::size_t step = 0;
  try {
    s.track_best(0);
    for (std::size_t i = 1; i <= ss.adam_steps; ++i) {
      step = i;
      if (s.skip(step)) continue;
      const auto batch = sampling::build_batch(problem, sampling::step_seed(problem.sample_seed, i));
      const double lr = schedule.at(i - 1);
      const auto& rep = s.gradient(batch, surface_weights(ss, i));
      s.log(step, lr, rep);
      optim::clip_gradient(s.grad(), ss.clip);
      adam.step(s.params().values(), s.grad(), lr);
      s.maybe_track(step);
    }
    if (ss.adam_steps > 0 && ss.adam_steps % problem.validation.interval != 0) s.track_best(ss.adam_steps);
    if (ss.lbfgs_iters > 0) {
      s.params() = s.record().best.params;
      const auto fixed = sampling::build_batch(problem, sampling::step_seed(problem.sample_seed, ss.adam_steps + 1));
      s.lbfgs(fixed, ss.lbfgs_iters, ss.adam_steps + 1);
      step = ss.adam_steps + ss.lbfgs_iters;
    }
  } catch (const DivergenceError& e) {
    s.diverged(e);
  } catch (const NumericOverflow& e) {
    s.diverged(e);
  }
  return s.finish(step, start);
}

RunRecord train(const config::ProblemSpec& problem, const TrainOptions& options) {
  return problem.is_curve() ? train_curve(problem, options) : train_surface(problem, options);
}

namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& history) {
  os << "step,lr,w_f,w_0,w_b,w_p,pde,ic,bc,pole,total\n";
  for (const auto& row : history) {
    const auto& r = row.report;
    os << row.step << ',';
    for (double v : {row.lr, r.weights.f, r.weights.ic, r.weights.bc, r.weights.pole, r.pde, r.ic, r.bc}) {
      put(os, v);
      os << ',';
    }
    if (r.pole) put(os, *r.pole);
    os << ',';
    put(os, r.total);
    os << '\n';
  }
}

void write_run(const RunRecord& record, const config::ProblemSpec& problem, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "loss_history.csv");
    write_history_csv(os, record.history);
  }
  nn::save_checkpoint(dir / "best.ckpt", record.best);
  nn::save_checkpoint(dir / "final.ckpt", record.final);
  auto manifest = nlohmann::json::parse(config::dump_problem(problem));
  manifest["run"] = {{"version", "hmcf 0.1.0"},
                     {"init_seed", record.init_seed},
                     {"sample_seed", record.sample_seed},
                     {"wall_seconds", record.wall_seconds},
                     {"history_rows", record.history.size()},
                     {"best_step", record.best.step},
                     {"best_validation_loss", record.best.total_loss},
                     {"final_step", record.final.step},
                     {"final_validation_loss", record.final.total_loss},
                     {"skipped_points", record.skipped_points},
                     {"diverged", record.diverged},
                     {"divergence_message", record.divergence_message},
                     {"lbfgs_stop_reason", record.lbfgs_stop_reason},
                     {"threads", 1}};
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace hmcf::trainer
