// hmcf: train, evaluate and inspect PINN solvers for hyperbolic mean curvature flow.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hmcf/config/io.hpp"
#include "hmcf/error.hpp"
#include "hmcf/eval/evaluate.hpp"
#include "hmcf/network/checkpoint.hpp"
#include "hmcf/oracle/radial.hpp"
#include "hmcf/sampling/sampling.hpp"
#include "hmcf/trainer/trainer.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDiverged = 1;
constexpr int kConfigError = 2;

struct TrainArgs {
  std::string config;
  std::string resume;
  std::string output;
  std::size_t log_every = 1000;
};

int cmd_train(const TrainArgs& a) {
  auto problem = hmcf::config::load_problem(a.config);
  if (!a.output.empty()) problem.output_dir = a.output;
  const auto dir = hmcf::config::resolve_output_dir(problem);

  hmcf::trainer::TrainOptions opts;
  if (!a.resume.empty()) {
    auto ckpt = hmcf::nn::load_checkpoint(a.resume);
    if (!(ckpt.params.shape() == problem.network)) {
      throw hmcf::ConfigError("checkpoint network shape does not match the config");
    }
    opts.initial = std::move(ckpt.params);
    opts.start_step = ckpt.step;
  }
  opts.on_step = [&](const hmcf::trainer::HistoryRow& row) {
    if (a.log_every > 0 && row.step % a.log_every == 0) {
      std::fprintf(stderr, "step %zu lr %.3g total %.6e pde %.3e ic %.3e bc %.3e\n", row.step, row.lr,
                   row.report.total, row.report.pde, row.report.ic, row.report.bc);
    }
  };
  const auto record = hmcf::trainer::train(problem, opts);
  hmcf::trainer::write_run(record, problem, dir);
  std::fprintf(stderr, "wrote %s (%zu steps, %.1f s)\n", dir.c_str(), record.history.size(), record.wall_seconds);
  if (record.diverged) {
    std::fprintf(stderr, "training diverged: %s\n", record.divergence_message.c_str());
    return kDiverged;
  }
  return kOk;
}

int cmd_eval(const std::string& checkpoint, const std::string& config, const std::string& output) {
  const auto problem = hmcf::config::load_problem(config);
  const auto ckpt = hmcf::nn::load_checkpoint(checkpoint);
  if (!(ckpt.params.shape() == problem.network)) {
    throw hmcf::ConfigError("checkpoint network shape does not match the config");
  }
  const std::filesystem::path dir =
      output.empty() ? hmcf::config::resolve_output_dir(problem) / "eval" : std::filesystem::path(output);
  const auto s = hmcf::eval::run_evaluation(ckpt.params, problem, dir);
  if (s.train) {
    std::printf("rel_l2_train_horizon %.6e\nrel_l2_display_horizon %.6e\npeak_radius %.6f (reference %.6f)\n",
                s.train->rel_l2, s.display->rel_l2, s.train->peak_predicted, s.train->peak_reference);
  } else {
    std::printf("radius comparison: %s\n", s.oracle_note.c_str());
  }
  std::printf("normality_max %.6e\nperiodicity_max %.6e\n", s.normality, s.periodicity);
  if (s.pole_var) std::printf("pole_u2_variance_max %.6e\n", *s.pole_var);
  std::printf("wrote %s\n", dir.c_str());
  return kOk;
}

struct OracleArgs {
  std::string kind;
  double r0 = 1.0;
  double r1 = 0.0;
  double beta = 0.0;
  double dt = 1e-4;
  std::size_t every = 1;
  bool closed_form = false;
  std::string output;
};

int cmd_oracle(const OracleArgs& a) {
  hmcf::oracle::RadialKind kind;
  if (a.kind == "curve") {
    kind = hmcf::oracle::RadialKind::Curve;
  } else if (a.kind == "sphere") {
    kind = hmcf::oracle::RadialKind::Sphere;
  } else {
    throw hmcf::ConfigError("oracle kind must be curve or sphere");
  }
  hmcf::oracle::RadialOdeOptions opt;
  opt.dt = a.dt;
  const auto sol = hmcf::oracle::radial_rk4(kind, a.r0, a.r1, a.beta, opt);

  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output);
    if (!file) throw hmcf::ConfigError("cannot write " + a.output);
  }
  std::ostream& os = a.output.empty() ? std::cout : file;
  const bool with_closed = a.closed_form && a.beta == 0.0 && a.r1 >= 0.0;
  os << (with_closed ? "t,r,r_closed_form\n" : "t,r\n");
  char buf[96];
  const std::size_t n = sol.times.size();
  const std::size_t every = std::max<std::size_t>(a.every, 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i % every != 0 && i + 1 != n) continue;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", sol.times[i], sol.radii[i]);
    os << buf;
    if (with_closed) {
      try {
        std::snprintf(buf, sizeof buf, ",%.17g", hmcf::oracle::radial_closed_form(kind, a.r0, a.r1, sol.times[i]));
        os << buf;
      } catch (const hmcf::DomainError&) {
        os << ',';
      }
    }
    os << '\n';
  }
  if (sol.collapse_time) std::fprintf(stderr, "collapse time (RK4 halt) %.9f\n", *sol.collapse_time);
  if (sol.turning_time) std::fprintf(stderr, "turning time %.9f, peak radius %.9f\n", *sol.turning_time, sol.peak_radius());
  return kOk;
}

int cmd_sample_preview(const std::string& config, std::optional<std::uint64_t> seed, const std::string& output) {
  const auto problem = hmcf::config::load_problem(config);
  const auto batch = hmcf::sampling::build_batch(problem, seed.value_or(problem.sample_seed));
  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) throw hmcf::ConfigError("cannot write " + output);
  }
  std::ostream& os = output.empty() ? std::cout : file;
  os << (problem.is_curve() ? "set,u,t\n" : "set,u1,u2,t\n");
  char buf[32];
  auto dump = [&](const char* name, const Eigen::MatrixXd& pts) {
    for (Eigen::Index c = 0; c < pts.cols(); ++c) {
      os << name;
      for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        std::snprintf(buf, sizeof buf, ",%.17g", pts(r, c));
        os << buf;
      }
      os << '\n';
    }
  };
  dump("interior", batch.interior);
  dump("initial", batch.initial.points);
  for (std::size_t b = 0; b < batch.boundary.size(); ++b) {
    dump(batch.boundary.size() == 1 ? "boundary" : (b == 0 ? "boundary_u1" : "boundary_u2"), batch.boundary[b].low);
  }
  if (batch.pole) {
    for (std::size_t i = 0; i < batch.pole->u2.size(); ++i) {
      std::snprintf(buf, sizeof buf, "pole,0,%.17g", batch.pole->u2[i]);
      os << buf;
      std::snprintf(buf, sizeof buf, ",%.17g\n", batch.pole->t[i]);
      os << buf;
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PINN solver for hyperbolic mean curvature flow of curves and surfaces"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "train a network from a JSON config");
  train_cmd->add_option("config", train.config, "problem config (JSON)")->required();
  train_cmd->add_option("--resume", train.resume, "start from this checkpoint and skip the steps it already covers");
  train_cmd->add_option("--output", train.output, "run directory (overrides output_dir)");
  train_cmd->add_option("--log-every", train.log_every, "progress line every N steps (0: silent)");

  std::string eval_ckpt, eval_config, eval_output;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint: radius vs oracle, snapshots, diagnostics");
  eval_cmd->add_option("checkpoint", eval_ckpt, "checkpoint file")->required();
  eval_cmd->add_option("config", eval_config, "problem config (JSON)")->required();
  eval_cmd->add_option("--output", eval_output, "output directory (default <run dir>/eval)");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "integrate the radial ODE and print t,r as CSV");
  oracle_cmd->add_option("kind", oracle.kind, "curve or sphere")->required();
  oracle_cmd->add_option("r0", oracle.r0, "initial radius")->required();
  oracle_cmd->add_option("r1", oracle.r1, "initial outward normal speed")->required();
  oracle_cmd->add_option("beta", oracle.beta, "dissipative coefficient");
  oracle_cmd->add_option("dt", oracle.dt, "RK4 step");
  oracle_cmd->add_option("--every", oracle.every, "print every N-th step (the last step is always printed)");
  oracle_cmd->add_flag("--closed-form", oracle.closed_form, "add the closed-form radius column (beta = 0, r1 >= 0)");
  oracle_cmd->add_option("--output", oracle.output, "CSV file (default stdout)");

  std::string preview_config, preview_output;
  std::optional<std::uint64_t> preview_seed;
  auto* preview_cmd = app.add_subcommand("sample-preview", "dump one sampled batch as CSV");
  preview_cmd->add_option("config", preview_config, "problem config (JSON)")->required();
  preview_cmd->add_option("--seed", preview_seed, "sampling seed (default seeds.sample)");
  preview_cmd->add_option("--output", preview_output, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*train_cmd) return cmd_train(train);
    if (*eval_cmd) return cmd_eval(eval_ckpt, eval_config, eval_output);
    if (*oracle_cmd) return cmd_oracle(oracle);
    if (*preview_cmd) return cmd_sample_preview(preview_config, preview_seed, preview_output);
  } catch (const hmcf::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const hmcf::DivergenceError& e) {
    std::fprintf(stderr, "divergence: %s\n", e.what());
    return kDiverged;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kDiverged;
  }
  return kOk;
}
