#pragma once

#include <cstddef>

namespace hmcf::optim {

/// Learning rate as a function of the 0-based step index.
struct LrSchedule {
  enum class Kind { Constant, OneCycle };
  Kind kind = Kind::Constant;
  double lr = 1e-3;        // constant rate, or the peak rate for one-cycle
  std::size_t total_steps = 1;
  double warmup_fraction = 0.3;
  double div_factor = 25.0;         // initial rate = lr / div_factor
  double final_div_factor = 1e4;    // final rate = initial rate / final_div_factor

  static LrSchedule constant(double lr) { return {Kind::Constant, lr, 1, 0.3, 25.0, 1e4}; }
  static LrSchedule one_cycle(double max_lr, std::size_t total_steps, double warmup_fraction = 0.3,
                              double div_factor = 25.0, double final_div_factor = 1e4) {
    return {Kind::OneCycle, max_lr, total_steps, warmup_fraction, div_factor, final_div_factor};
  }

  /// Cosine warm-up from lr/div_factor to lr over the first warmup_fraction of
  /// the steps, then cosine annealing to the final rate at step total_steps − 1.
  double at(std::size_t step) const;
};

}  // namespace hmcf::optim
