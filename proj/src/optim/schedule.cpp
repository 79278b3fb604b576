#include "hmcf/optim/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hmcf::optim {

namespace {

double cos_anneal(double start, double end, double pct) {
  return end + (start - end) / 2.0 * (1.0 + std::cos(std::numbers::pi * pct));
}

}  // namespace

double LrSchedule::at(std::size_t step) const {
  if (kind == Kind::Constant) return lr;
  const double initial = lr / div_factor;
  const double final_lr = initial / final_div_factor;
  if (total_steps <= 1) return initial;
  const double s = static_cast<double>(std::min(step, total_steps - 1));
  const double warm_end = warmup_fraction * static_cast<double>(total_steps) - 1.0;
  const double last = static_cast<double>(total_steps - 1);
  if (warm_end > 0.0 && s <= warm_end) return cos_anneal(initial, lr, s / warm_end);
  const double start = std::max(warm_end, 0.0);
  if (last <= start) return final_lr;
  return cos_anneal(lr, final_lr, (s - start) / (last - start));
}

}  // namespace hmcf::optim
