#include "hmcf/sampling/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "hmcf/error.hpp"
#include "hmcf/geometry/curve.hpp"
#include "hmcf/geometry/surface.hpp"
#include "hmcf/random.hpp"

namespace hmcf::sampling {

namespace {

// Stream tags keep the point sets of one batch independent.
enum Stream : std::uint64_t { kInterior = 1, kInitial = 2, kBoundary0 = 3, kBoundary1 = 4, kPole = 5 };

std::uint64_t stream_seed(std::uint64_t seed, Stream s) { return mix_seed(mix_seed(seed) + s); }

std::size_t stratum(double x, Interval b, double width, std::size_t n) {
  const auto cell = static_cast<std::size_t>(std::floor((x - b.lo) / width));
  return std::min(cell, n - 1);
}

}  // namespace

Eigen::MatrixXd lhs(std::size_t n, std::span<const Interval> bounds, std::uint64_t seed) {
  if (n == 0) throw ConfigError("lhs requires n >= 1");
  Rng rng(mix_seed(seed));
  const auto d = static_cast<Eigen::Index>(bounds.size());
  Eigen::MatrixXd out(d, static_cast<Eigen::Index>(n));
  std::vector<std::size_t> perm(n);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Interval b = bounds[static_cast<std::size_t>(k)];
    if (!(b.hi > b.lo)) throw ConfigError("lhs requires nonempty bounds");
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    const double width = (b.hi - b.lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      double x = std::min(b.lo + width * (static_cast<double>(perm[i]) + rng.uniform()), b.hi);
      // Rounding can push x across a stratum edge; nudge it back so the cell index is exact.
      while (x > b.lo && stratum(x, b, width, n) > perm[i]) x = std::nextafter(x, b.lo);
      while (x < b.hi && stratum(x, b, width, n) < perm[i]) x = std::nextafter(x, b.hi);
      out(k, static_cast<Eigen::Index>(i)) = x;
    }
  }
  return out;
}

bool is_stratified(const Eigen::MatrixXd& samples, std::size_t dim, Interval bounds) {
  const auto n = static_cast<std::size_t>(samples.cols());
  if (n == 0) return false;
  std::vector<int> hits(n, 0);
  const double width = (bounds.hi - bounds.lo) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = samples(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(i));
    if (x < bounds.lo || x > bounds.hi) return false;
    ++hits[stratum(x, bounds, width, n)];
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

std::size_t SampleBatch::point_count() const {
  std::size_t count = static_cast<std::size_t>(interior.cols() + initial.points.cols());
  for (const auto& b : boundary) count += static_cast<std::size_t>(b.low.cols());
  if (pole) count += pole->u2.size();
  return count;
}

namespace {

SampleBatch build_curve(const config::ProblemSpec& p, std::uint64_t seed) {
  const auto& s = p.sampling;
  SampleBatch batch;
  batch.input_dim = 2;
  const double two_pi = geometry::kTwoPi;

  const std::array<Interval, 2> box{{{0.0, two_pi}, {0.0, p.t_train}}};
  batch.interior = lhs(s.n_f, box, stream_seed(seed, kInterior));

  const std::array<Interval, 1> ubox{{{0.0, two_pi}}};
  const Eigen::MatrixXd u0 = lhs(s.n_0, ubox, stream_seed(seed, kInitial));
  const auto n0 = static_cast<Eigen::Index>(s.n_0);
  batch.initial.points.resize(2, n0);
  batch.initial.position.resize(2, n0);
  batch.initial.velocity.resize(2, n0);
  for (Eigen::Index i = 0; i < n0; ++i) {
    const double u = u0(0, i);
    batch.initial.points.col(i) << u, 0.0;
    const auto x = geometry::curve_initial(p.curve, u);
    const auto v = geometry::curve_initial_velocity(p.curve, p.velocity, u);
    batch.initial.position.col(i) << x[0], x[1];
    batch.initial.velocity.col(i) << v[0], v[1];
  }

  const std::array<Interval, 1> tbox{{{0.0, p.t_train}}};
  const Eigen::MatrixXd tb = lhs(s.n_b, tbox, stream_seed(seed, kBoundary0));
  PeriodicSet bc;
  bc.axis = 0;
  const auto nb = static_cast<Eigen::Index>(s.n_b);
  bc.low.resize(2, nb);
  bc.high.resize(2, nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    bc.low.col(i) << 0.0, tb(0, i);
    bc.high.col(i) << two_pi, tb(0, i);
  }
  batch.boundary.push_back(std::move(bc));
  return batch;
}

SampleBatch build_surface(const config::ProblemSpec& p, std::uint64_t seed) {
  const auto& s = p.sampling;
  SampleBatch batch;
  batch.input_dim = 3;
  const double two_pi = geometry::kTwoPi;
  const double u1_max = p.surface.u1_max();

  const auto [lo1, hi1] = p.interior_box(0);
  const std::array<Interval, 3> box{{{lo1, hi1}, {0.0, two_pi}, {0.0, p.t_train}}};
  batch.interior = lhs(s.n_f, box, stream_seed(seed, kInterior));

  const std::array<Interval, 2> pbox{{{0.0, u1_max}, {0.0, two_pi}}};
  const Eigen::MatrixXd uv = lhs(s.n_0, pbox, stream_seed(seed, kInitial));
  const auto n0 = static_cast<Eigen::Index>(s.n_0);
  batch.initial.points.resize(3, n0);
  batch.initial.position.resize(3, n0);
  batch.initial.velocity.resize(3, n0);
  for (Eigen::Index i = 0; i < n0; ++i) {
    const double u1 = uv(0, i);
    const double u2 = uv(1, i);
    batch.initial.points.col(i) << u1, u2, 0.0;
    const auto x = geometry::surface_initial(p.surface, u1, u2);
    const auto v = geometry::surface_initial_velocity(p.surface, p.velocity, u1, u2);
    batch.initial.position.col(i) << x[0], x[1], x[2];
    batch.initial.velocity.col(i) << v[0], v[1], v[2];
  }

  const auto nb = static_cast<Eigen::Index>(s.n_b);
  // Periodicity in u2 (axis 1): free coordinates (u1, t).
  {
    const std::array<Interval, 2> fbox{{{0.0, u1_max}, {0.0, p.t_train}}};
    const Eigen::MatrixXd f = lhs(s.n_b, fbox, stream_seed(seed, kBoundary0));
    PeriodicSet bc;
    bc.axis = 1;
    bc.low.resize(3, nb);
    bc.high.resize(3, nb);
    for (Eigen::Index i = 0; i < nb; ++i) {
      bc.low.col(i) << f(0, i), 0.0, f(1, i);
      bc.high.col(i) << f(0, i), two_pi, f(1, i);
    }
    batch.boundary.push_back(std::move(bc));
  }
  if (p.is_torus()) {
    // Periodicity in u1 (axis 0): free coordinates (u2, t).
    const std::array<Interval, 2> fbox{{{0.0, two_pi}, {0.0, p.t_train}}};
    const Eigen::MatrixXd f = lhs(s.n_b, fbox, stream_seed(seed, kBoundary1));
    PeriodicSet bc;
    bc.axis = 0;
    bc.low.resize(3, nb);
    bc.high.resize(3, nb);
    for (Eigen::Index i = 0; i < nb; ++i) {
      bc.low.col(i) << 0.0, f(0, i), f(1, i);
      bc.high.col(i) << two_pi, f(0, i), f(1, i);
    }
    // L_b1 is the u1 pair; keep it first.
    batch.boundary.insert(batch.boundary.begin(), std::move(bc));
  } else {
    const std::array<Interval, 2> fbox{{{0.0, two_pi}, {0.0, p.t_train}}};
    const Eigen::MatrixXd f = lhs(s.n_p, fbox, stream_seed(seed, kPole));
    PoleSet pole;
    pole.u2.resize(s.n_p);
    pole.t.resize(s.n_p);
    for (std::size_t i = 0; i < s.n_p; ++i) {
      pole.u2[i] = f(0, static_cast<Eigen::Index>(i));
      pole.t[i] = f(1, static_cast<Eigen::Index>(i));
    }
    batch.pole = std::move(pole);
  }
  return batch;
}

}  // namespace

SampleBatch build_batch(const config::ProblemSpec& problem, std::uint64_t seed) {
  return problem.is_curve() ? build_curve(problem, seed) : build_surface(problem, seed);
}

bool batch_is_stratified(const SampleBatch& batch, const config::ProblemSpec& p) {
  const std::size_t d = batch.input_dim;
  for (std::size_t k = 0; k < d; ++k) {
    const auto [lo, hi] = p.interior_box(k);
    if (!is_stratified(batch.interior, k, {lo, hi})) return false;
  }
  for (std::size_t k = 0; k + 1 < d; ++k) {
    if (!is_stratified(batch.initial.points, k, {0.0, p.param_hi(k)})) return false;
  }
  for (const auto& bc : batch.boundary) {
    for (std::size_t k = 0; k < d; ++k) {
      if (k == bc.axis) continue;
      const double hi = k == d - 1 ? p.t_train : p.param_hi(k);
      if (!is_stratified(bc.low, k, {0.0, hi})) return false;
    }
  }
  if (batch.pole) {
    const auto n = static_cast<Eigen::Index>(batch.pole->u2.size());
    Eigen::MatrixXd m(2, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      m(0, i) = batch.pole->u2[static_cast<std::size_t>(i)];
      m(1, i) = batch.pole->t[static_cast<std::size_t>(i)];
    }
    if (!is_stratified(m, 0, {0.0, geometry::kTwoPi}) || !is_stratified(m, 1, {0.0, p.t_train})) return false;
  }
  return true;
}

}  // namespace hmcf::sampling
