#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hmcf/error.hpp"
#include "hmcf/optim/adam.hpp"
#include "hmcf/optim/lbfgs.hpp"
#include "hmcf/optim/schedule.hpp"
#include "hmcf/random.hpp"

using namespace hmcf;
using namespace hmcf::optim;

namespace {

// ½ xᵀAx with a fixed random SPD A (QᵀDQ, eigenvalues in [1, 50]).
struct Quadratic {
  std::size_t n;
  std::vector<double> a;
  explicit Quadratic(std::size_t dim) : n(dim), a(dim * dim, 0.0) {
    Rng rng(42);
    std::vector<double> b(n * n);
    for (double& x : b) x = rng.uniform(-1.0, 1.0);
    // A = BᵀB + I is SPD.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = i == j ? 1.0 : 0.0;
        for (std::size_t k = 0; k < n; ++k) s += b[k * n + i] * b[k * n + j];
        a[i * n + j] = s;
      }
    }
  }
  double operator()(std::span<const double> x, std::span<double> g) const {
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < n; ++j) ax += a[i * n + j] * x[j];
      g[i] = ax;
      f += 0.5 * x[i] * ax;
    }
    return f;
  }
};

double rosenbrock(std::span<const double> x, std::span<double> g) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  g[0] = -2.0 * a - 400.0 * x[0] * b;
  g[1] = 200.0 * b;
  return a * a + 100.0 * b * b;
}

}  // namespace

TEST_SUITE("optim") {
  TEST_CASE("first Adam step moves each component by about lr") {
    Adam adam(3);
    std::vector<double> p{1.0, -2.0, 0.5};
    const std::vector<double> g{0.3, -4.0, 1e-3};
    adam.step(p, g, 0.01);
    CHECK(p[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-6));
    CHECK(p[1] == doctest::Approx(-2.0 + 0.01).epsilon(1e-6));
    CHECK(p[2] == doctest::Approx(0.5 - 0.01).epsilon(1e-4));
    CHECK(adam.step_count() == 1);
  }

  TEST_CASE("zero gradient leaves parameters unchanged") {
    Adam adam(4);
    std::vector<double> p{1.0, 2.0, 3.0, 4.0};
    const auto before = p;
    for (int k = 0; k < 5; ++k) adam.step(p, std::vector<double>(4, 0.0), 0.1);
    CHECK(p == before);
  }

  TEST_CASE("200 Adam steps on |theta|^2 match the scalar recursion") {
    const std::size_t n = 4;
    std::vector<double> p(n, 0.5);  // |θ0| = 1
    Adam adam(n);
    // Independent scalar recursion per component.
    double x = 0.5, m = 0.0, v = 0.0;
    for (int t = 1; t <= 200; ++t) {
      std::vector<double> g(n);
      for (std::size_t i = 0; i < n; ++i) g[i] = 2.0 * p[i];
      adam.step(p, g, 0.1);
      const double gx = 2.0 * x;
      m = 0.9 * m + 0.1 * gx;
      v = 0.999 * v + 0.001 * gx * gx;
      const double mh = m / (1.0 - std::pow(0.9, t));
      const double vh = v / (1.0 - std::pow(0.999, t));
      x -= 0.1 * mh / (std::sqrt(vh) + 1e-8);
    }
    for (double q : p) CHECK(q == doctest::Approx(x).epsilon(1e-10));
    CHECK(l2_norm(p) < 1e-2);
  }

  TEST_CASE("Adam is invariant under permutation of parameters") {
    Rng rng(8);
    std::vector<double> p(6), g(6);
    for (auto& x : p) x = rng.uniform(-1.0, 1.0);
    std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
    std::vector<double> q(6);
    for (std::size_t i = 0; i < 6; ++i) q[i] = p[perm[i]];
    Adam a(6), b(6);
    for (int k = 0; k < 10; ++k) {
      for (auto& x : g) x = rng.uniform(-1.0, 1.0);
      std::vector<double> h(6);
      for (std::size_t i = 0; i < 6; ++i) h[i] = g[perm[i]];
      a.step(p, g, 0.01);
      b.step(q, h, 0.01);
    }
    for (std::size_t i = 0; i < 6; ++i) CHECK(q[i] == p[perm[i]]);
    for (double s : a.second_moment()) CHECK(s >= 0.0);
  }

  TEST_CASE("non-finite Adam update throws and keeps parameters") {
    Adam adam(3);
    std::vector<double> p{1.0, 2.0, 3.0};
    std::vector<double> g{0.1, std::numeric_limits<double>::infinity(), 0.2};
    try {
      adam.step(p, g, 0.1);
      FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
      CHECK(e.component() == 1);
    }
    CHECK(p == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(adam.step_count() == 0);
  }

  TEST_CASE("clipping contract") {
    std::vector<double> g{6.0, 8.0};
    CHECK(clip_gradient(g, 1.0) == 10.0);
    CHECK(g[0] == 6.0 * 0.1);
    CHECK(g[1] == 8.0 * 0.1);
    std::vector<double> small{0.3, 0.4};
    clip_gradient(small, 1.0);
    CHECK(small == std::vector<double>{0.3, 0.4});
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> r(1000);
      const double scale = trial < 10 ? 0.01 : 1.0;
      for (auto& x : r) x = scale * rng.uniform(-1.0, 1.0);
      const double before = l2_norm(r);
      clip_gradient(r, 1.0);
      CHECK(std::abs(l2_norm(r) - std::min(before, 1.0)) < 1e-12);
    }
    CHECK_THROWS_AS(clip_gradient(g, 0.0), ConfigError);
  }

  TEST_CASE("one-cycle endpoints and peak") {
    const auto s = LrSchedule::one_cycle(1e-3, 1000, 0.3, 25.0, 1e4);
    CHECK(s.at(0) == doctest::Approx(1e-3 / 25.0));
    CHECK(s.at(999) == doctest::Approx(1e-3 / 25.0 / 1e4));
    CHECK(s.at(0) < 1e-3);
    CHECK(s.at(999) < 1e-3);
    CHECK(s.at(299) == doctest::Approx(1e-3));
    double prev = 0.0;
    for (std::size_t i = 0; i < 300; ++i) {
      CHECK(s.at(i) >= prev);
      prev = s.at(i);
    }
    for (std::size_t i = 300; i < 1000; ++i) {
      CHECK(s.at(i) <= prev);
      CHECK(s.at(i) > 0.0);
      prev = s.at(i);
    }
    CHECK(LrSchedule::constant(5e-4).at(123456) == 5e-4);
  }

  TEST_CASE("curvature pairs are filtered and capped") {
    LbfgsState st;
    CHECK_FALSE(st.push({1.0, 0.0}, {-1.0, 0.0}, 3));
    CHECK_FALSE(st.push({1.0, 0.0}, {0.0, 1.0}, 3));
    for (int k = 0; k < 5; ++k) CHECK(st.push({1.0, double(k)}, {2.0, double(k)}, 3));
    CHECK(st.size() == 3);
    for (std::size_t i = 0; i < st.size(); ++i) {
      CHECK(std::inner_product(st.s[i].begin(), st.s[i].end(), st.y[i].begin(), 0.0) > 0.0);
    }
    LbfgsState empty;
    const auto d = empty.direction(std::vector<double>{1.0, -2.0});
    CHECK(d == std::vector<double>{-1.0, 2.0});
  }

  TEST_CASE("L-BFGS solves a 10-D SPD quadratic in <= 30 iterations") {
    const Quadratic q(10);
    std::vector<double> x(10);
    Rng rng(5);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    LbfgsOptions opt;
    opt.g_tol = 1e-10;
    const auto r = lbfgs_run(x, std::cref(q), 30, opt);
    CHECK(r.converged);
    CHECK(r.grad_norm < 1e-10);
    CHECK(r.iterations <= 30);
  }

  TEST_CASE("L-BFGS returns immediately at a minimum") {
    const Quadratic q(4);
    std::vector<double> x(4, 0.0);
    const auto r = lbfgs_run(x, std::cref(q), 50);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(x == std::vector<double>(4, 0.0));
  }

  TEST_CASE("L-BFGS on Rosenbrock") {
    std::vector<double> x{-1.2, 1.0};
    LbfgsOptions opt;
    opt.g_tol = 1e-12;
    opt.initial_step = 1.0;
    const auto r = lbfgs_run(x, rosenbrock, 200, opt);
    CHECK(r.iterations <= 200);
    CHECK(std::abs(x[0] - 1.0) < 1e-6);
    CHECK(std::abs(x[1] - 1.0) < 1e-6);
  }

  TEST_CASE("L-BFGS callback and failure handling") {
    const Quadratic q(3);
    std::vector<double> x{1.0, 1.0, 1.0};
    std::vector<double> losses;
    lbfgs_run(x, std::cref(q), 5, {}, [&](std::size_t it, double l) {
      CHECK(it == losses.size() + 1);
      losses.push_back(l);
    });
    CHECK(!losses.empty());
    for (std::size_t i = 1; i < losses.size(); ++i) CHECK(losses[i] <= losses[i - 1]);

    // An objective that throws everywhere but the start: the run ends without crashing.
    std::vector<double> y{1.0};
    int calls = 0;
    const ad::Objective bad = [&](std::span<const double> p, std::span<double> g) {
      if (calls++ > 0) throw DivergenceError("boom", 0);
      g[0] = 2.0 * p[0];
      return p[0] * p[0];
    };
    const auto r = lbfgs_run(y, bad, 10);
    CHECK_FALSE(r.converged);
    CHECK(y[0] == 1.0);
  }
}
