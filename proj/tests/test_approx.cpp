#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rkhs/approx.hpp"

using namespace rkhs;

namespace {

AnalyticFunction random_poly(const SpaceSpec& s, std::size_t deg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  AnalyticFunction f(s.degree());
  for (std::size_t k = 0; k <= deg; ++k) f[k] = Complex(g(rng), g(rng)) / (1.0 + double(k));
  return f;
}

OptimizerConfig quick() {
  OptimizerConfig c;
  c.multistart = 4;
  c.grid_density = 16;
  return c;
}

void check_pythagoras(const ApproximationResult& r) {
  const double n2 = r.norm * r.norm;
  CHECK(std::abs(n2 - r.energy - r.residual * r.residual) <= 1e-8 * std::max(n2, 1e-300));
}

}  // namespace

TEST_CASE("energy examples") {
  const auto h = SpaceSpec::hardy();
  for (const auto& s : {h, SpaceSpec::bergman(1.0), SpaceSpec::weighted_hardy(0.5)}) {
    auto e = kernel(s, Complex(0.2, 0.3));
    e *= 1.0 / norm(e, s);
    CHECK(energy(s, e, ParamTuple({Complex(0.2, 0.3)})) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // <k_0.5, 1> = 1 and ||K_0|| = 1
  CHECK(energy(h, kernel(h, 0.5), ParamTuple({0.0})) == doctest::Approx(1.0).epsilon(1e-14));

  const auto f = random_poly(h, 20, 3);
  const ParamTuple ab({0.4, Complex(-0.1, 0.6)}), ba({Complex(-0.1, 0.6), 0.4});
  CHECK(energy(h, f, ab) >= energy(h, f, ab.prefix(1)));
  CHECK(std::abs(energy(h, f, ab) - energy(h, f, ba)) <= 1e-9 * energy(h, f, ab));

  const auto ev = energy_eval(h, f, ParamTuple({0.3, Complex(0.3 + 1e-13, 0.0)}, 0.0));
  CHECK(ev.degraded);
  CHECK(ev.used == 1);
}

TEST_CASE("energy is continuous as two parameters merge") {
  for (const auto& s : {SpaceSpec::hardy(), SpaceSpec::bergman(0.0), SpaceSpec::weighted_hardy(1.0)}) {
    const auto f = random_poly(s, 20, 9);
    const Complex a(0.35, -0.2);
    const double merged = energy(s, f, ParamTuple({a, a}));
    std::vector<double> e;
    for (const double eps : {1e-3, 1e-4, 1e-5}) e.push_back(energy(s, f, ParamTuple({a, a + eps})));
    // linear extrapolation from the two smallest separations
    const double extrapolated = e[2] - (e[1] - e[2]) / 9.0;
    CHECK(std::abs(extrapolated - merged) <= 1e-4 * merged);
    CHECK(std::abs(e[2] - merged) <= std::abs(e[0] - merged) + 1e-12 * merged);
  }
}

TEST_CASE("afd: single kernel is captured at its own parameter") {
  const auto h = SpaceSpec::hardy();
  const auto f = kernel(h, 0.4);
  const auto r = afd_greedy(h, f, 1, quick());
  REQUIRE(r.parameters.size() == 1);
  CHECK(std::abs(r.parameters[0] - 0.4) < 1e-4);
  CHECK(r.residual <= 1e-8);
  check_pythagoras(r);

  // the optimum agrees with a brute-force sweep of |f(a)|^2 / K(a,a)
  double best = 0.0;
  Complex arg;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const Complex a(-0.95 + 0.0095 * i, -0.95 + 0.0095 * j);
      if (std::abs(a) > 0.95) continue;
      const double v = std::norm(evaluate(f, a)) * (1.0 - std::norm(a));
      if (v > best) best = v, arg = a;
    }
  }
  CHECK(std::abs(arg - 0.4) < 0.01);
  CHECK(r.energy >= best * (1.0 - 1e-12));
}

TEST_CASE("afd and nbest on the zero signal") {
  const auto h = SpaceSpec::hardy();
  const AnalyticFunction zero(h.degree());
  const auto a = afd_greedy(h, zero, 3, quick());
  CHECK(a.parameters.empty());
  CHECK(a.energy == 0.0);
  CHECK(a.residual == 0.0);
  const auto n = nbest(h, zero, 3, quick());
  CHECK(n.parameters.empty());
}

TEST_CASE("afd with n = 0 is the zero approximation") {
  const auto h = SpaceSpec::hardy();
  const auto f = random_poly(h, 10, 4);
  const auto r = afd_greedy(h, f, 0, quick());
  CHECK(r.parameters.empty());
  CHECK(r.residual == doctest::Approx(norm(f, h)));
}

TEST_CASE("nbest: exact-span recovery") {
  const auto h = SpaceSpec::hardy();
  auto f = kernel(h, 0.3);
  f *= 2.0;
  f += kernel(h, Complex(0.0, -0.5));
  const auto r = nbest(h, f, 2, quick());
  CHECK(r.residual <= 1e-6 * r.norm);
  auto pts = std::vector<Complex>(r.parameters.points().begin(), r.parameters.points().end());
  std::sort(pts.begin(), pts.end(), [](Complex x, Complex y) { return x.real() < y.real(); });
  CHECK(std::abs(pts[0] - Complex(0.0, -0.5)) < 1e-4);
  CHECK(std::abs(pts[1] - 0.3) < 1e-4);
  check_pythagoras(r);

  const auto w = SpaceSpec::weighted_hardy(0.5);
  const auto g = kernel(w, 0.2) + kernel(w, 0.6);
  const auto rw = nbest(w, g, 2, quick());
  CHECK(rw.residual <= 1e-6 * rw.norm);

  // the greedy pass on the same input need not be exact; nbest dominates it
  const auto h2 = kernel(h, 0.3) + kernel(h, -0.5);
  const auto ga = afd_greedy(h, h2, 2, quick());
  const auto gn = nbest(h, h2, 2, quick());
  CHECK(gn.energy >= ga.energy - 1e-9);
  CHECK(gn.residual <= 1e-6 * gn.norm);
  MESSAGE("afd relative residual on k_0.3 + k_-0.5, n=2: " << ga.residual / ga.norm);
}

TEST_CASE("nbest: one kernel, n = 1") {
  for (const auto& s : {SpaceSpec::hardy(), SpaceSpec::bergman(2.5), SpaceSpec::weighted_hardy(1.0)}) {
    const Complex b(-0.25, 0.55);
    const auto f = kernel(s, b);
    const auto r = nbest(s, f, 1, quick());
    CHECK(std::abs(r.parameters[0] - b) < 1e-4);
    CHECK(r.energy == doctest::Approx(norm_squared(f, s)).epsilon(1e-9));
  }
}

TEST_CASE("nbest: multiple kernels in the signal") {
  const auto h = SpaceSpec::hardy();
  const auto f = multiple_kernel(h, Complex(0.2, 0.1), 2) + kernel(h, Complex(0.2, 0.1));
  const auto r = nbest(h, f, 2, quick());
  CHECK(r.residual <= 1e-6 * r.norm);
  CHECK(r.parameters.multiplicity(1) == 2);
}

TEST_CASE("nbest_sweep: monotone decay and dominance over afd") {
  for (const auto& s : {SpaceSpec::hardy(), SpaceSpec::bergman(1.0), SpaceSpec::weighted_hardy(0.5)}) {
    CAPTURE(s.describe());
    const auto f = random_poly(s, 12, 17);
    const auto sweep = nbest_sweep(s, f, 4, quick());
    double prev = norm(f, s);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      CHECK(sweep[i].residual <= prev + 1e-9);
      prev = sweep[i].residual;
      check_pythagoras(sweep[i]);
      const auto g = afd_greedy(s, f, int(i) + 1, quick());
      CHECK(sweep[i].energy >= g.energy - 1e-9);
    }
  }
}

TEST_CASE("nbest: deterministic regardless of thread count") {
  const auto h = SpaceSpec::bergman(0.0);
  const auto f = random_poly(h, 10, 23);
  auto c1 = quick(), c2 = quick();
  c1.threads = 1;
  c2.threads = 3;
  const auto r1 = nbest(h, f, 3, c1);
  const auto r2 = nbest(h, f, 3, c2);
  REQUIRE(r1.parameters.size() == r2.parameters.size());
  for (std::size_t k = 0; k < r1.parameters.size(); ++k) CHECK(r1.parameters[k] == r2.parameters[k]);
  CHECK(r1.energy == r2.energy);
  CHECK(r1.starts.size() == std::size_t(c1.multistart) + 1);
}

TEST_CASE("optimizer config validation") {
  const auto h = SpaceSpec::hardy();
  const auto f = random_poly(h, 4, 1);
  OptimizerConfig c;
  c.delta = 0.0;
  CHECK_THROWS_AS(nbest(h, f, 1, c), Error);
  c.delta = 0.005;  // beyond r_max = 0.99
  CHECK_THROWS_AS(nbest(h, f, 1, c), Error);
  c = {};
  c.grid_density = 1;
  CHECK_THROWS_AS(afd_greedy(h, f, 1, c), Error);
  CHECK_THROWS_AS(nbest(h, f, -1), Error);
  CHECK_THROWS_AS(nbest(h, AnalyticFunction(10), 1), Error);
}

TEST_CASE("bvc profile") {
  const auto h = SpaceSpec::hardy();
  AnalyticFunction one(h.degree());
  one[0] = 1.0;
  const auto p = bvc_profile(h, one, {0.0, 0.5, 0.9, 0.99});
  for (const auto& x : p) CHECK(x.sup == doctest::Approx(std::sqrt(1.0 - x.radius * x.radius)).epsilon(1e-12));

  const auto f = random_poly(h, 8, 5);
  double m = 0.0;
  for (int j = 0; j < 512; ++j) m = std::max(m, std::abs(evaluate(f, std::polar(1.0, 2.0 * std::numbers::pi * j / 512))));
  CHECK(bvc_profile(h, f, {0.999})[0].sup <= m * std::sqrt(1.0 - 0.999 * 0.999) * (1.0 + 1e-9));
  CHECK(bvc_profile(h, f, {0.0})[0].sup == doctest::Approx(std::abs(f[0])));
  CHECK_THROWS_AS(bvc_profile(h, f, {1.0}), Error);
}
