#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rkhs/stochastic.hpp"

using namespace rkhs;

namespace {

OptimizerConfig quick() {
  OptimizerConfig c;
  c.multistart = 3;
  c.grid_density = 16;
  return c;
}

Ensemble random_ensemble(const SpaceSpec& s, int m, std::uint64_t seed) {
  EnsembleParams p;
  p.gamma = 1.5;
  return generate_ensemble(s, EnsembleKind::decaying_gaussian, p, m, seed);
}

}  // namespace

TEST_CASE("bochner norm examples") {
  const auto h = SpaceSpec::hardy();
  const auto k = kernel(h, 0.4);
  CHECK(bochner_norm(Ensemble(h, {k})) == doctest::Approx(norm(k, h)));
  const Ensemble e(h, {k, 2.0 * k});
  CHECK(bochner_norm(e) == doctest::Approx(std::sqrt(2.5 / 0.84)).epsilon(1e-12));
  CHECK(bochner_norm(Ensemble(h, {AnalyticFunction(h.degree())})) == 0.0);
}

TEST_CASE("ensemble validation") {
  const auto h = SpaceSpec::hardy();
  const auto k = kernel(h, 0.1);
  CHECK_THROWS_AS(Ensemble(h, {}), Error);
  CHECK_THROWS_AS(Ensemble(h, {k, k}, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(Ensemble(h, {k, k}, {1.0}), Error);
  CHECK_THROWS_AS(Ensemble(h, {AnalyticFunction(8)}), Error);
  const Ensemble e(h, {k, 3.0 * k}, {0.25, 0.75});
  CHECK(std::abs(e.mean()[1] - 2.5 * 0.1) < 1e-15);
}

TEST_CASE("stochastic energy") {
  const auto h = SpaceSpec::hardy();
  const auto f = kernel(h, 0.35);
  CHECK(stochastic_energy(Ensemble(h, {f}), ParamTuple({0.1})) ==
        doctest::Approx(std::norm(evaluate(f, 0.1)) * (1.0 - 0.01)).epsilon(1e-12));

  // scalar multiples of one kernel: everything is captured at that kernel
  const std::vector<Complex> xi = {Complex(1.0, 2.0), Complex(-0.5, 0.0), Complex(0.0, 3.0)};
  std::vector<AnalyticFunction> fs;
  for (const auto x : xi) fs.push_back(x * f);
  const Ensemble e(h, fs);
  double expect = 0.0;
  for (const auto x : xi) expect += std::norm(x) / 3.0;
  expect *= norm_squared(f, h);
  CHECK(stochastic_energy(e, ParamTuple({0.35})) == doctest::Approx(expect).epsilon(1e-12));

  const auto r = random_ensemble(h, 6, 3);
  CHECK(stochastic_energy(r, ParamTuple({0.2, -0.5})) >= stochastic_energy(r, ParamTuple({0.2})));
}

TEST_CASE("linearity of expectation over merged ensembles") {
  const auto s = SpaceSpec::bergman(1.0);
  const auto e1 = random_ensemble(s, 4, 1), e2 = random_ensemble(s, 5, 2);
  const ParamTuple t({Complex(0.1, 0.4), -0.3, -0.3});
  const double p = 0.3;
  std::vector<AnalyticFunction> fs;
  std::vector<double> ws;
  for (std::size_t i = 0; i < e1.size(); ++i) fs.push_back(e1.realizations()[i]), ws.push_back(p * e1.weights()[i]);
  for (std::size_t i = 0; i < e2.size(); ++i) fs.push_back(e2.realizations()[i]), ws.push_back((1 - p) * e2.weights()[i]);
  const Ensemble merged(s, fs, ws);
  const double expect = p * stochastic_energy(e1, t) + (1 - p) * stochastic_energy(e2, t);
  CHECK(std::abs(stochastic_energy(merged, t) - expect) <= 1e-12 * expect);
}

TEST_CASE("stochastic nbest: shared span recovery and Pythagoras") {
  const auto h = SpaceSpec::hardy();
  EnsembleParams p;
  p.kernels = {{0.3}, {-0.4}};
  const auto e = generate_ensemble(h, EnsembleKind::kernel_mix, p, 8, 7);
  const auto r = stochastic_nbest(e, 2, quick());
  CHECK(r.expected_residual <= 1e-6 * r.bochner_norm);
  auto pts = std::vector<Complex>(r.parameters.points().begin(), r.parameters.points().end());
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(pts[0] + 0.4) < 1e-3);
  CHECK(std::abs(pts[1] - 0.3) < 1e-3);
  REQUIRE(r.coefficients.size() == e.size());
  for (const auto& row : r.coefficients) CHECK(row.size() == 2);
  const double b2 = r.bochner_norm * r.bochner_norm;
  CHECK(std::abs(b2 - r.expected_energy - r.expected_residual * r.expected_residual) <= 1e-8 * b2);
}

TEST_CASE("stochastic nbest with one realization agrees with nbest") {
  const auto s = SpaceSpec::weighted_hardy(0.5);
  const auto e = random_ensemble(s, 1, 12);
  const auto a = stochastic_nbest(e, 2, quick());
  const auto b = nbest(s, e.realizations()[0], 2, quick());
  CHECK(std::abs(a.expected_residual * a.expected_residual - b.residual * b.residual) <=
        1e-9 * b.norm * b.norm);
}

TEST_CASE("stochastic nbest dominates the tuple fitted to the mean") {
  const auto h = SpaceSpec::hardy();
  const auto e = random_ensemble(h, 6, 31);
  const auto r = stochastic_nbest(e, 2, quick());
  const auto mean_fit = nbest(h, e.mean(), 2, quick());
  const auto candidate = stochastic_fit(e, mean_fit.parameters);
  CHECK(r.expected_residual <= candidate.expected_residual + 1e-12);
}

TEST_CASE("generator") {
  const auto h = SpaceSpec::hardy();
  EnsembleParams p;
  p.kernels = {{0.5}};
  p.random_scale = false;
  const auto e = generate_ensemble(h, EnsembleKind::kernel_mix, p, 3, 0);
  REQUIRE(e.size() == 3);
  for (const auto& f : e.realizations()) {
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(f[k] == e.realizations()[0][k]);
  }

  const auto a = random_ensemble(h, 4, 99), b = random_ensemble(h, 4, 99);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < h.size(); ++k) CHECK(a.realizations()[i][k] == b.realizations()[i][k]);
  }

  // E|c_k|^2 = (1+k)^{-2 gamma} with unit weights: E||f||^2 = sum (1+k)^{-4} at gamma = 2
  EnsembleParams g;
  g.gamma = 2.0;
  const auto d = generate_ensemble(h, EnsembleKind::decaying_gaussian, g, 64, 5);
  double second = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) second += std::pow(1.0 + double(k), -4.0);
  CHECK(std::abs(bochner_norm(d) - std::sqrt(second)) <= 0.2 * std::sqrt(second));

  g.gamma = 0.5;
  try {
    (void)generate_ensemble(h, EnsembleKind::decaying_gaussian, g, 4, 0);
    FAIL("expected a divergence-risk error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::divergence_risk);
  }
  g.gamma = 0.9;  // enough for Bergman alpha=0 (W ~ 1/k) but not for beta = 1
  CHECK_NOTHROW(generate_ensemble(SpaceSpec::bergman(0.0), EnsembleKind::decaying_gaussian, g, 2, 0));
  CHECK_THROWS_AS(generate_ensemble(SpaceSpec::weighted_hardy(1.0), EnsembleKind::decaying_gaussian, g, 2, 0),
                  Error);
  CHECK_THROWS_AS(generate_ensemble(h, EnsembleKind::kernel_mix, EnsembleParams{}, 2, 0), Error);
  CHECK_THROWS_AS(generate_ensemble(h, EnsembleKind::decaying_gaussian, EnsembleParams{}, 0, 0), Error);
}
