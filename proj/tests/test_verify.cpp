#include <doctest.h>

#include <cmath>
#include <random>

#include "rkhs/verify.hpp"

using namespace rkhs;

namespace {

AnalyticFunction constant_one(const SpaceSpec& s) {
  AnalyticFunction f(s.degree());
  f[0] = 1.0;
  return f;
}

AnalyticFunction random_poly(const SpaceSpec& s, std::size_t deg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  AnalyticFunction f(s.degree());
  for (std::size_t k = 0; k <= deg; ++k) f[k] = {g(rng), g(rng)};
  return f;
}

}  // namespace

TEST_CASE("infinite norm property") {
  const auto h = check_infinite_norm(SpaceSpec::hardy(), {0.5, 0.9});
  CHECK(h.pass);
  CHECK(h.value("K(r=0.9)") == doctest::Approx(1.0 / 0.19));
  const auto b = check_infinite_norm(SpaceSpec::bergman(0.0), {0.9});
  CHECK(b.value("K(r=0.9)") == doctest::Approx(27.7008).epsilon(1e-5));
  const auto w = check_infinite_norm(SpaceSpec::weighted_hardy(1.0), {0.9, 0.99, 0.999});
  CHECK(w.pass);
  CHECK(w.value("strict_growth") == 1.0);
  CHECK_FALSE(check_infinite_norm(SpaceSpec::hardy(), {0.9, 0.5}).pass);
}

TEST_CASE("C_H estimates") {
  const auto h = estimate_CH(SpaceSpec::hardy());
  CHECK(h.pass);
  CHECK(h.bound == 2.0);
  // (1 - r^2) / (1 - r) = 1 + r at the outermost radius
  CHECK(h.value("sup(r=0.999)") == doctest::Approx(1.999).epsilon(1e-12));
  const auto b = estimate_CH(SpaceSpec::bergman(1.0));
  CHECK(b.pass);
  CHECK(b.value("sup") <= 8.0);
  const auto w = estimate_CH(SpaceSpec::weighted_hardy(1.0));
  CHECK(w.pass);
  CHECK(std::isfinite(w.value("sup")));
  CHECK(ch_bound(SpaceSpec::weighted_hardy(2.0)) == std::nullopt);
  CHECK(*ch_bound(SpaceSpec::weighted_hardy(0.0)) == 2.0);
}

TEST_CASE("zero property reports") {
  const auto s = SpaceSpec::bergman(0.0);
  const auto f = random_poly(s, 10, 1);
  CHECK(check_zero_property(s, f, ParamTuple({0.2, -0.3})).pass);
  CHECK(check_zero_property(s, f, ParamTuple({0.3, 0.3})).pass);
  const auto in_span = kernel(s, 0.4);
  const auto r = check_zero_property(s, in_span, ParamTuple({0.4}));
  CHECK(r.pass);
  CHECK(r.value("max_abs_derivative_over_norm") < 1e-12);
}

TEST_CASE("reduced remainder bound") {
  const auto h = SpaceSpec::hardy();
  const auto f = random_poly(h, 8, 2);
  const auto k0 = check_reduced_bound(h, f, ParamTuple());
  CHECK(k0.value("sup_remainder") == doctest::Approx(k0.value("M")));
  CHECK(check_reduced_bound(h, f, ParamTuple({0.5, Complex(0.1, -0.7), -0.2})).pass);
  const auto b = SpaceSpec::bergman(0.0);
  const auto r = check_reduced_bound(b, random_poly(b, 8, 3), ParamTuple({0.6, Complex(0.0, 0.5)}));
  CHECK(r.pass);
  CHECK(r.bound == doctest::Approx(25.0 * r.value("M")));
}

TEST_CASE("boundary vanishing") {
  const auto h = SpaceSpec::hardy();
  const auto r = check_bvc(h, constant_one(h));
  CHECK(r.pass);
  for (const double x : {0.5, 0.9, 0.99}) {
    char name[32];
    std::snprintf(name, sizeof name, "profile(r=%g)", x);
    CHECK(r.value(name) == doctest::Approx(std::sqrt(1.0 - x * x)).epsilon(1e-10));
  }
  CHECK(r.value("profile(r=0.999)") == doctest::Approx(0.0447).epsilon(1e-3));

  const auto b = SpaceSpec::bergman(0.0);
  const auto rb = check_bvc(b, constant_one(b));
  CHECK(rb.pass);
  CHECK(rb.value("profile(r=0.9)") == doctest::Approx(0.19).epsilon(1e-10));

  const auto w = SpaceSpec::weighted_hardy(1.0);
  const auto rw = check_bvc(w, random_poly(w, 6, 4));
  CHECK(rw.value("decreasing_beyond_peak") == 1.0);
}

TEST_CASE("beta > 1 regime") {
  const auto r2 = check_beta_gt1(2.0);
  CHECK(r2.pass);
  CHECK(r2.value("K(r=0.9999)") == doctest::Approx(1.6449).epsilon(0.01));
  const auto r3 = check_beta_gt1(3.0);
  CHECK(r3.pass);
  CHECK(r3.value("K(r=0.9999)") == doctest::Approx(1.2021).epsilon(0.01));
  const auto near1 = check_beta_gt1(1.0001);
  CHECK(near1.value("K(r=0.9999)") > r2.value("K(r=0.9999)"));
  CHECK(std::isfinite(near1.value("K(r=0.9999)")));
  CHECK_THROWS_AS(check_beta_gt1(1.0), Error);
}

TEST_CASE("zero-space factorization") {
  const auto h = SpaceSpec::hardy();
  const auto empty = check_zero_space_factorization(h, ParamTuple(), 0.5);
  CHECK(empty.pass);
  CHECK(empty.value("relative_residual") < 1e-15);
  CHECK(check_zero_space_factorization(h, ParamTuple({0.3}), 0.5).pass);
  CHECK(check_zero_space_factorization(h, ParamTuple({0.3, 0.3}), 0.5).pass);
  CHECK_THROWS_AS(check_zero_space_factorization(SpaceSpec::bergman(0.0), ParamTuple({0.3}), 0.5), Error);
}

TEST_CASE("verify battery is reproducible") {
  const auto a = verify_space(SpaceSpec::hardy(), 7);
  const auto b = verify_space(SpaceSpec::hardy(), 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pass);
    CHECK(a[i].check == b[i].check);
    CHECK(a[i].grid == b[i].grid);
    REQUIRE(a[i].measured.size() == b[i].measured.size());
    for (std::size_t k = 0; k < a[i].measured.size(); ++k) CHECK(a[i].measured[k] == b[i].measured[k]);
  }
  for (const double alpha : {0.0, 1.0, 2.5}) {
    for (const auto& r : verify_space(SpaceSpec::bergman(alpha))) CHECK(r.pass);
  }
  for (const double beta : {1.5, 2.0, 3.0}) {
    for (const auto& r : verify_space(SpaceSpec::weighted_hardy(beta))) CHECK(r.pass);
  }
}
