#include "rkhs/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "search.hpp"

namespace rkhs {

const char* to_string(Method method) noexcept {
  return method == Method::afd ? "afd" : "nbest";
}

void OptimizerConfig::validate(const SpaceSpec& spec) const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::domain, msg); };
  if (!(delta > 0.0 && delta < 1.0)) fail("optimizer delta must lie in (0, 1)");
  if (delta < 1.0 - spec.r_max() - 1e-12) {
    std::ostringstream os;
    os << "optimizer delta " << delta << " puts the search radius beyond r_max=" << spec.r_max();
    fail(os.str());
  }
  if (grid_density < 4) fail("grid density must be >= 4");
  if (!(ftol > 0.0) || !(xtol > 0.0)) fail("ftol and xtol must be positive");
  if (multistart < 0) fail("multistart count must be non-negative");
  if (max_iter < 1) fail("max_iter must be >= 1");
  if (!(fd_step > 0.0)) fail("fd_step must be positive");
  if (!(eps_merge >= 0.0)) fail("eps_merge must be non-negative");
}

EnergyEvaluation energy_eval(const SpaceSpec& spec, const AnalyticFunction& f,
                             const ParamTuple& tuple) {
  const detail::Target target(spec, {&f}, {1.0});
  const auto fitted = detail::fit(target, tuple);
  return {fitted.energy, fitted.tuple.size(), fitted.degraded};
}

double energy(const SpaceSpec& spec, const AnalyticFunction& f, const ParamTuple& tuple) {
  return energy_eval(spec, f, tuple).energy;
}

namespace {

void check_request(const SpaceSpec& spec, const AnalyticFunction& f, int n,
                   const OptimizerConfig& config) {
  config.validate(spec);
  if (n < 0) throw Error(ErrorKind::domain, "approximation order n must be >= 0");
  if (f.size() != spec.size()) {
    throw Error(ErrorKind::shape, "signal degree does not match " + spec.describe());
  }
}

ApproximationResult assemble(const detail::Target& target, const ParamTuple& tuple,
                             Method method) {
  const auto fitted = detail::fit(target, tuple);
  ApproximationResult r;
  r.parameters = fitted.tuple;
  r.coefficients = fitted.coeffs.front();
  r.energy = fitted.energy;
  r.residual = std::sqrt(fitted.residual_sq);
  r.norm = std::sqrt(target.total);
  r.method = method;
  r.degraded = fitted.degraded;
  return r;
}

ParamTuple empty_tuple(const detail::Target& target, const OptimizerConfig& config) {
  return ParamTuple({}, config.eps_merge, detail::search_delta_min(target, config));
}

}  // namespace

ApproximationResult afd_greedy(const SpaceSpec& spec, const AnalyticFunction& f, int n,
                               const OptimizerConfig& config) {
  check_request(spec, f, n, config);
  const detail::Target target(spec, {&f}, {1.0});
  if (n == 0 || target.total == 0.0) {
    return assemble(target, empty_tuple(target, config), Method::afd);
  }
  const auto g = detail::greedy(target, n, config);
  auto r = assemble(target, g.tuple, Method::afd);
  r.trace = g.trace;
  return r;
}

ApproximationResult nbest(const SpaceSpec& spec, const AnalyticFunction& f, int n,
                          const OptimizerConfig& config,
                          const std::vector<ParamTuple>& warm_starts) {
  check_request(spec, f, n, config);
  const detail::Target target(spec, {&f}, {1.0});
  if (n == 0 || target.total == 0.0) {
    return assemble(target, empty_tuple(target, config), Method::nbest);
  }

  const auto g = detail::greedy(target, n, config);
  if (g.exhausted || g.tuple.size() < std::size_t(n)) {
    // f is already a combination of fewer than n (multiple) kernels.
    auto r = assemble(target, g.tuple, Method::nbest);
    const double obj = r.residual * r.residual / target.total;
    r.starts.push_back({"afd", obj, 0, true});
    r.trace.push_back(obj);
    return r;
  }

  const double delta_min = detail::search_delta_min(target, config);
  std::vector<detail::Seed> seeds;
  seeds.push_back({"afd", g.tuple});
  for (std::size_t w = 0; w < warm_starts.size(); ++w) {
    if (warm_starts[w].size() != std::size_t(n)) {
      throw Error(ErrorKind::shape, "warm start length differs from n");
    }
    seeds.push_back({"warm:" + std::to_string(w), warm_starts[w]});
  }
  for (auto& s : detail::stratified_seeds(n, config, delta_min)) seeds.push_back(std::move(s));

  const auto found = detail::multistart(target, n, config, seeds);
  auto r = assemble(target, found.best, Method::nbest);
  r.starts = found.starts;
  for (const auto& s : found.starts) r.trace.push_back(s.objective);
  return r;
}

std::vector<ApproximationResult> nbest_sweep(const SpaceSpec& spec, const AnalyticFunction& f,
                                             int n_max, const OptimizerConfig& config) {
  check_request(spec, f, n_max, config);
  const detail::Target target(spec, {&f}, {1.0});
  std::vector<ApproximationResult> out;
  ParamTuple previous = empty_tuple(target, config);
  for (int n = 1; n <= n_max; ++n) {
    std::vector<ParamTuple> warm;
    if (previous.size() == std::size_t(n - 1) && target.total > 0.0) {
      const auto extended = detail::greedy(target, n, config, previous);
      if (extended.tuple.size() == std::size_t(n)) warm.push_back(extended.tuple);
    }
    out.push_back(nbest(spec, f, n, config, warm));
    previous = out.back().parameters;
  }
  return out;
}

std::vector<BvcPoint> bvc_profile(const SpaceSpec& spec, const AnalyticFunction& f,
                                  const std::vector<double>& radii, int angles) {
  if (f.size() != spec.size()) {
    throw Error(ErrorKind::shape, "signal degree does not match " + spec.describe());
  }
  if (angles < 1) throw Error(ErrorKind::domain, "angular grid needs at least one point");
  std::vector<BvcPoint> out;
  for (const double r : radii) {
    if (!(r >= 0.0 && r < 1.0)) {
      std::ostringstream os;
      os << "profile radius " << r << " outside [0, 1)";
      throw Error(ErrorKind::domain, os.str());
    }
    const double knorm = std::sqrt(kernel_norm_squared(spec, r));
    double sup = 0.0;
    if (r == 0.0) {
      sup = std::abs(evaluate(f, 0.0));
    } else {
      std::vector<Complex> pts(static_cast<std::size_t>(angles));
      for (int j = 0; j < angles; ++j) {
        pts[std::size_t(j)] = std::polar(r, 2.0 * std::numbers::pi * j / angles);
      }
      for (const auto v : evaluate_many(f, pts)) sup = std::max(sup, std::abs(v));
    }
    out.push_back({r, sup / knorm});
  }
  return out;
}

}  // namespace rkhs
