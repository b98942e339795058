#include "rkhs/stochastic.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "search.hpp"

namespace rkhs {

Ensemble::Ensemble(SpaceSpec spec, std::vector<AnalyticFunction> realizations)
    : Ensemble(spec, realizations,
               std::vector<double>(realizations.size(),
                                   realizations.empty() ? 0.0 : 1.0 / double(realizations.size()))) {}

Ensemble::Ensemble(SpaceSpec spec, std::vector<AnalyticFunction> realizations,
                   std::vector<double> weights)
    : spec_(std::move(spec)), realizations_(std::move(realizations)), weights_(std::move(weights)) {
  if (realizations_.empty()) throw Error(ErrorKind::shape, "ensemble needs at least one realization");
  if (weights_.size() != realizations_.size()) {
    throw Error(ErrorKind::shape, "ensemble weight count differs from realization count");
  }
  double sum = 0.0;
  for (const double p : weights_) {
    if (!(p >= 0.0)) throw Error(ErrorKind::domain, "ensemble weights must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "ensemble weights sum to " << sum << ", not 1";
    throw Error(ErrorKind::domain, os.str());
  }
  for (const auto& f : realizations_) {
    if (f.size() != spec_.size()) {
      throw Error(ErrorKind::shape, "realization degree does not match " + spec_.describe());
    }
  }
}

AnalyticFunction Ensemble::mean() const {
  AnalyticFunction m(spec_.degree());
  for (std::size_t i = 0; i < realizations_.size(); ++i) m.axpy(weights_[i], realizations_[i]);
  return m;
}

namespace {

detail::Target make_target(const Ensemble& e) {
  std::vector<const AnalyticFunction*> fs;
  for (const auto& f : e.realizations()) fs.push_back(&f);
  return detail::Target(e.space(), std::move(fs), e.weights());
}

StochasticResult assemble(const detail::Target& target, const ParamTuple& tuple) {
  const auto fitted = detail::fit(target, tuple);
  StochasticResult r;
  r.parameters = fitted.tuple;
  r.coefficients = fitted.coeffs;
  r.expected_energy = fitted.energy;
  r.expected_residual = std::sqrt(fitted.residual_sq);
  r.bochner_norm = std::sqrt(target.total);
  r.degraded = fitted.degraded;
  return r;
}

}  // namespace

double bochner_norm(const Ensemble& e) { return std::sqrt(make_target(e).total); }

double stochastic_energy(const Ensemble& e, const ParamTuple& tuple) {
  return detail::fit(make_target(e), tuple).energy;
}

StochasticResult stochastic_fit(const Ensemble& e, const ParamTuple& tuple) {
  return assemble(make_target(e), tuple);
}

StochasticResult stochastic_nbest(const Ensemble& e, int n, const OptimizerConfig& config) {
  config.validate(e.space());
  if (n < 0) throw Error(ErrorKind::domain, "approximation order n must be >= 0");
  const auto target = make_target(e);
  const double delta_min = detail::search_delta_min(target, config);
  if (n == 0 || target.total == 0.0) {
    return assemble(target, ParamTuple({}, config.eps_merge, delta_min));
  }

  const auto g = detail::greedy(target, n, config);
  if (g.exhausted || g.tuple.size() < std::size_t(n)) {
    auto r = assemble(target, g.tuple);
    r.starts.push_back({"afd", r.expected_residual * r.expected_residual / target.total, 0, true});
    return r;
  }

  std::vector<detail::Seed> seeds;
  seeds.push_back({"afd", g.tuple});
  for (auto& s : detail::stratified_seeds(n, config, delta_min)) seeds.push_back(std::move(s));
  const auto found = detail::multistart(target, n, config, seeds);
  auto r = assemble(target, found.best);
  r.starts = found.starts;
  return r;
}

AnalyticFunction kernel_mix(const SpaceSpec& spec, const std::vector<KernelTerm>& terms) {
  AnalyticFunction f(spec.degree());
  for (const auto& t : terms) f.axpy(t.c, multiple_kernel(spec, t.a, t.order));
  return f;
}

namespace {

// Exponent b with W(k) ~ k^b as k grows.
double weight_growth(const SpaceSpec& spec) {
  switch (spec.family()) {
    case Family::hardy: return 0.0;
    case Family::bergman: return -1.0 - spec.param();
    case Family::weighted_hardy: return spec.param();
  }
  return 0.0;
}

}  // namespace

Ensemble generate_ensemble(const SpaceSpec& spec, EnsembleKind kind, const EnsembleParams& params,
                           int count, std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::domain, "ensemble size must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<AnalyticFunction> out;
  out.reserve(std::size_t(count));

  if (kind == EnsembleKind::kernel_mix) {
    if (params.kernels.empty()) throw Error(ErrorKind::domain, "kernel_mix needs at least one kernel");
    const auto base = kernel_mix(spec, params.kernels);
    for (int i = 0; i < count; ++i) {
      Complex xi = 1.0;
      if (params.random_scale) xi = {normal(rng), normal(rng)};
      AnalyticFunction f = base;
      f *= xi;
      out.push_back(std::move(f));
    }
    return Ensemble(spec, std::move(out));
  }

  const double b = weight_growth(spec);
  if (!(2.0 * params.gamma > 1.0 + b + 0.1)) {
    std::ostringstream os;
    os << "decay exponent gamma=" << params.gamma << " too small for " << spec.describe()
       << "; need gamma > " << (1.1 + b) / 2.0;
    throw Error(ErrorKind::divergence_risk, os.str());
  }
  for (int i = 0; i < count; ++i) {
    std::vector<Complex> c(spec.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double sigma = std::pow(1.0 + double(k), -params.gamma);
      const double re = normal(rng), im = normal(rng);
      c[k] = sigma * Complex(re, im);
    }
    out.emplace_back(std::move(c));
  }
  return Ensemble(spec, std::move(out));
}

}  // namespace rkhs
