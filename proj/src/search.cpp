#include "search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <random>

#include "nelder_mead.hpp"
#include "parallel.hpp"

namespace rkhs::detail {

Target::Target(SpaceSpec s, std::vector<const AnalyticFunction*> fs, std::vector<double> ps)
    : spec(std::move(s)), signals(std::move(fs)), weights(std::move(ps)) {
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (signals[i]->size() != spec.size()) {
      throw Error(ErrorKind::shape, "signal degree does not match the space truncation");
    }
    total += weights[i] * norm_squared(*signals[i], spec);
  }
}

TupleFit fit(const Target& target, const ParamTuple& tuple) {
  OrthonormalSystem system(target.spec);
  TupleFit out;
  for (std::size_t l = 0; l < tuple.size(); ++l) {
    try {
      system.append(tuple.prefix(l + 1));
    } catch (const ConditioningError&) {
      out.degraded = true;
      break;
    }
  }
  out.tuple = system.tuple();
  out.coeffs.resize(target.signals.size());
  for (std::size_t i = 0; i < target.signals.size(); ++i) {
    const auto proj = project(*target.signals[i], system);
    double e = 0.0;
    for (const auto& c : proj.coeffs) e += std::norm(c);
    out.energy += target.weights[i] * e;
    out.residual_sq += target.weights[i] * norm_squared(proj.remainder, target.spec);
    out.coeffs[i] = proj.coeffs;
  }
  return out;
}

double search_delta_min(const Target& target, const OptimizerConfig&) {
  return 1.0 - target.spec.r_max();
}

Complex clamp_radius(Complex a, double radius) {
  const double r = std::abs(a);
  const double cap = radius * (1.0 - 1e-15);
  if (r <= cap) return a;
  return a * (cap / r);
}

namespace {

constexpr double kExhausted = 1e-26;  // relative residual energy treated as zero

std::vector<Complex> polar_grid(int density, double radius) {
  std::vector<Complex> pts;
  pts.emplace_back(0.0, 0.0);
  const int angles = 2 * density;
  for (int i = 1; i <= density; ++i) {
    const double r = radius * double(i) / double(density);
    for (int j = 0; j < angles; ++j) {
      const double t = 2.0 * std::numbers::pi * double(j) / double(angles);
      pts.push_back(std::polar(r, t));
    }
  }
  return pts;
}

// Orthogonalized direction of the next kernel after `system`, or an empty
// function when it is degenerate.
AnalyticFunction next_direction(const Target& target, const OrthonormalSystem& system, Complex a) {
  const ParamTuple t = system.tuple().extended(a);
  const std::size_t l = t.size() - 1;
  AnalyticFunction v = multiple_kernel(target.spec, t[l], t.multiplicity(l));
  const double vn = norm(v, target.spec);
  auto r = system.orthogonalize(std::move(v));
  const double rn = norm(r, target.spec);
  if (!(rn > default_eps_degenerate * vn)) return {};
  r *= 1.0 / rn;
  return r;
}

// Relative energy gained by appending `a`, given the current remainders.
double step_gain(const Target& target, const OrthonormalSystem& system,
                 const std::vector<AnalyticFunction>& remainders, Complex a) {
  const auto e = next_direction(target, system, a);
  if (e.size() == 0) return 0.0;
  double gain = 0.0;
  for (std::size_t i = 0; i < remainders.size(); ++i) {
    gain += target.weights[i] * std::norm(inner_product(remainders[i], e, target.spec));
  }
  return gain / target.total;
}

// Relative residual after appending `a`, formed from the updated remainders
// rather than by subtracting the gain, so it keeps its precision near zero.
double step_residual(const Target& target, const OrthonormalSystem& system,
                     const std::vector<AnalyticFunction>& remainders, Complex a) {
  const auto e = next_direction(target, system, a);
  double s = 0.0;
  for (std::size_t i = 0; i < remainders.size(); ++i) {
    if (e.size() == 0) {
      s += target.weights[i] * norm_squared(remainders[i], target.spec);
      continue;
    }
    AnalyticFunction g = remainders[i];
    g.axpy(-inner_product(g, e, target.spec), e);
    s += target.weights[i] * norm_squared(g, target.spec);
  }
  return s / target.total;
}

bool lexicographic_less(const ParamTuple& a, const ParamTuple& b) {
  const auto pa = a.points(), pb = b.points();
  for (std::size_t k = 0; k < std::min(pa.size(), pb.size()); ++k) {
    if (pa[k].real() != pb[k].real()) return pa[k].real() < pb[k].real();
    if (pa[k].imag() != pb[k].imag()) return pa[k].imag() < pb[k].imag();
  }
  return pa.size() < pb.size();
}

NelderMeadOptions local_options(const OptimizerConfig& config) {
  NelderMeadOptions o;
  o.initial_step = 0.05 * (1.0 - config.delta);
  o.ftol = config.ftol;
  o.xtol = config.xtol;
  o.max_evals = config.max_iter;
  o.probe_step = config.fd_step;
  return o;
}

}  // namespace

GreedyOutcome greedy(const Target& target, int n, const OptimizerConfig& config,
                     const ParamTuple& start) {
  const double radius = 1.0 - config.delta;
  const double delta_min = search_delta_min(target, config);
  GreedyOutcome out;

  OrthonormalSystem system(target.spec);
  std::vector<AnalyticFunction> remainders;
  for (const auto* f : target.signals) remainders.push_back(*f);
  ParamTuple tuple({}, config.eps_merge, delta_min);

  auto absorb = [&](const ParamTuple& t) {
    system.append(t);
    const auto& e = system[system.size() - 1];
    for (auto& g : remainders) g.axpy(-inner_product(g, e, target.spec), e);
    tuple = t;
  };
  auto residual_fraction = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < remainders.size(); ++i) {
      s += target.weights[i] * norm_squared(remainders[i], target.spec);
    }
    return target.total > 0.0 ? s / target.total : 0.0;
  };

  for (std::size_t l = 0; l < start.size(); ++l) {
    absorb(ParamTuple(std::vector<Complex>(start.points().begin(), start.points().begin() + l + 1),
                      config.eps_merge, delta_min));
  }

  if (target.total == 0.0) {
    out.tuple = tuple;
    out.exhausted = true;
    return out;
  }

  const auto grid = polar_grid(config.grid_density, radius);
  const auto opts = local_options(config);
  double captured = 1.0 - residual_fraction();
  for (int step = int(start.size()); step < n; ++step) {
    if (residual_fraction() <= kExhausted) {
      out.exhausted = true;
      break;
    }
    Complex best_a = grid.front();
    double best_gain = -1.0;
    for (const Complex a : grid) {
      const double g = step_gain(target, system, remainders, a);
      if (g > best_gain) {
        best_gain = g;
        best_a = a;
      }
    }
    if (best_gain <= 0.0) {
      out.exhausted = true;
      break;
    }
    const Objective after = [&](std::vector<double>& x) {
      const Complex a = clamp_radius({x[0], x[1]}, radius);
      x[0] = a.real();
      x[1] = a.imag();
      return step_residual(target, system, remainders, a);
    };
    const auto refined = nelder_mead(after, {best_a.real(), best_a.imag()}, opts);
    const Complex a = refined.value <= step_residual(target, system, remainders, best_a)
                          ? Complex(refined.x[0], refined.x[1])
                          : best_a;
    try {
      absorb(tuple.extended(a));
    } catch (const ConditioningError&) {
      out.exhausted = true;
      break;
    }
    captured = 1.0 - residual_fraction();
    out.trace.push_back(captured * target.total);
  }
  out.tuple = tuple;
  return out;
}

std::vector<Seed> stratified_seeds(int n, const OptimizerConfig& config, double delta_min) {
  std::vector<Seed> seeds;
  if (n <= 0 || config.multistart <= 0) return seeds;
  const int rings = config.grid_density;
  const int sectors = 2 * config.grid_density;
  const std::size_t cells = std::size_t(rings) * std::size_t(sectors);
  const double radius = 1.0 - config.delta;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> perm(cells);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::size_t next = 0;
  for (int s = 0; s < config.multistart; ++s) {
    std::vector<Complex> pts;
    for (int j = 0; j < n; ++j) {
      const std::size_t cell = perm[next++ % cells];
      const double ring = double(cell / std::size_t(sectors));
      const double sector = double(cell % std::size_t(sectors));
      // area-uniform radius inside the ring
      const double r0 = radius * ring / rings, r1 = radius * (ring + 1.0) / rings;
      const double r = std::sqrt(r0 * r0 + unit(rng) * (r1 * r1 - r0 * r0));
      const double t = 2.0 * std::numbers::pi * (sector + unit(rng)) / sectors;
      pts.push_back(clamp_radius(std::polar(r, t), radius));
    }
    seeds.push_back({"random:" + std::to_string(s), ParamTuple(pts, config.eps_merge, delta_min)});
  }
  return seeds;
}

SearchOutcome multistart(const Target& target, int n, const OptimizerConfig& config,
                         const std::vector<Seed>& seeds) {
  const double radius = 1.0 - config.delta;
  const double delta_min = search_delta_min(target, config);
  const auto opts = local_options(config);
  const double total = target.total > 0.0 ? target.total : 1.0;

  struct Slot {
    ParamTuple tuple;
    double objective = 0.0;
    StartReport report;
  };
  std::vector<Slot> slots(seeds.size());

  auto run_one = [&](std::size_t s) {
    const Objective objective = [&](std::vector<double>& x) {
      std::vector<Complex> pts(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        const Complex a = clamp_radius({x[2 * j], x[2 * j + 1]}, radius);
        x[2 * j] = a.real();
        x[2 * j + 1] = a.imag();
        pts[std::size_t(j)] = a;
      }
      return fit(target, ParamTuple(std::move(pts), config.eps_merge, delta_min)).residual_sq /
             total;
    };
    std::vector<double> x0;
    for (const Complex a : seeds[s].tuple.points()) {
      const Complex c = clamp_radius(a, radius);
      x0.push_back(c.real());
      x0.push_back(c.imag());
    }
    const auto res = nelder_mead(objective, std::move(x0), opts);
    std::vector<Complex> pts;
    for (int j = 0; j < n; ++j) pts.emplace_back(res.x[2 * j], res.x[2 * j + 1]);
    slots[s].tuple = ParamTuple(std::move(pts), config.eps_merge, delta_min);
    slots[s].objective = res.value;
    slots[s].report = {seeds[s].origin, res.value, res.evaluations, res.converged};
  };

  parallel_for(seeds.size(), run_one, config.threads);

  SearchOutcome out;
  std::size_t best = 0;
  for (std::size_t s = 0; s < slots.size(); ++s) {
    out.starts.push_back(slots[s].report);
    if (s == 0) continue;
    if (slots[s].objective < slots[best].objective ||
        (slots[s].objective == slots[best].objective &&
         lexicographic_less(slots[s].tuple, slots[best].tuple))) {
      best = s;
    }
  }
  if (slots.empty()) return out;
  out.best = slots[best].tuple;
  out.objective = slots[best].objective;

  // Near-coincident parameters usually mean the optimum sits on a merged
  // (multiple-kernel) tuple that the simplex only approaches. Try tying the
  // closest pair and re-optimizing the shared point.
  constexpr double kMergeRadius = 1e-3;
  constexpr double kNoiseFloor = 1e-20;
  for (;;) {
    const auto pts = out.best.points();
    std::size_t bi = 0, bj = 0;
    double dmin = kMergeRadius;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = std::abs(pts[i] - pts[j]);
        if (d > 0.0 && d < dmin) dmin = d, bi = i, bj = j;
      }
    }
    if (dmin >= kMergeRadius) break;

    std::vector<std::size_t> var(pts.size());  // slot -> free point
    std::vector<Complex> free;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (k == bj) continue;
      var[k] = free.size();
      free.push_back(k == bi ? 0.5 * (pts[bi] + pts[bj]) : pts[k]);
    }
    var[bj] = var[bi];
    const Objective tied = [&](std::vector<double>& x) {
      std::vector<Complex> t(pts.size());
      for (std::size_t f = 0; f < free.size(); ++f) {
        const Complex a = clamp_radius({x[2 * f], x[2 * f + 1]}, radius);
        x[2 * f] = a.real();
        x[2 * f + 1] = a.imag();
      }
      for (std::size_t k = 0; k < pts.size(); ++k) t[k] = {x[2 * var[k]], x[2 * var[k] + 1]};
      return fit(target, ParamTuple(std::move(t), config.eps_merge, delta_min)).residual_sq / total;
    };
    std::vector<double> x0;
    for (const Complex a : free) x0.push_back(a.real()), x0.push_back(a.imag());
    auto o = opts;
    o.initial_step = std::min(o.initial_step, 10.0 * dmin);
    const auto res = nelder_mead(tied, std::move(x0), o);
    // below the floor both objectives are rounding noise; the merged tuple wins
    if (!(res.value <= out.objective || res.value <= kNoiseFloor)) break;
    std::vector<Complex> t(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) t[k] = {res.x[2 * var[k]], res.x[2 * var[k] + 1]};
    out.best = ParamTuple(std::move(t), config.eps_merge, delta_min);
    out.objective = res.value;
  }
  return out;
}

}  // namespace rkhs::detail
