#pragma once

// Shared machinery for the deterministic and stochastic engines. A Target is
// a finite weighted family of signals (one signal with weight 1 for the
// deterministic problem); the objective is the weighted squared residual
// sum_i p_i ||Q f_i||^2 relative to sum_i p_i ||f_i||^2.

#include <string>
#include <utility>
#include <vector>

#include "rkhs/approx.hpp"

namespace rkhs::detail {

struct Target {
  SpaceSpec spec;
  std::vector<const AnalyticFunction*> signals;
  std::vector<double> weights;
  double total = 0.0;  // sum_i p_i ||f_i||^2

  Target(SpaceSpec s, std::vector<const AnalyticFunction*> fs, std::vector<double> ps);
};

struct TupleFit {
  ParamTuple tuple;  // the prefix actually used
  std::vector<std::vector<Complex>> coeffs;  // per signal, <f_i, E_l>
  double energy = 0.0;                       // sum_i p_i sum_l |<f_i, E_l>|^2
  double residual_sq = 0.0;                  // sum_i p_i ||Q f_i||^2, computed directly
  bool degraded = false;
};

TupleFit fit(const Target& target, const ParamTuple& tuple);

/// Delta-min used for tuples living on the search polydisc.
double search_delta_min(const Target& target, const OptimizerConfig& config);

struct GreedyOutcome {
  ParamTuple tuple;
  std::vector<double> trace;  // captured energy after each step
  bool exhausted = false;     // signal fully captured before n steps
};

/// Maximal selection: each step maximizes the captured energy of the next
/// orthonormal direction over the coarse polar grid, refined locally.
GreedyOutcome greedy(const Target& target, int n, const OptimizerConfig& config,
                     const ParamTuple& start = {});

struct Seed {
  std::string origin;
  ParamTuple tuple;
};

struct SearchOutcome {
  ParamTuple best;
  double objective = 0.0;
  std::vector<StartReport> starts;
};

/// Stratified random seeds over the polar cells of the search disc.
std::vector<Seed> stratified_seeds(int n, const OptimizerConfig& config, double delta_min);

/// Runs one local search per seed (concurrently) and reduces to the best,
/// ties broken lexicographically on the parameters.
SearchOutcome multistart(const Target& target, int n, const OptimizerConfig& config,
                         const std::vector<Seed>& seeds);

/// Radial projection onto |a| <= radius.
Complex clamp_radius(Complex a, double radius);

}  // namespace rkhs::detail
