#pragma once

// Energy objective, greedy adaptive Fourier decomposition (maximal selection)
// and n-best kernel approximation by multistart local search over the
// compact polydisc |a_k| <= 1 - delta.

#include <cstdint>
#include <string>
#include <vector>

#include "rkhs/orthosystem.hpp"
#include "rkhs/space.hpp"

namespace rkhs {

struct OptimizerConfig {
  /// Search radius is 1 - delta.
  double delta = 0.05;
  /// Polar coarse grid: `grid_density` rings times 2*`grid_density` angles.
  int grid_density = 24;
  /// Stratified random starts in addition to the greedy warm start.
  int multistart = 8;
  /// Relative spread of simplex objective values at convergence.
  double ftol = 1e-12;
  /// Simplex diameter at convergence (parameter units).
  double xtol = 1e-10;
  /// Objective evaluations per local search.
  int max_iter = 6000;
  /// Central-difference step used for the stationarity check of each start.
  double fd_step = 1e-6;
  std::uint64_t seed = 0;
  double eps_merge = ParamTuple::default_eps_merge;
  /// Worker threads for multistart; 0 picks hardware concurrency.
  unsigned threads = 0;

  /// Throws Error(domain) on an invalid combination for `spec`.
  void validate(const SpaceSpec& spec) const;
};

enum class Method { afd, nbest };

const char* to_string(Method method) noexcept;

struct StartReport {
  std::string origin;  ///< "afd", "warm", or "random:<i>"
  double objective = 0.0;  ///< final relative squared residual
  int evaluations = 0;
  bool converged = false;
};

struct ApproximationResult {
  ParamTuple parameters;
  std::vector<Complex> coefficients;  ///< <f, E_l>
  double energy = 0.0;                ///< sum |<f, E_l>|^2
  double residual = 0.0;              ///< ||f - P f||
  double norm = 0.0;                  ///< ||f||
  Method method = Method::afd;
  /// afd: energy after each selection; nbest: best objective per start in order.
  std::vector<double> trace;
  std::vector<StartReport> starts;
  /// Set when the tuple was degenerate and a prefix was used.
  bool degraded = false;
};

struct EnergyEvaluation {
  double energy = 0.0;
  std::size_t used = 0;  ///< length of the non-degenerate prefix
  bool degraded = false;
};

/// sum_l |<f, E_l>|^2 over the tuple; falls back to the longest
/// non-degenerate prefix and flags it.
EnergyEvaluation energy_eval(const SpaceSpec& spec, const AnalyticFunction& f,
                             const ParamTuple& tuple);
double energy(const SpaceSpec& spec, const AnalyticFunction& f, const ParamTuple& tuple);

ApproximationResult afd_greedy(const SpaceSpec& spec, const AnalyticFunction& f, int n,
                               const OptimizerConfig& config = {});

/// `warm_starts` are extra seeds (each of length n) run alongside the greedy
/// and stratified ones.
ApproximationResult nbest(const SpaceSpec& spec, const AnalyticFunction& f, int n,
                          const OptimizerConfig& config = {},
                          const std::vector<ParamTuple>& warm_starts = {});

/// nbest for n = 1..n_max, each seeded with the previous optimum extended by
/// a greedy step, so d_f(n) is nonincreasing by construction of the seeds.
std::vector<ApproximationResult> nbest_sweep(const SpaceSpec& spec, const AnalyticFunction& f,
                                             int n_max, const OptimizerConfig& config = {});

struct BvcPoint {
  double radius = 0.0;
  double sup = 0.0;  ///< max over the angular grid of |<f, E_a>|
};

/// |<f, E_a>| = |f(a)| / ||K_a|| on circles |a| = r, with the untruncated
/// kernel norm. `angles` points per circle.
std::vector<BvcPoint> bvc_profile(const SpaceSpec& spec, const AnalyticFunction& f,
                                  const std::vector<double>& radii, int angles = 512);

}  // namespace rkhs
