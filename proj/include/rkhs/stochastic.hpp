#pragma once

// Random signals as finite weighted ensembles (sample-average approximation
// of the Bochner space L^2(H, Omega)). The stochastic n-best problem uses one
// parameter tuple for every realization.

#include <cstdint>
#include <vector>

#include "rkhs/approx.hpp"

namespace rkhs {

class Ensemble {
 public:
  /// Uniform weights 1/M.
  Ensemble(SpaceSpec spec, std::vector<AnalyticFunction> realizations);
  /// Weights must be non-negative and sum to 1 within 1e-12.
  Ensemble(SpaceSpec spec, std::vector<AnalyticFunction> realizations,
           std::vector<double> weights);

  const SpaceSpec& space() const noexcept { return spec_; }
  std::size_t size() const noexcept { return realizations_.size(); }
  const std::vector<AnalyticFunction>& realizations() const noexcept { return realizations_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  /// sum_i p_i f_i
  AnalyticFunction mean() const;

 private:
  SpaceSpec spec_;
  std::vector<AnalyticFunction> realizations_;
  std::vector<double> weights_;
};

struct StochasticResult {
  ParamTuple parameters;
  /// coefficients[i][l] = <f_i, E_l>
  std::vector<std::vector<Complex>> coefficients;
  double expected_energy = 0.0;
  double expected_residual = 0.0;  ///< sqrt(sum_i p_i ||Q f_i||^2)
  double bochner_norm = 0.0;
  std::vector<StartReport> starts;
  bool degraded = false;
};

double bochner_norm(const Ensemble& e);

/// sum_i p_i energy(f_i, tuple), sharing one Gram-Schmidt system.
double stochastic_energy(const Ensemble& e, const ParamTuple& tuple);

StochasticResult stochastic_nbest(const Ensemble& e, int n, const OptimizerConfig& config = {});

/// Residual summary of a fixed tuple against the ensemble.
StochasticResult stochastic_fit(const Ensemble& e, const ParamTuple& tuple);

enum class EnsembleKind { kernel_mix, decaying_gaussian };

struct KernelTerm {
  Complex a;
  Complex c = 1.0;
  int order = 1;
};

struct EnsembleParams {
  /// kernel_mix: realization i is xi_i * sum_j c_j K~(a_j, order_j).
  std::vector<KernelTerm> kernels;
  /// kernel_mix: draw xi_i as standard complex Gaussians; otherwise xi_i = 1.
  bool random_scale = true;
  /// decaying_gaussian: coefficient k has E|c_k|^2 = (1+k)^{-2 gamma}.
  double gamma = 2.0;
};

/// Deterministic in `seed`. Complex Gaussians have independent real and
/// imaginary parts of variance sigma^2/2 each, so E|c|^2 = sigma^2.
/// decaying_gaussian rejects decay that leaves E||f||^2 infinite or barely
/// finite: 2 gamma must exceed 1 + b + 0.1, where W(k) ~ k^b.
Ensemble generate_ensemble(const SpaceSpec& spec, EnsembleKind kind, const EnsembleParams& params,
                           int count, std::uint64_t seed);

/// Weighted sum of (multiple) kernels.
AnalyticFunction kernel_mix(const SpaceSpec& spec, const std::vector<KernelTerm>& terms);

}  // namespace rkhs
