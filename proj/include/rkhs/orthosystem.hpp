#pragma once

// Gram-Schmidt systems of (multiple) reproducing kernels, the projections
// P = sum <f, E_l> E_l and Q = I - P, finite Blaschke products, the
// Takenaka-Malmquist basis of the Hardy space, reduced remainders
// (Q_a f) / phi_a and zero-space kernels Q_Z(K_w).

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rkhs/space.hpp"

namespace rkhs {

inline constexpr double default_eps_degenerate = 1e-10;

class OrthonormalSystem {
 public:
  /// Empty system over `spec`; grow it with append().
  explicit OrthonormalSystem(SpaceSpec spec, double eps_degenerate = default_eps_degenerate);

  const SpaceSpec& space() const noexcept { return spec_; }
  const ParamTuple& tuple() const noexcept { return tuple_; }
  std::size_t size() const noexcept { return basis_.size(); }
  const AnalyticFunction& operator[](std::size_t l) const noexcept { return basis_[l]; }
  std::span<const AnalyticFunction> basis() const noexcept { return basis_; }
  /// ||Q_{a_1..a_{l-1}} K~_{a_l}||, the Gram-Schmidt denominators.
  std::span<const double> residual_norms() const noexcept { return residuals_; }

  /// Orthogonalizes v against the current basis: modified Gram-Schmidt
  /// followed by one full reorthogonalization pass. Returns the residual.
  AnalyticFunction orthogonalize(AnalyticFunction v) const;

  /// Appends the next multiple kernel of `tuple` (which must extend the
  /// current tuple by one entry). Throws ConditioningError when
  /// ||residual|| <= eps_degenerate * ||K~||.
  void append(const ParamTuple& tuple);

 private:
  SpaceSpec spec_;
  double eps_degenerate_;
  ParamTuple tuple_;
  std::vector<AnalyticFunction> basis_;
  std::vector<double> residuals_;

  friend OrthonormalSystem tm_basis(const SpaceSpec& spec, const ParamTuple& tuple);
};

OrthonormalSystem gram_schmidt(const SpaceSpec& spec, const ParamTuple& tuple,
                               double eps_degenerate = default_eps_degenerate);

struct Projection {
  std::vector<Complex> coeffs;  ///< <f, E_l>
  AnalyticFunction projected;   ///< P f
  AnalyticFunction remainder;   ///< Q f = f - P f
};

Projection project(const AnalyticFunction& f, const OrthonormalSystem& system);

/// Canonical Blaschke product prod (z - a_k) / (1 - conj(a_k) z), zeros with
/// multiplicity as listed in the tuple.
class BlaschkeProduct {
 public:
  BlaschkeProduct() = default;
  explicit BlaschkeProduct(ParamTuple zeros) : zeros_(std::move(zeros)) {}
  const ParamTuple& zeros() const noexcept { return zeros_; }

 private:
  ParamTuple zeros_;
};

Complex evaluate_blaschke(const BlaschkeProduct& b, Complex z);

/// Truncated Taylor series of phi * f (degree preserved).
AnalyticFunction multiply_blaschke(const AnalyticFunction& f, const BlaschkeProduct& b);

/// f / phi by exact deflation at each zero followed by multiplication with
/// (1 - conj(a) z). Throws ErrorKind::precondition when f does not vanish at a
/// zero to within eps_zero * (sum |c_k|).
AnalyticFunction divide_blaschke(const AnalyticFunction& f, const BlaschkeProduct& b,
                                 double eps_zero = 1e-9);

/// Takenaka-Malmquist functions B_l = e_{a_l} * phi_{a_1..a_{l-1}}, Hardy only.
OrthonormalSystem tm_basis(const SpaceSpec& spec, const ParamTuple& tuple);

/// (Q_a f) / phi_a.
AnalyticFunction reduced_remainder(const SpaceSpec& spec, const AnalyticFunction& f, Complex a,
                                   double eps_zero = 1e-9);

/// Reduced remainders applied left to right over the tuple.
AnalyticFunction iterated_remainder(const SpaceSpec& spec, const AnalyticFunction& f,
                                    const ParamTuple& tuple, double eps_zero = 1e-9);

/// Reproducing kernel of the zero space H_Z at w, computed as Q_Z(K_w).
AnalyticFunction zero_space_kernel(const SpaceSpec& spec, const ParamTuple& zeros, Complex w);

}  // namespace rkhs
