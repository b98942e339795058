#pragma once

// Numerical checks of the structural facts the n-best existence argument
// relies on. Every check returns a ConditionReport; none of them throw on a
// failed assertion.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rkhs/orthosystem.hpp"
#include "rkhs/stochastic.hpp"

namespace rkhs {

struct ConditionReport {
  std::string space;
  std::string check;
  std::string grid;
  std::vector<std::pair<std::string, double>> measured;
  /// NaN when the check asserts a qualitative property only.
  double bound = 0.0;
  bool pass = false;

  double value(const std::string& name) const;
};

inline constexpr int boundary_points = 512;
inline constexpr int interior_radii = 64;
inline constexpr int interior_angles = 64;

/// Uniform bound C with |K_w(z)| <= C ||K_w||^2 for |z| <= 1, where the
/// family is known to have one: 2, 2^{2+alpha}, 4.5 (weighted_hardy with
/// 0 <= beta <= 1; 2 at beta = 0).
std::optional<double> ch_bound(const SpaceSpec& spec);

/// Boundary-grid sup |f| over `boundary_points` angles on |z| = 1.
double boundary_sup(const AnalyticFunction& f, int points = boundary_points);

ConditionReport check_infinite_norm(const SpaceSpec& spec,
                                    const std::vector<double>& radii = {0.5, 0.9, 0.99, 0.999});

/// sup |K_w(z)| / ||K_w||^2 over |w| on a log-spaced grid reaching 0.999,
/// `density` angles for w and `boundary_points` angles for z.
ConditionReport estimate_CH(const SpaceSpec& spec, int density = interior_angles);

ConditionReport check_zero_property(const SpaceSpec& spec, const AnalyticFunction& f,
                                    const ParamTuple& tuple);

ConditionReport check_reduced_bound(const SpaceSpec& spec, const AnalyticFunction& f,
                                    const ParamTuple& tuple);

ConditionReport check_bvc(const SpaceSpec& spec, const AnalyticFunction& f,
                          const std::vector<double>& radii = {0.5, 0.9, 0.99, 0.999});

/// weighted_hardy with beta > 1: ||K_a||^2 at |a| = 0.9999 against the
/// partial sum of (1+k)^{-beta} up to `degree`.
ConditionReport check_beta_gt1(double beta, std::size_t degree = 1024);

/// Hardy only: Q_Z K_w against phi_Z conj(phi_Z(w)) K_w.
ConditionReport check_zero_space_factorization(const SpaceSpec& spec, const ParamTuple& zeros,
                                               Complex w);

/// Stochastic boundary decay: the energy increment of a last parameter on
/// |a| = radius, after the fixed prefix, against its interior maximum.
ConditionReport check_stochastic_decay(const Ensemble& e, const ParamTuple& prefix,
                                       double radius = 0.999);

/// Default battery for one space, with seeded random signals and tuples.
std::vector<ConditionReport> verify_space(const SpaceSpec& spec, std::uint64_t seed = 0);

}  // namespace rkhs
