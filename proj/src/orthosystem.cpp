#include "rkhs/orthosystem.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace rkhs {

OrthonormalSystem::OrthonormalSystem(SpaceSpec spec, double eps_degenerate)
    : spec_(std::move(spec)), eps_degenerate_(eps_degenerate) {}

AnalyticFunction OrthonormalSystem::orthogonalize(AnalyticFunction v) const {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis_) v.axpy(-inner_product(v, e, spec_), e);
  }
  return v;
}

void OrthonormalSystem::append(const ParamTuple& tuple) {
  const std::size_t l = basis_.size();
  if (tuple.size() != l + 1) {
    throw Error(ErrorKind::shape, "append expects a tuple extending the system by one entry");
  }
  const Complex a = tuple[l];
  if (std::abs(a) > spec_.r_max() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "parameter " << l << " = " << a << " exceeds the certified radius r_max="
       << spec_.r_max() << " of " << spec_.describe();
    throw Error(ErrorKind::domain, os.str());
  }
  AnalyticFunction v = multiple_kernel(spec_, a, tuple.multiplicity(l));
  const double vnorm = norm(v, spec_);
  AnalyticFunction r = orthogonalize(std::move(v));
  const double rnorm = norm(r, spec_);
  if (!(rnorm > eps_degenerate_ * vnorm)) {
    std::ostringstream os;
    os << "Gram-Schmidt residual at index " << l << " (a=" << a << ", order "
       << tuple.multiplicity(l) << ") is " << rnorm / vnorm << " relative; degenerate tuple";
    throw ConditioningError(l, os.str());
  }
  r *= 1.0 / rnorm;
  basis_.push_back(std::move(r));
  residuals_.push_back(rnorm);
  tuple_ = tuple;
}

OrthonormalSystem gram_schmidt(const SpaceSpec& spec, const ParamTuple& tuple,
                               double eps_degenerate) {
  OrthonormalSystem system(spec, eps_degenerate);
  for (std::size_t l = 0; l < tuple.size(); ++l) system.append(tuple.prefix(l + 1));
  return system;
}

Projection project(const AnalyticFunction& f, const OrthonormalSystem& system) {
  const auto& spec = system.space();
  Projection out{{}, AnalyticFunction(f.degree()), f};
  out.coeffs.reserve(system.size());
  for (const auto& e : system.basis()) {
    const Complex c = inner_product(f, e, spec);
    out.coeffs.push_back(c);
    out.projected.axpy(c, e);
  }
  out.remainder -= out.projected;
  return out;
}

// ---------------------------------------------------------------------------

Complex evaluate_blaschke(const BlaschkeProduct& b, Complex z) {
  Complex value = 1.0;
  for (const Complex a : b.zeros().points()) {
    const Complex den = 1.0 - std::conj(a) * z;
    if (std::abs(den) < 1e-14) {
      std::ostringstream os;
      os << "Blaschke factor at " << a << " has a pole near z=" << z;
      throw Error(ErrorKind::singularity, os.str());
    }
    value *= (z - a) / den;
  }
  return value;
}

namespace {

// f <- (z - a) f / (1 - conj(a) z), truncated to the same degree.
void apply_factor(std::span<Complex> c, Complex a) {
  const Complex abar = std::conj(a);
  Complex prev_f = 0.0;  // f_{k-1}
  Complex prev_h = 0.0;  // h_{k-1}
  for (auto& ck : c) {
    const Complex g = prev_f - a * ck;
    prev_f = ck;
    ck = g + abar * prev_h;
    prev_h = ck;
  }
}

// f <- (1 - conj(a) z) f / (z - a); returns the deflation remainder f(a).
Complex remove_factor(std::span<Complex> c, Complex a) {
  const std::size_t n = c.size();
  if (n == 1) {
    const Complex rem = c[0];
    c[0] = 0.0;
    return rem;
  }
  // Quotient q of degree n-2, computed top-down (stable for |a| < 1).
  std::vector<Complex> q(n - 1);
  q[n - 2] = c[n - 1];
  for (std::size_t k = n - 2; k >= 1; --k) q[k - 1] = c[k] + a * q[k];
  const Complex rem = c[0] + a * q[0];
  const Complex abar = std::conj(a);
  c[0] = q[0];
  for (std::size_t k = 1; k < n - 1; ++k) c[k] = q[k] - abar * q[k - 1];
  c[n - 1] = -abar * q[n - 2];
  return rem;
}

}  // namespace

AnalyticFunction multiply_blaschke(const AnalyticFunction& f, const BlaschkeProduct& b) {
  AnalyticFunction out = f;
  for (const Complex a : b.zeros().points()) apply_factor(out.coeffs(), a);
  return out;
}

AnalyticFunction divide_blaschke(const AnalyticFunction& f, const BlaschkeProduct& b,
                                 double eps_zero) {
  AnalyticFunction out = f;
  for (const Complex a : b.zeros().points()) {
    double scale = 0.0;
    for (const auto& c : out.coeffs()) scale += std::abs(c);
    const Complex rem = remove_factor(out.coeffs(), a);
    if (std::abs(rem) > eps_zero * std::max(scale, 1e-300)) {
      std::ostringstream os;
      os << "function does not vanish at Blaschke zero " << a << " (|value| = " << std::abs(rem)
         << ")";
      throw Error(ErrorKind::precondition, os.str());
    }
  }
  return out;
}

OrthonormalSystem tm_basis(const SpaceSpec& spec, const ParamTuple& tuple) {
  if (spec.family() != Family::hardy) {
    throw Error(ErrorKind::unsupported_space,
                "Takenaka-Malmquist basis is defined for the Hardy space only, not " +
                    spec.describe());
  }
  OrthonormalSystem system(spec);
  for (std::size_t l = 0; l < tuple.size(); ++l) {
    const Complex a = tuple[l];
    if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::domain, "TM parameter outside the disc");
    // normalized Szego kernel e_a = sqrt(1-|a|^2) / (1 - conj(a) z)
    std::vector<Complex> c(spec.size());
    const double s = std::sqrt(1.0 - std::norm(a));
    Complex power = 1.0;
    for (auto& ck : c) {
      ck = s * power;
      power *= std::conj(a);
    }
    AnalyticFunction e(std::move(c));
    for (std::size_t j = 0; j < l; ++j) apply_factor(e.coeffs(), tuple[j]);
    system.basis_.push_back(std::move(e));
    system.residuals_.push_back(1.0);
  }
  system.tuple_ = tuple;
  return system;
}

AnalyticFunction reduced_remainder(const SpaceSpec& spec, const AnalyticFunction& f, Complex a,
                                   double eps_zero) {
  const ParamTuple single({a}, ParamTuple::default_eps_merge,
                          std::min(ParamTuple::default_delta_min, 1.0 - spec.r_max()));
  const auto system = gram_schmidt(spec, single);
  const auto qf = project(f, system).remainder;
  return divide_blaschke(qf, BlaschkeProduct(single), eps_zero);
}

AnalyticFunction iterated_remainder(const SpaceSpec& spec, const AnalyticFunction& f,
                                    const ParamTuple& tuple, double eps_zero) {
  AnalyticFunction g = f;
  for (const Complex a : tuple.points()) g = reduced_remainder(spec, g, a, eps_zero);
  return g;
}

AnalyticFunction zero_space_kernel(const SpaceSpec& spec, const ParamTuple& zeros, Complex w) {
  for (const Complex a : zeros.points()) {
    if (std::abs(a - w) <= zeros.eps_merge()) {
      std::ostringstream os;
      os << "query point " << w << " coincides with zero " << a;
      throw Error(ErrorKind::degenerate_query, os.str());
    }
  }
  const auto kw = kernel(spec, w);
  if (zeros.empty()) return kw;
  return project(kw, gram_schmidt(spec, zeros)).remainder;
}

}  // namespace rkhs
