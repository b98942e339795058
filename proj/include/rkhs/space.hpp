#pragma once

// Coefficient-sequence model of the Hardy, weighted Bergman and weighted Hardy
// spaces on the unit disc. An element is a truncated Taylor series
// f(z) = sum_{k<=N} c_k z^k and every space in the family is the weighted
// sequence space with <f, g> = sum_k W(k) c_k conj(d_k). The reproducing kernel
// at a has coefficients conj(a)^k / W(k).

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rkhs/error.hpp"

namespace rkhs {

using Complex = std::complex<double>;

enum class Family { hardy, bergman, weighted_hardy };

const char* to_string(Family family) noexcept;

struct SpaceOptions {
  std::size_t degree = 1024;
  /// Largest parameter radius the truncation is certified for.
  double r_max = 0.99;
  /// Bound on sum_{k>N} r_max^{2k}/W(k) relative to ||K_a||^2 at |a| = r_max.
  double tol_trunc = 1e-5;
};

class SpaceSpec {
 public:
  /// Validates the family parameter and the truncation tail; throws Error
  /// (domain or degree) when the configuration cannot be honoured.
  SpaceSpec(Family family, double param, SpaceOptions options = {});

  static SpaceSpec hardy(SpaceOptions options = {}) {
    return SpaceSpec(Family::hardy, 0.0, options);
  }
  static SpaceSpec bergman(double alpha, SpaceOptions options = {}) {
    return SpaceSpec(Family::bergman, alpha, options);
  }
  static SpaceSpec weighted_hardy(double beta, SpaceOptions options = {}) {
    return SpaceSpec(Family::weighted_hardy, beta, options);
  }

  Family family() const noexcept { return family_; }
  /// alpha for bergman, beta for weighted_hardy, 0 for hardy.
  double param() const noexcept { return param_; }
  std::size_t degree() const noexcept { return options_.degree; }
  std::size_t size() const noexcept { return options_.degree + 1; }
  double r_max() const noexcept { return options_.r_max; }
  const SpaceOptions& options() const noexcept { return options_; }

  double weight(std::size_t k) const;
  std::span<const double> weights() const noexcept { return *weights_; }
  std::span<const double> inverse_weights() const noexcept { return *inverse_weights_; }

  /// Relative truncation tail at r_max, as measured by the constructor.
  double truncation_tail() const noexcept { return tail_; }

  /// Same family and parameter at a different truncation.
  SpaceSpec with_options(SpaceOptions options) const {
    return SpaceSpec(family_, param_, options);
  }

  std::string describe() const;

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) noexcept {
    return a.family_ == b.family_ && a.param_ == b.param_ &&
           a.options_.degree == b.options_.degree;
  }

 private:
  Family family_;
  double param_;
  SpaceOptions options_;
  std::shared_ptr<const std::vector<double>> weights_;
  std::shared_ptr<const std::vector<double>> inverse_weights_;
  double tail_ = 0.0;
};

/// W(k) straight from the family formula, without truncation.
double family_weight(Family family, double param, std::size_t k);

/// Smallest degree N whose relative truncation tail at radius r is <= tol.
std::size_t required_degree(Family family, double param, double r, double tol);

class AnalyticFunction {
 public:
  AnalyticFunction() = default;
  /// Zero function of the given degree.
  explicit AnalyticFunction(std::size_t degree) : c_(degree + 1) {}
  /// Takes ownership of the coefficients; rejects empty or non-finite input.
  explicit AnalyticFunction(std::vector<Complex> coeffs);

  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  std::size_t size() const noexcept { return c_.size(); }
  std::span<const Complex> coeffs() const noexcept { return c_; }
  std::span<Complex> coeffs() noexcept { return c_; }
  Complex operator[](std::size_t k) const noexcept { return c_[k]; }
  Complex& operator[](std::size_t k) noexcept { return c_[k]; }

  /// Zero-padded or truncated copy.
  AnalyticFunction resized(std::size_t degree) const;

  /// this += alpha * x
  void axpy(Complex alpha, const AnalyticFunction& x);

  AnalyticFunction& operator+=(const AnalyticFunction& o);
  AnalyticFunction& operator-=(const AnalyticFunction& o);
  AnalyticFunction& operator*=(Complex s);

  friend AnalyticFunction operator+(AnalyticFunction a, const AnalyticFunction& b) {
    return a += b;
  }
  friend AnalyticFunction operator-(AnalyticFunction a, const AnalyticFunction& b) {
    return a -= b;
  }
  friend AnalyticFunction operator*(Complex s, AnalyticFunction a) { return a *= s; }

  bool is_zero() const noexcept;

 private:
  std::vector<Complex> c_;
};

/// Ordered parameters in the open disc. Entries closer than eps_merge to an
/// earlier entry are snapped onto it and counted as a repeated parameter; the
/// multiplicity of entry k counts identified entries at positions <= k.
class ParamTuple {
 public:
  static constexpr double default_eps_merge = 1e-7;
  static constexpr double default_delta_min = 0.01;

  ParamTuple() = default;
  explicit ParamTuple(std::vector<Complex> points, double eps_merge = default_eps_merge,
                      double delta_min = default_delta_min);

  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::span<const Complex> points() const noexcept { return points_; }
  Complex operator[](std::size_t k) const noexcept { return points_[k]; }
  /// l(a_k), one-based count.
  int multiplicity(std::size_t k) const noexcept { return mult_[k]; }
  std::span<const int> multiplicities() const noexcept { return mult_; }
  double eps_merge() const noexcept { return eps_merge_; }
  double delta_min() const noexcept { return delta_min_; }

  ParamTuple extended(Complex a) const;
  ParamTuple prefix(std::size_t m) const;

 private:
  std::vector<Complex> points_;
  std::vector<int> mult_;
  double eps_merge_ = default_eps_merge;
  double delta_min_ = default_delta_min;
};

double weight(const SpaceSpec& spec, std::size_t k);

Complex inner_product(const AnalyticFunction& f, const AnalyticFunction& g,
                      const SpaceSpec& spec);
double norm_squared(const AnalyticFunction& f, const SpaceSpec& spec);
double norm(const AnalyticFunction& f, const SpaceSpec& spec);

/// Truncated reproducing kernel K_a.
AnalyticFunction kernel(const SpaceSpec& spec, Complex a);

/// (order-1)-th derivative of K_w in conj(w) at w = a; order 1 is kernel().
AnalyticFunction multiple_kernel(const SpaceSpec& spec, Complex a, int order);

Complex evaluate(const AnalyticFunction& f, Complex z);
/// Evaluates f on many points through the batched kernel.
std::vector<Complex> evaluate_many(const AnalyticFunction& f, std::span<const Complex> z);

/// f^{(m)}(z).
Complex derivative_at(const AnalyticFunction& f, Complex z, int m);

/// Untruncated ||K_a||^2 = K(a, a) as a function of r = |a| < 1: closed forms
/// for hardy and bergman, convergent series for weighted_hardy.
double kernel_norm_squared(const SpaceSpec& spec, double r);

/// Untruncated K(z, w) = sum_k (conj(w) z)^k / W(k), for |conj(w) z| < 1.
Complex kernel_value(const SpaceSpec& spec, Complex z, Complex w);

}  // namespace rkhs
