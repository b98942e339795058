#include "rkhs/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rkhs/simd/kernels.hpp"

namespace rkhs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::shape: return "shape";
    case ErrorKind::domain: return "domain";
    case ErrorKind::degree: return "degree";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::unsupported_space: return "unsupported-space";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::degenerate_query: return "degenerate-query";
    case ErrorKind::divergence_risk: return "divergence-risk";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

const char* to_string(Family family) noexcept {
  switch (family) {
    case Family::hardy: return "hardy";
    case Family::bergman: return "bergman";
    case Family::weighted_hardy: return "weighted_hardy";
  }
  return "unknown";
}

namespace {

constexpr double kSeriesTol = 1e-17;
constexpr std::size_t kSeriesCap = 50'000'000;

void check_family_param(Family family, double param) {
  if (!std::isfinite(param)) throw Error(ErrorKind::domain, "space parameter must be finite");
  if (family == Family::bergman && !(param > -1.0)) {
    std::ostringstream os;
    os << "bergman alpha must exceed -1 (got " << param << ")";
    throw Error(ErrorKind::domain, os.str());
  }
}

// Builds W(0..n-1). Bergman weights use the ratio
// W(k+1)/W(k) = (k+1)/(k+2+alpha) of Gamma(k+1)Gamma(2+alpha)/Gamma(k+2+alpha),
// which neither overflows nor accumulates log-gamma cancellation.
std::vector<double> weight_table(Family family, double param, std::size_t n) {
  std::vector<double> w(n);
  switch (family) {
    case Family::hardy:
      std::fill(w.begin(), w.end(), 1.0);
      break;
    case Family::weighted_hardy:
      for (std::size_t k = 0; k < n; ++k) w[k] = std::pow(1.0 + double(k), param);
      break;
    case Family::bergman: {
      double cur = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        w[k] = cur;
        cur *= (double(k) + 1.0) / (double(k) + 2.0 + param);
      }
      break;
    }
  }
  return w;
}

// Terms x^k / W(k) of the kernel diagonal; calls sink(k, term) until the tail
// is negligible, returns the running total.
template <class Sink>
double diagonal_series(Family family, double param, double x, Sink&& sink) {
  double total = 0.0;
  double power = 1.0;
  double w = 1.0;
  const double peak = std::max(0.0, std::abs(param) + 1.0) / std::max(1e-300, 1.0 - x);
  for (std::size_t k = 0; k < kSeriesCap; ++k) {
    if (family == Family::weighted_hardy) w = std::pow(1.0 + double(k), param);
    const double term = power / w;
    sink(k, term);
    total += term;
    if (double(k) > peak && term <= kSeriesTol * total) return total;
    power *= x;
    if (family == Family::bergman) w *= (double(k) + 1.0) / (double(k) + 2.0 + param);
    if (power == 0.0) return total;
  }
  throw Error(ErrorKind::domain, "kernel series does not converge at this radius");
}

double relative_tail(Family family, double param, std::size_t degree, double r) {
  double tail = 0.0;
  const double total = diagonal_series(family, param, r * r, [&](std::size_t k, double t) {
    if (k > degree) tail += t;
  });
  return tail / total;
}

}  // namespace

double family_weight(Family family, double param, std::size_t k) {
  check_family_param(family, param);
  switch (family) {
    case Family::hardy:
      return 1.0;
    case Family::weighted_hardy:
      return std::pow(1.0 + double(k), param);
    case Family::bergman: {
      const double kk = double(k);
      return std::exp(std::lgamma(kk + 1.0) + std::lgamma(2.0 + param) -
                      std::lgamma(kk + 2.0 + param));
    }
  }
  return 1.0;
}

std::size_t required_degree(Family family, double param, double r, double tol) {
  check_family_param(family, param);
  if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::domain, "radius must lie in [0, 1)");
  std::vector<double> terms;
  const double total =
      diagonal_series(family, param, r * r, [&](std::size_t, double t) { terms.push_back(t); });
  double tail = 0.0;
  for (std::size_t k = terms.size(); k-- > 0;) {
    if (tail + terms[k] > tol * total) return std::max<std::size_t>(k, 1);
    tail += terms[k];
  }
  return 1;
}

SpaceSpec::SpaceSpec(Family family, double param, SpaceOptions options)
    : family_(family), param_(family == Family::hardy ? 0.0 : param), options_(options) {
  check_family_param(family_, param_);
  if (options_.degree < 1) throw Error(ErrorKind::degree, "max degree must be >= 1");
  if (!(options_.r_max > 0.0 && options_.r_max < 1.0)) {
    throw Error(ErrorKind::domain, "r_max must lie in (0, 1)");
  }
  if (!(options_.tol_trunc > 0.0)) throw Error(ErrorKind::domain, "tol_trunc must be positive");

  auto w = weight_table(family_, param_, size());
  std::vector<double> inv(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (!(w[k] > 0.0) || !std::isfinite(w[k]) || !std::isfinite(1.0 / w[k])) {
      throw Error(ErrorKind::domain, "weight sequence leaves the representable range");
    }
    inv[k] = 1.0 / w[k];
  }
  weights_ = std::make_shared<const std::vector<double>>(std::move(w));
  inverse_weights_ = std::make_shared<const std::vector<double>>(std::move(inv));

  tail_ = relative_tail(family_, param_, options_.degree, options_.r_max);
  if (tail_ > options_.tol_trunc) {
    std::ostringstream os;
    os << "truncation at degree " << options_.degree << " leaves relative kernel tail " << tail_
       << " at r_max=" << options_.r_max << " (tol " << options_.tol_trunc << "); need degree >= "
       << required_degree(family_, param_, options_.r_max, options_.tol_trunc);
    throw Error(ErrorKind::degree, os.str());
  }
}

double SpaceSpec::weight(std::size_t k) const {
  if (k > degree()) {
    std::ostringstream os;
    os << "weight index " << k << " outside 0.." << degree();
    throw Error(ErrorKind::bounds, os.str());
  }
  return (*weights_)[k];
}

std::string SpaceSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == Family::bergman) os << "(alpha=" << param_ << ")";
  if (family_ == Family::weighted_hardy) os << "(beta=" << param_ << ")";
  os << " N=" << degree();
  return os.str();
}

// ---------------------------------------------------------------------------

AnalyticFunction::AnalyticFunction(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw Error(ErrorKind::shape, "analytic function needs at least one coefficient");
  for (const auto& c : c_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::domain, "non-finite Taylor coefficient");
    }
  }
}

AnalyticFunction AnalyticFunction::resized(std::size_t degree) const {
  std::vector<Complex> c(degree + 1);
  std::copy_n(c_.begin(), std::min(c.size(), c_.size()), c.begin());
  AnalyticFunction out;
  out.c_ = std::move(c);
  return out;
}

namespace {
void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    std::ostringstream os;
    os << "degree mismatch: " << (a - 1) << " vs " << (b - 1);
    throw Error(ErrorKind::shape, os.str());
  }
}
}  // namespace

void AnalyticFunction::axpy(Complex alpha, const AnalyticFunction& x) {
  require_same_size(c_.size(), x.c_.size());
  simd::axpy(alpha, x.c_, c_);
}

AnalyticFunction& AnalyticFunction::operator+=(const AnalyticFunction& o) {
  axpy(1.0, o);
  return *this;
}

AnalyticFunction& AnalyticFunction::operator-=(const AnalyticFunction& o) {
  axpy(-1.0, o);
  return *this;
}

AnalyticFunction& AnalyticFunction::operator*=(Complex s) {
  for (auto& c : c_) c *= s;
  return *this;
}

bool AnalyticFunction::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](Complex c) { return c == Complex{}; });
}

// ---------------------------------------------------------------------------

ParamTuple::ParamTuple(std::vector<Complex> points, double eps_merge, double delta_min)
    : eps_merge_(eps_merge), delta_min_(delta_min) {
  if (!(eps_merge >= 0.0)) throw Error(ErrorKind::domain, "eps_merge must be non-negative");
  if (!(delta_min > 0.0 && delta_min < 1.0)) {
    throw Error(ErrorKind::domain, "delta_min must lie in (0, 1)");
  }
  points_.reserve(points.size());
  mult_.reserve(points.size());
  for (std::size_t k = 0; k < points.size(); ++k) {
    Complex a = points[k];
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()) ||
        std::abs(a) > 1.0 - delta_min) {
      std::ostringstream os;
      os << "parameter " << k << " = " << a << " outside the disc of radius " << 1.0 - delta_min;
      throw Error(ErrorKind::domain, os.str());
    }
    // Snap onto the earliest identified representative.
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (std::abs(points_[j] - a) <= eps_merge) {
        a = points_[j];
        break;
      }
    }
    int l = 1;
    for (const auto& p : points_) l += (p == a);
    points_.push_back(a);
    mult_.push_back(l);
  }
}

ParamTuple ParamTuple::extended(Complex a) const {
  std::vector<Complex> p(points_.begin(), points_.end());
  p.push_back(a);
  return ParamTuple(std::move(p), eps_merge_, delta_min_);
}

ParamTuple ParamTuple::prefix(std::size_t m) const {
  ParamTuple out;
  out.eps_merge_ = eps_merge_;
  out.delta_min_ = delta_min_;
  m = std::min(m, points_.size());
  out.points_.assign(points_.begin(), points_.begin() + std::ptrdiff_t(m));
  out.mult_.assign(mult_.begin(), mult_.begin() + std::ptrdiff_t(m));
  return out;
}

// ---------------------------------------------------------------------------

double weight(const SpaceSpec& spec, std::size_t k) { return spec.weight(k); }

Complex inner_product(const AnalyticFunction& f, const AnalyticFunction& g,
                      const SpaceSpec& spec) {
  require_same_size(f.size(), g.size());
  require_same_size(f.size(), spec.size());
  return simd::weighted_dot(spec.weights(), f.coeffs(), g.coeffs());
}

double norm_squared(const AnalyticFunction& f, const SpaceSpec& spec) {
  require_same_size(f.size(), spec.size());
  return simd::weighted_norm2(spec.weights(), f.coeffs());
}

double norm(const AnalyticFunction& f, const SpaceSpec& spec) {
  return std::sqrt(norm_squared(f, spec));
}

namespace {
void require_open_disc(Complex a) {
  if (!(std::abs(a) < 1.0)) {
    std::ostringstream os;
    os << "kernel parameter " << a << " is not in the open unit disc";
    throw Error(ErrorKind::domain, os.str());
  }
}
}  // namespace

AnalyticFunction kernel(const SpaceSpec& spec, Complex a) { return multiple_kernel(spec, a, 1); }

AnalyticFunction multiple_kernel(const SpaceSpec& spec, Complex a, int order) {
  require_open_disc(a);
  if (order < 1 || std::size_t(order) > spec.degree()) {
    std::ostringstream os;
    os << "multiple kernel order " << order << " outside 1.." << spec.degree();
    throw Error(ErrorKind::degree, os.str());
  }
  const std::size_t m = std::size_t(order - 1);
  const auto inv = spec.inverse_weights();
  const Complex abar = std::conj(a);
  std::vector<Complex> c(spec.size());
  // c_k = k (k-1) ... (k-m+1) conj(a)^{k-m} / W(k)
  Complex power = 1.0;
  for (std::size_t k = m; k < c.size(); ++k) {
    double falling = 1.0;
    for (std::size_t j = 0; j < m; ++j) falling *= double(k - j);
    c[k] = falling * power * inv[k];
    power *= abar;
  }
  return AnalyticFunction(std::move(c));
}

Complex evaluate(const AnalyticFunction& f, Complex z) {
  Complex out;
  simd::scalar_table().horner_batch(f.coeffs().data(), f.size(), &z, &out, 1);
  return out;
}

std::vector<Complex> evaluate_many(const AnalyticFunction& f, std::span<const Complex> z) {
  std::vector<Complex> out(z.size());
  simd::horner_batch(f.coeffs(), z, out);
  return out;
}

Complex derivative_at(const AnalyticFunction& f, Complex z, int m) {
  if (m < 0 || std::size_t(m) > f.degree()) {
    std::ostringstream os;
    os << "derivative order " << m << " outside 0.." << f.degree();
    throw Error(ErrorKind::degree, os.str());
  }
  const std::size_t mm = std::size_t(m);
  std::vector<Complex> d(f.size() - mm);
  for (std::size_t j = 0; j < d.size(); ++j) {
    double falling = 1.0;
    for (std::size_t i = 0; i < mm; ++i) falling *= double(j + mm - i);
    d[j] = falling * f[j + mm];
  }
  Complex out;
  simd::scalar_table().horner_batch(d.data(), d.size(), &z, &out, 1);
  return out;
}

double kernel_norm_squared(const SpaceSpec& spec, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::domain, "radius must lie in [0, 1)");
  const double x = r * r;
  switch (spec.family()) {
    case Family::hardy:
      return 1.0 / (1.0 - x);
    case Family::bergman:
      return std::pow(1.0 - x, -(2.0 + spec.param()));
    case Family::weighted_hardy:
      return diagonal_series(spec.family(), spec.param(), x, [](std::size_t, double) {});
  }
  return 0.0;
}

Complex kernel_value(const SpaceSpec& spec, Complex z, Complex w) {
  const Complex u = std::conj(w) * z;
  if (!(std::abs(u) < 1.0)) throw Error(ErrorKind::domain, "kernel evaluated outside |w z| < 1");
  switch (spec.family()) {
    case Family::hardy:
      return 1.0 / (1.0 - u);
    case Family::bergman:
      return std::pow(1.0 - u, -(2.0 + spec.param()));
    case Family::weighted_hardy: {
      const double beta = spec.param();
      const double x = std::abs(u);
      const double peak = (std::abs(beta) + 1.0) / (1.0 - x);
      Complex sum = 0.0, power = 1.0;
      double bound = 0.0;
      for (std::size_t k = 0; k < kSeriesCap; ++k) {
        const double inv_w = std::pow(1.0 + double(k), -beta);
        sum += power * inv_w;
        const double mag = std::pow(x, double(k)) * inv_w;
        bound += mag;
        if (double(k) > peak && mag <= kSeriesTol * bound) return sum;
        power *= u;
      }
      throw Error(ErrorKind::domain, "kernel series does not converge at this point");
    }
  }
  return 0.0;
}

}  // namespace rkhs
