#include "rkhs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "parallel.hpp"
#include "rkhs/simd/kernels.hpp"

namespace rkhs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

std::string label(const char* name, double r) { return std::string(name) + "(r=" + fmt(r) + ")"; }

ConditionReport start(const SpaceSpec& spec, const char* check, std::string grid) {
  ConditionReport r;
  r.space = spec.describe();
  r.check = check;
  r.grid = std::move(grid);
  return r;
}

std::vector<Complex> circle(double r, int points) {
  std::vector<Complex> z(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) z[std::size_t(j)] = std::polar(r, 2.0 * std::numbers::pi * j / points);
  return z;
}

double sup_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double ConditionReport::value(const std::string& name) const {
  for (const auto& [k, v] : measured) {
    if (k == name) return v;
  }
  return kNaN;
}

std::optional<double> ch_bound(const SpaceSpec& spec) {
  switch (spec.family()) {
    case Family::hardy: return 2.0;
    case Family::bergman: return std::pow(2.0, 2.0 + spec.param());
    case Family::weighted_hardy:
      if (spec.param() == 0.0) return 2.0;
      if (spec.param() > 0.0 && spec.param() <= 1.0) return 4.5;
      return std::nullopt;
  }
  return std::nullopt;
}

double boundary_sup(const AnalyticFunction& f, int points) {
  const auto z = circle(1.0, points);
  return sup_abs(evaluate_many(f, z));
}

ConditionReport check_infinite_norm(const SpaceSpec& spec, const std::vector<double>& radii) {
  std::ostringstream grid;
  grid << "radii";
  for (const double r : radii) grid << ' ' << r;
  auto rep = start(spec, "infinite_norm", grid.str());
  rep.bound = spec.options().tol_trunc;

  bool growth = true;
  double prev = -1.0, worst = 0.0;
  for (const double r : radii) {
    const double exact = kernel_norm_squared(spec, r);
    rep.measured.emplace_back(label("K", r), exact);
    if (!(exact > prev)) growth = false;
    prev = exact;
    if (r <= spec.r_max()) {
      // what the truncated space actually represents
      const double truncated = norm_squared(kernel(spec, Complex(r, 0.0)), spec);
      worst = std::max(worst, std::abs(truncated - exact) / exact);
    }
  }
  rep.measured.emplace_back("max_rel_truncation_error", worst);
  rep.measured.emplace_back("strict_growth", growth ? 1.0 : 0.0);
  rep.pass = growth && worst <= rep.bound * (1.0 + 1e-9);
  return rep;
}

ConditionReport estimate_CH(const SpaceSpec& spec, int density) {
  if (density < 2) throw Error(ErrorKind::domain, "C_H grid density must be >= 2");
  std::ostringstream grid;
  grid << density << " radii 1-10^(-3i/" << density - 1 << ") x " << density
       << " angles for w, " << boundary_points << " boundary angles for z";
  auto rep = start(spec, "C_H", grid.str());

  // The ratio depends on w and z only through conj(w) z.
  std::vector<double> phases;
  for (int m = 0; m < density; ++m) {
    for (int j = 0; j < boundary_points; ++j) {
      double t = 2.0 * std::numbers::pi * (double(j) / boundary_points - double(m) / density);
      t = std::remainder(t, 2.0 * std::numbers::pi);
      phases.push_back(std::abs(t));  // |K| is symmetric under conjugation
    }
  }
  std::sort(phases.begin(), phases.end());
  phases.erase(std::unique(phases.begin(), phases.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-14; }),
               phases.end());

  std::vector<double> radii(static_cast<std::size_t>(density));
  for (int i = 0; i < density; ++i) radii[std::size_t(i)] = 1.0 - std::pow(10.0, -3.0 * i / (density - 1));

  std::vector<double> sup(radii.size(), 0.0);
  detail::parallel_for(radii.size(), [&](std::size_t i) {
    const double r = radii[i];
    const double kk = kernel_norm_squared(spec, r);
    std::vector<Complex> u(phases.size());
    for (std::size_t p = 0; p < phases.size(); ++p) u[p] = std::polar(r, phases[p]);
    std::vector<Complex> vals(u.size());
    if (spec.family() == Family::weighted_hardy) {
      // K(u) = sum u^k (1+k)^{-beta}; |u| = r so the tail is that of the
      // diagonal series at sqrt(r).
      const std::size_t deg =
          r == 0.0 ? 1 : required_degree(spec.family(), spec.param(), std::sqrt(r), 1e-14) + 1;
      std::vector<Complex> c(deg + 1);
      for (std::size_t k = 0; k <= deg; ++k) c[k] = std::pow(1.0 + double(k), -spec.param());
      simd::horner_batch(c, u, vals);
    } else {
      for (std::size_t p = 0; p < u.size(); ++p) vals[p] = kernel_value(spec, u[p], 1.0);
    }
    sup[i] = sup_abs(vals) / kk;
  });

  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    if (sup[i] > best) {
      best = sup[i];
      arg = i;
    }
  }
  rep.measured.emplace_back("sup", best);
  rep.measured.emplace_back("argmax_radius", radii[arg]);
  rep.measured.emplace_back(label("sup", radii.back()), sup.back());
  if (const auto c = ch_bound(spec)) {
    rep.bound = *c;
    rep.pass = best <= *c * (1.0 + 1e-9);
  } else {
    rep.bound = kNaN;
    rep.pass = std::isfinite(best);
  }
  return rep;
}

ConditionReport check_zero_property(const SpaceSpec& spec, const AnalyticFunction& f,
                                    const ParamTuple& tuple) {
  auto rep = start(spec, "zero_property",
                   "derivatives 0..l(a_j)-1 of Q f at each of " + std::to_string(tuple.size()) +
                       " parameters");
  rep.bound = 1e-9;
  const auto system = gram_schmidt(spec, tuple);
  const auto q = project(f, system).remainder;
  const double fn = norm(f, spec);
  double worst = 0.0;
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    // multiplicity(j) counts occurrences up to j, so the last copy covers all orders
    const int m = tuple.multiplicity(j) - 1;
    worst = std::max(worst, std::abs(derivative_at(q, tuple[j], m)));
  }
  const double rel = fn > 0.0 ? worst / fn : worst;
  rep.measured.emplace_back("max_abs_derivative_over_norm", rel);
  rep.measured.emplace_back("norm_f", fn);
  rep.pass = rel <= rep.bound;
  return rep;
}

ConditionReport check_reduced_bound(const SpaceSpec& spec, const AnalyticFunction& f,
                                    const ParamTuple& tuple) {
  auto rep = start(spec, "reduced_bound",
                   std::to_string(boundary_points) + " boundary angles, k=" +
                       std::to_string(tuple.size()));
  const double m = boundary_sup(f);
  const auto g = iterated_remainder(spec, f, tuple);
  const double s = boundary_sup(g);
  rep.measured.emplace_back("M", m);
  rep.measured.emplace_back("sup_remainder", s);
  if (const auto c = ch_bound(spec)) {
    rep.measured.emplace_back("C_H", *c);
    rep.bound = m * std::pow(1.0 + *c, double(tuple.size()));
    rep.pass = s <= rep.bound * (1.0 + 1e-6);
  } else {
    rep.bound = kNaN;
    rep.pass = std::isfinite(s);
  }
  return rep;
}

ConditionReport check_bvc(const SpaceSpec& spec, const AnalyticFunction& f,
                          const std::vector<double>& radii) {
  std::ostringstream grid;
  grid << "profile radii";
  for (const double r : radii) grid << ' ' << r;
  grid << " x " << boundary_points << " angles; interior " << interior_radii << "x"
       << interior_angles << " polar grid to " << radii.back();
  auto rep = start(spec, "bvc", grid.str());
  rep.bound = 0.05;

  const auto profile = bvc_profile(spec, f, radii, boundary_points);
  std::vector<double> inner(interior_radii);
  for (int i = 0; i < interior_radii; ++i) inner[std::size_t(i)] = radii.back() * i / (interior_radii - 1);
  double interior = 0.0;
  for (const auto& p : bvc_profile(spec, f, inner, interior_angles)) interior = std::max(interior, p.sup);

  std::size_t peak = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    rep.measured.emplace_back(label("profile", profile[i].radius), profile[i].sup);
    if (profile[i].sup > profile[peak].sup) peak = i;
    interior = std::max(interior, profile[i].sup);
  }
  bool decreasing = true;
  for (std::size_t i = peak + 1; i < profile.size(); ++i) {
    if (!(profile[i].sup < profile[i - 1].sup)) decreasing = false;
  }
  const double ratio = interior > 0.0 ? profile.back().sup / interior : 0.0;
  rep.measured.emplace_back("interior_max", interior);
  rep.measured.emplace_back("outer_over_interior", ratio);
  rep.measured.emplace_back("decreasing_beyond_peak", decreasing ? 1.0 : 0.0);
  rep.pass = decreasing && ratio <= rep.bound;
  return rep;
}

ConditionReport check_beta_gt1(double beta, std::size_t degree) {
  if (!(beta > 1.0)) throw Error(ErrorKind::domain, "check_beta_gt1 needs beta > 1");
  SpaceOptions opts;
  opts.degree = degree;
  const auto spec = SpaceSpec::weighted_hardy(beta, opts);
  auto rep = start(spec, "beta_gt1", "|a| = 0.9999 and 0.99999 against partial sum to N=" +
                                         std::to_string(degree));
  rep.bound = 0.01;
  double partial = 0.0;
  for (std::size_t k = degree + 1; k-- > 0;) partial += std::pow(1.0 + double(k), -beta);
  const double k1 = kernel_norm_squared(spec, 0.9999);
  const double k2 = kernel_norm_squared(spec, 0.99999);
  const double rel = std::abs(k1 - partial) / partial;
  rep.measured.emplace_back("K(r=0.9999)", k1);
  rep.measured.emplace_back("K(r=0.99999)", k2);
  rep.measured.emplace_back("partial_sum", partial);
  rep.measured.emplace_back("rel_difference", rel);
  rep.pass = std::isfinite(k1) && std::isfinite(k2) && rel <= rep.bound;
  return rep;
}

ConditionReport check_zero_space_factorization(const SpaceSpec& spec, const ParamTuple& zeros,
                                               Complex w) {
  if (spec.family() != Family::hardy) {
    throw Error(ErrorKind::unsupported_space, "zero-space factorization is checked on hardy only");
  }
  std::ostringstream grid;
  grid << "coefficients to N=" << spec.degree() << ", |Z|=" << zeros.size() << ", w=(" << w.real()
       << "," << w.imag() << ")";
  auto rep = start(spec, "zero_space_factorization", grid.str());
  rep.bound = 1e-9;
  const auto kw = kernel(spec, w);
  const auto kz = zero_space_kernel(spec, zeros, w);
  const BlaschkeProduct phi(zeros);
  const auto rhs = std::conj(evaluate_blaschke(phi, w)) * multiply_blaschke(kw, phi);
  const double nkw = norm(kw, spec);
  const double residual = norm(kz - rhs, spec) / nkw;
  const double nkz = norm(kz, spec);
  rep.measured.emplace_back("relative_residual", residual);
  rep.measured.emplace_back("norm_K_Z", nkz);
  rep.measured.emplace_back("norm_K_w", nkw);
  rep.pass = residual <= rep.bound && nkz <= nkw * (1.0 + 1e-12);
  return rep;
}

ConditionReport check_stochastic_decay(const Ensemble& e, const ParamTuple& prefix, double radius) {
  const auto& base = e.space();
  if (!(radius > 0.0 && radius < 1.0)) throw Error(ErrorKind::domain, "decay radius must lie in (0, 1)");
  // Enlarge the truncation so that kernels on |a| = radius are resolved.
  SpaceOptions opts = base.options();
  opts.r_max = std::max(radius, base.r_max());
  opts.degree = std::max(base.degree(),
                         required_degree(base.family(), base.param(), opts.r_max, opts.tol_trunc));
  const SpaceSpec spec(base.family(), base.param(), opts);

  std::ostringstream grid;
  grid << boundary_points << " angles at r=" << radius << "; interior " << interior_radii << "x"
       << interior_angles << " polar grid below it; N=" << spec.degree();
  auto rep = start(spec, "stochastic_decay", grid.str());
  rep.bound = 0.05;

  const auto system = gram_schmidt(spec, prefix);
  std::vector<AnalyticFunction> rem;
  for (const auto& f : e.realizations()) rem.push_back(project(f.resized(spec.degree()), system).remainder);

  auto increment = [&](Complex a) {
    std::vector<Complex> ext(prefix.points().begin(), prefix.points().end());
    ext.push_back(a);
    const ParamTuple t(std::move(ext), prefix.eps_merge(), 0.5 * (1.0 - radius));
    const std::size_t l = t.size() - 1;
    auto v = multiple_kernel(spec, t[l], t.multiplicity(l));
    const double vn = norm(v, spec);
    const auto r = system.orthogonalize(std::move(v));
    const double rn2 = norm_squared(r, spec);
    if (!(rn2 > 1e-20 * vn * vn)) return 0.0;
    double g = 0.0;
    for (std::size_t i = 0; i < rem.size(); ++i) {
      g += e.weights()[i] * std::norm(inner_product(rem[i], r, spec));
    }
    return g / rn2;
  };

  std::vector<Complex> pts = circle(radius, boundary_points);
  const std::size_t outer = pts.size();
  for (int i = 0; i < interior_radii; ++i) {
    const auto ring = circle(radius * i / interior_radii, i == 0 ? 1 : interior_angles);
    pts.insert(pts.end(), ring.begin(), ring.end());
  }
  std::vector<double> gain(pts.size());
  detail::parallel_for(pts.size(), [&](std::size_t p) { gain[p] = increment(pts[p]); });

  const double edge = *std::max_element(gain.begin(), gain.begin() + std::ptrdiff_t(outer));
  const double interior = *std::max_element(gain.begin() + std::ptrdiff_t(outer), gain.end());
  const double ratio = interior > 0.0 ? edge / interior : 0.0;
  rep.measured.emplace_back("edge_increment", edge);
  rep.measured.emplace_back("interior_max", interior);
  rep.measured.emplace_back("edge_over_interior", ratio);
  rep.pass = ratio <= rep.bound;
  return rep;
}

std::vector<ConditionReport> verify_space(const SpaceSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto random_point = [&](double rmax) {
    return std::polar(rmax * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
  };
  auto random_polynomial = [&](std::size_t deg) {
    AnalyticFunction f(spec.degree());
    for (std::size_t k = 0; k <= std::min(deg, spec.degree()); ++k) f[k] = {normal(rng), normal(rng)};
    return f;
  };

  std::vector<ConditionReport> out;
  out.push_back(check_infinite_norm(spec));
  out.push_back(estimate_CH(spec));

  const Complex a0 = random_point(0.9), a1 = random_point(0.9);
  out.push_back(check_zero_property(spec, random_polynomial(12), ParamTuple({a0, a1, a0})));

  out.push_back(check_reduced_bound(
      spec, random_polynomial(10),
      ParamTuple({random_point(0.9), random_point(0.9), random_point(0.9)})));

  const bool bounded_kernel = spec.family() == Family::weighted_hardy && spec.param() > 1.0;
  if (bounded_kernel) {
    out.push_back(check_beta_gt1(spec.param(), spec.degree()));
  } else {
    AnalyticFunction one(spec.degree());
    one[0] = 1.0;
    out.push_back(check_bvc(spec, one));
  }
  if (spec.family() == Family::hardy) {
    out.push_back(check_zero_space_factorization(spec, ParamTuple({0.3, 0.3}), 0.5));
  }
  return out;
}

}  // namespace rkhs
