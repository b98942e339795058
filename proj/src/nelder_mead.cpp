#include "nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rkhs::detail {
namespace {

struct Simplex {
  std::vector<std::vector<double>> x;
  std::vector<double> f;
};

double diameter(const Simplex& s) {
  double d = 0.0;
  for (std::size_t i = 1; i < s.x.size(); ++i) {
    for (std::size_t j = 0; j < s.x[i].size(); ++j) {
      d = std::max(d, std::abs(s.x[i][j] - s.x[0][j]));
    }
  }
  return d;
}

// One Nelder-Mead descent from x0. Returns when converged or out of budget.
bool descend(const Objective& objective, std::vector<double>& best_x, double& best_f,
             int& evals, const NelderMeadOptions& opt) {
  const std::size_t dim = best_x.size();
  auto eval = [&](std::vector<double>& x) {
    ++evals;
    return objective(x);
  };

  Simplex s;
  s.x.push_back(best_x);
  s.f.push_back(best_f);
  for (std::size_t i = 0; i < dim; ++i) {
    auto x = best_x;
    x[i] += (x[i] > 0.0 ? -1.0 : 1.0) * opt.initial_step;
    s.f.push_back(eval(x));
    s.x.push_back(std::move(x));
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  bool converged = false;
  while (evals < opt.max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.f[a] < s.f[b]; });
    Simplex sorted;
    for (auto i : order) {
      sorted.x.push_back(std::move(s.x[i]));
      sorted.f.push_back(s.f[i]);
    }
    s = std::move(sorted);

    const double spread = s.f.back() - s.f.front();
    if (spread <= opt.ftol * std::abs(s.f.front()) + opt.atol || diameter(s) <= opt.xtol) {
      converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) centroid[j] += s.x[i][j] / double(dim);
    }
    const auto& worst = s.x[dim];
    for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + (centroid[j] - worst[j]);
    const double fr = eval(trial);

    if (fr < s.f[0]) {
      for (std::size_t j = 0; j < dim; ++j) trial2[j] = centroid[j] + 2.0 * (centroid[j] - worst[j]);
      const double fe = eval(trial2);
      if (fe < fr) {
        s.x[dim] = trial2;
        s.f[dim] = fe;
      } else {
        s.x[dim] = trial;
        s.f[dim] = fr;
      }
      continue;
    }
    if (fr < s.f[dim - 1]) {
      s.x[dim] = trial;
      s.f[dim] = fr;
      continue;
    }
    const bool outside = fr < s.f[dim];
    const auto& anchor = outside ? trial : worst;
    for (std::size_t j = 0; j < dim; ++j) trial2[j] = centroid[j] + 0.5 * (anchor[j] - centroid[j]);
    const double fc = eval(trial2);
    if (fc < std::min(fr, s.f[dim])) {
      s.x[dim] = trial2;
      s.f[dim] = fc;
      continue;
    }
    // shrink towards the best vertex
    for (std::size_t i = 1; i <= dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) s.x[i][j] = s.x[0][j] + 0.5 * (s.x[i][j] - s.x[0][j]);
      s.f[i] = eval(s.x[i]);
    }
  }

  const auto it = std::min_element(s.f.begin(), s.f.end());
  const auto i = std::size_t(it - s.f.begin());
  if (s.f[i] <= best_f) {
    best_f = s.f[i];
    best_x = s.x[i];
  }
  return converged;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options) {
  NelderMeadResult out;
  out.value = objective(x0);
  out.evaluations = 1;
  out.x = std::move(x0);

  auto improved_enough = [&](double before, double after) {
    return before - after > options.ftol * std::abs(before) + options.atol;
  };

  bool converged = false;
  for (int round = 0; round <= options.restarts + 1 && out.evaluations < options.max_evals;
       ++round) {
    const double before = out.value;
    converged = descend(objective, out.x, out.value, out.evaluations, options);
    if (!converged) break;
    if (round > 0 && !improved_enough(before, out.value)) {
      // Restart found nothing new; confirm with an axis probe.
      bool moved = false;
      for (std::size_t j = 0; j < out.x.size() && !moved; ++j) {
        for (const double sign : {1.0, -1.0}) {
          auto x = out.x;
          x[j] += sign * options.probe_step;
          const double v = objective(x);
          ++out.evaluations;
          if (improved_enough(out.value, v)) {
            out.x = std::move(x);
            out.value = v;
            moved = true;
            break;
          }
        }
      }
      if (!moved) break;
      converged = false;
    }
  }
  out.converged = converged;
  return out;
}

}  // namespace rkhs::detail
