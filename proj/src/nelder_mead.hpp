#pragma once

#include <functional>
#include <vector>

namespace rkhs::detail {

struct NelderMeadOptions {
  double initial_step = 0.05;
  double ftol = 1e-12;   // relative spread of vertex values
  double atol = 1e-30;   // absolute floor on the spread
  double xtol = 1e-10;   // simplex diameter
  int max_evals = 6000;
  int restarts = 3;
  double probe_step = 1e-6;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// The objective may move its argument onto the feasible set (projection);
/// the simplex then stores the projected point.
using Objective = std::function<double(std::vector<double>&)>;

/// Nelder-Mead with restarts from the best vertex, followed by an axis probe
/// at +-probe_step; a successful probe resumes the search from the probe point.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options);

}  // namespace rkhs::detail
