#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "rkhs/cli.hpp"

namespace rkhs::cli {

using ojson = nlohmann::ordered_json;

namespace {

ojson pair(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson pairs(std::span<const Complex> zs) {
  ojson a = ojson::array();
  for (const auto z : zs) a.push_back(pair(z));
  return a;
}

ojson space_json(const TaskConfig& c) {
  ojson s;
  s["family"] = to_string(c.family);
  s["param"] = c.family == Family::hardy ? 0.0 : c.param;
  s["degree"] = c.space.degree;
  s["r_max"] = c.space.r_max;
  s["tol_trunc"] = c.space.tol_trunc;
  return s;
}

ojson tuple_json(const ParamTuple& t) {
  ojson m = ojson::array();
  for (const int k : t.multiplicities()) m.push_back(k);
  return m;
}

ojson starts_json(const std::vector<StartReport>& starts) {
  ojson a = ojson::array();
  for (const auto& s : starts) {
    ojson o;
    o["origin"] = s.origin;
    o["objective"] = s.objective;
    o["evaluations"] = s.evaluations;
    o["converged"] = s.converged;
    a.push_back(std::move(o));
  }
  return a;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorKind::io, "write failed for " + path.string());
}

AnalyticFunction padded(const std::vector<Complex>& c, const SpaceSpec& spec) {
  std::vector<Complex> v(c);
  v.resize(spec.size());
  return AnalyticFunction(std::move(v));
}

}  // namespace

Ensemble build_ensemble(const TaskConfig& config) {
  const auto spec = config.spec();
  const auto& s = config.signal;
  switch (s.kind) {
    case SignalKind::none:
      throw Error(ErrorKind::domain, "this task needs a signal section");
    case SignalKind::coefficients:
      return Ensemble(spec, {padded(s.coefficients, spec)});
    case SignalKind::kernel_mix:
      return Ensemble(spec, {kernel_mix(spec, s.kernels)});
    case SignalKind::random: {
      EnsembleParams p;
      p.kernels = s.random.kernels;
      p.random_scale = s.random.random_scale;
      p.gamma = s.random.gamma;
      return generate_ensemble(spec, s.random.kind, p, s.random.count, s.random.seed);
    }
    case SignalKind::realizations: {
      std::vector<AnalyticFunction> fs;
      for (const auto& r : s.realizations) fs.push_back(padded(r, spec));
      if (s.weights.empty()) return Ensemble(spec, std::move(fs));
      return Ensemble(spec, std::move(fs), s.weights);
    }
  }
  throw Error(ErrorKind::domain, "unknown signal kind");
}

std::string result_json(const TaskConfig& config, const ApproximationResult& r,
                        const std::vector<ApproximationResult>& sweep) {
  ojson j;
  j["task"] = to_string(r.method);
  j["space"] = space_json(config);
  j["n"] = sweep.empty() ? config.n : int(sweep.size());
  j["parameters"] = pairs(r.parameters.points());
  j["multiplicities"] = tuple_json(r.parameters);
  j["coefficients"] = pairs(r.coefficients);
  j["energy"] = r.energy;
  j["residual"] = r.residual;
  j["norm"] = r.norm;
  j["relative_residual"] = r.norm > 0.0 ? r.residual / r.norm : 0.0;
  j["degraded"] = r.degraded;
  j["trace"] = r.trace;
  j["starts"] = starts_json(r.starts);
  if (!sweep.empty()) {
    ojson a = ojson::array();
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      ojson o;
      o["n"] = i + 1;
      o["residual"] = sweep[i].residual;
      o["energy"] = sweep[i].energy;
      o["parameters"] = pairs(sweep[i].parameters.points());
      a.push_back(std::move(o));
    }
    j["sweep"] = std::move(a);
  }
  return j.dump(2) + "\n";
}

std::string stochastic_json(const TaskConfig& config, const StochasticResult& r) {
  ojson j;
  j["task"] = "stochastic";
  j["space"] = space_json(config);
  j["n"] = config.n;
  j["realizations"] = r.coefficients.size();
  j["parameters"] = pairs(r.parameters.points());
  j["multiplicities"] = tuple_json(r.parameters);
  ojson coeffs = ojson::array();
  for (const auto& row : r.coefficients) coeffs.push_back(pairs(row));
  j["coefficients"] = std::move(coeffs);
  j["expected_energy"] = r.expected_energy;
  j["expected_residual"] = r.expected_residual;
  j["bochner_norm"] = r.bochner_norm;
  j["relative_residual"] = r.bochner_norm > 0.0 ? r.expected_residual / r.bochner_norm : 0.0;
  j["degraded"] = r.degraded;
  j["starts"] = starts_json(r.starts);
  return j.dump(2) + "\n";
}

std::string report_json(const TaskConfig& config, const std::vector<ConditionReport>& reports) {
  ojson j;
  j["task"] = "verify";
  j["space"] = space_json(config);
  j["seed"] = config.optimizer.seed;
  bool all = true;
  ojson checks = ojson::array();
  for (const auto& r : reports) {
    ojson o;
    o["check"] = r.check;
    o["space"] = r.space;
    o["grid"] = r.grid;
    ojson m;
    for (const auto& [k, v] : r.measured) m[k] = v;
    o["measured"] = std::move(m);
    o["bound"] = std::isfinite(r.bound) ? ojson(r.bound) : ojson(nullptr);
    o["pass"] = r.pass;
    all = all && r.pass;
    checks.push_back(std::move(o));
  }
  j["pass"] = all;
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string decay_csv(double norm, const std::vector<ApproximationResult>& sweep) {
  std::string s = "n,residual,energy\n";
  s += "0," + num(norm) + "," + num(0.0) + "\n";
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    s += std::to_string(i + 1) + "," + num(sweep[i].residual) + "," + num(sweep[i].energy) + "\n";
  }
  return s;
}

int run_task(TaskConfig config, const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (config.task && *config.task != options.task) {
      throw Error(ErrorKind::parse, std::string("/task: config declares '") + to_string(*config.task) +
                                        "' but the subcommand is '" + to_string(options.task) + "'");
    }
    if (options.seed) {
      config.optimizer.seed = *options.seed;
      config.signal.random.seed = *options.seed;
    }
    if (options.threads) config.optimizer.threads = *options.threads;
    std::filesystem::create_directories(options.out_dir);
    const auto spec = config.spec();
    const auto& opt = config.optimizer;

    switch (options.task) {
      case Task::afd:
      case Task::nbest: {
        const auto e = build_ensemble(config);
        if (e.size() != 1) {
          throw Error(ErrorKind::domain, "afd and nbest take a single signal; use the stochastic task for ensembles");
        }
        const auto& f = e.realizations().front();
        const bool greedy = options.task == Task::afd;
        std::vector<ApproximationResult> sweep;
        ApproximationResult result;
        if (config.n_max) {
          if (greedy) {
            for (int n = 1; n <= *config.n_max; ++n) sweep.push_back(afd_greedy(spec, f, n, opt));
          } else {
            sweep = nbest_sweep(spec, f, *config.n_max, opt);
          }
          result = sweep.back();
        } else {
          result = greedy ? afd_greedy(spec, f, config.n, opt) : nbest(spec, f, config.n, opt);
        }
        const auto path = options.out_dir / config.output.result;
        write_file(path, result_json(config, result, sweep));
        out << to_string(options.task) << ": n=" << result.parameters.size()
            << " residual=" << num(result.residual) << " relative="
            << num(result.norm > 0.0 ? result.residual / result.norm : 0.0) << " -> " << path.string() << "\n";
        if (config.n_max) {
          const auto dpath = options.out_dir / config.output.decay;
          write_file(dpath, decay_csv(result.norm, sweep));
          out << "decay table -> " << dpath.string() << "\n";
        }
        return 0;
      }
      case Task::stochastic: {
        if (config.n_max) throw Error(ErrorKind::parse, "/n_max: sweeps are supported for afd and nbest only");
        const auto e = build_ensemble(config);
        const auto r = stochastic_nbest(e, config.n, opt);
        const auto path = options.out_dir / config.output.result;
        write_file(path, stochastic_json(config, r));
        out << "stochastic: M=" << e.size() << " n=" << r.parameters.size()
            << " expected_residual=" << num(r.expected_residual) << " -> " << path.string() << "\n";
        return 0;
      }
      case Task::verify: {
        const auto reports = verify_space(spec, opt.seed);
        const auto path = options.out_dir / config.output.report;
        write_file(path, report_json(config, reports));
        bool all = true;
        for (const auto& r : reports) {
          out << (r.pass ? "PASS " : "FAIL ") << r.check << " [" << r.space << "]\n";
          all = all && r.pass;
        }
        out << "report -> " << path.string() << "\n";
        return all ? 0 : 2;
      }
    }
    return 1;
  } catch (const Error& e) {
    err << "error (" << rkhs::to_string(e.kind()) << "): " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace rkhs::cli
