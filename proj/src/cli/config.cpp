#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rkhs/cli.hpp"

namespace rkhs::cli {

using json = nlohmann::json;

const char* to_string(Task task) noexcept {
  switch (task) {
    case Task::afd: return "afd";
    case Task::nbest: return "nbest";
    case Task::stochastic: return "stochastic";
    case Task::verify: return "verify";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view name) noexcept {
  for (const Task t : {Task::afd, Task::nbest, Task::stochastic, Task::verify}) {
    if (name == to_string(t)) return t;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::parse, (path.empty() ? "/" : path) + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) {
  // JSON pointer escaping
  std::string k;
  for (const char c : key) {
    if (c == '~') k += "~0";
    else if (c == '/') k += "~1";
    else k += c;
  }
  return path + "/" + k;
}

std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items()) {
    if (!keys.count(k)) fail(child(path, k), "unknown field");
  }
}

double real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(path, "expected a finite number");
  return x;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) fail(path, "expected a non-negative integer");
  fail(path, "expected an integer");
}

Complex complex_pair(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected a complex number as [re, im]");
  return {real(j[0], child(path, 0)), real(j[1], child(path, 1))};
}

std::vector<Complex> complex_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [re, im] pairs");
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_pair(j[i], child(path, i)));
  return out;
}

std::vector<KernelTerm> kernel_terms(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of kernel terms");
  std::vector<KernelTerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = child(path, i);
    expect_object(j[i], p, {"a", "c", "order"});
    if (!j[i].contains("a")) fail(child(p, "a"), "missing required field");
    KernelTerm t;
    t.a = complex_pair(j[i]["a"], child(p, "a"));
    if (j[i].contains("c")) t.c = complex_pair(j[i]["c"], child(p, "c"));
    if (j[i].contains("order")) {
      const auto o = integer(j[i]["order"], child(p, "order"));
      if (o < 1) fail(child(p, "order"), "kernel order must be >= 1");
      t.order = int(o);
    }
    out.push_back(t);
  }
  return out;
}

void parse_space(const json& j, TaskConfig& c) {
  const std::string path = "/space";
  expect_object(j, path, {"family", "param", "degree", "r_max", "tol_trunc"});
  if (!j.contains("family")) fail(path + "/family", "missing required field");
  if (!j["family"].is_string()) fail(path + "/family", "expected a string");
  const auto name = j["family"].get<std::string>();
  if (name == "hardy") c.family = Family::hardy;
  else if (name == "bergman") c.family = Family::bergman;
  else if (name == "weighted_hardy") c.family = Family::weighted_hardy;
  else fail(path + "/family", "unknown family '" + name + "' (hardy, bergman, weighted_hardy)");

  if (j.contains("param")) c.param = real(j["param"], path + "/param");
  if (c.family == Family::bergman && !(c.param > -1.0)) {
    fail(path + "/param", "bergman alpha must exceed -1");
  }
  if (j.contains("degree")) {
    const auto d = integer(j["degree"], path + "/degree");
    if (d < 1) fail(path + "/degree", "degree must be >= 1");
    c.space.degree = std::size_t(d);
  }
  if (j.contains("r_max")) c.space.r_max = real(j["r_max"], path + "/r_max");
  if (j.contains("tol_trunc")) c.space.tol_trunc = real(j["tol_trunc"], path + "/tol_trunc");
}

void parse_random(const json& j, const std::string& path, RandomSignal& r) {
  expect_object(j, path, {"kind", "gamma", "M", "seed", "kernels", "random_scale"});
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) fail(path + "/kind", "expected a string");
    const auto k = j["kind"].get<std::string>();
    if (k == "kernel_mix") r.kind = EnsembleKind::kernel_mix;
    else if (k == "decaying_gaussian") r.kind = EnsembleKind::decaying_gaussian;
    else fail(path + "/kind", "unknown kind '" + k + "' (kernel_mix, decaying_gaussian)");
  }
  if (j.contains("gamma")) r.gamma = real(j["gamma"], path + "/gamma");
  if (j.contains("M")) {
    const auto m = integer(j["M"], path + "/M");
    if (m < 1) fail(path + "/M", "ensemble size must be >= 1");
    r.count = int(m);
  }
  if (j.contains("seed")) r.seed = unsigned_integer(j["seed"], path + "/seed");
  if (j.contains("random_scale")) {
    if (!j["random_scale"].is_boolean()) fail(path + "/random_scale", "expected a boolean");
    r.random_scale = j["random_scale"].get<bool>();
  }
  if (j.contains("kernels")) r.kernels = kernel_terms(j["kernels"], path + "/kernels");
  if (r.kind == EnsembleKind::kernel_mix && r.kernels.empty()) {
    fail(path + "/kernels", "kernel_mix ensembles need a kernels list");
  }
}

void parse_signal(const json& j, TaskConfig& c) {
  const std::string path = "/signal";
  expect_object(j, path, {"coefficients", "kernel_mix", "random", "realizations", "weights"});
  int forms = 0;
  for (const char* k : {"coefficients", "kernel_mix", "random", "realizations"}) forms += j.contains(k);
  if (forms != 1) {
    fail(path, "expected exactly one of coefficients, kernel_mix, random, realizations");
  }
  auto& s = c.signal;
  if (j.contains("weights") && !j.contains("realizations")) {
    fail(path + "/weights", "weights are only allowed with realizations");
  }
  if (j.contains("coefficients")) {
    s.kind = SignalKind::coefficients;
    s.coefficients = complex_list(j["coefficients"], path + "/coefficients");
    if (s.coefficients.empty()) fail(path + "/coefficients", "expected at least one coefficient");
  } else if (j.contains("kernel_mix")) {
    s.kind = SignalKind::kernel_mix;
    s.kernels = kernel_terms(j["kernel_mix"], path + "/kernel_mix");
  } else if (j.contains("random")) {
    s.kind = SignalKind::random;
    parse_random(j["random"], path + "/random", s.random);
  } else {
    s.kind = SignalKind::realizations;
    const auto& r = j["realizations"];
    if (!r.is_array() || r.empty()) fail(path + "/realizations", "expected a non-empty array");
    for (std::size_t i = 0; i < r.size(); ++i) {
      s.realizations.push_back(complex_list(r[i], child(path + "/realizations", i)));
    }
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      if (!w.is_array()) fail(path + "/weights", "expected an array of numbers");
      for (std::size_t i = 0; i < w.size(); ++i) s.weights.push_back(real(w[i], child(path + "/weights", i)));
    }
  }
}

void parse_optimizer(const json& j, OptimizerConfig& o) {
  const std::string path = "/optimizer";
  expect_object(j, path, {"delta", "grid_density", "multistart", "ftol", "xtol", "max_iter",
                          "fd_step", "seed", "eps_merge"});
  if (j.contains("delta")) o.delta = real(j["delta"], path + "/delta");
  if (j.contains("grid_density")) o.grid_density = int(integer(j["grid_density"], path + "/grid_density"));
  if (j.contains("multistart")) o.multistart = int(integer(j["multistart"], path + "/multistart"));
  if (j.contains("ftol")) o.ftol = real(j["ftol"], path + "/ftol");
  if (j.contains("xtol")) o.xtol = real(j["xtol"], path + "/xtol");
  if (j.contains("max_iter")) o.max_iter = int(integer(j["max_iter"], path + "/max_iter"));
  if (j.contains("fd_step")) o.fd_step = real(j["fd_step"], path + "/fd_step");
  if (j.contains("seed")) o.seed = unsigned_integer(j["seed"], path + "/seed");
  if (j.contains("eps_merge")) o.eps_merge = real(j["eps_merge"], path + "/eps_merge");
}

void parse_output(const json& j, OutputPaths& out) {
  const std::string path = "/output";
  expect_object(j, path, {"result", "decay", "report"});
  auto str = [&](const char* key, std::string& dst) {
    if (!j.contains(key)) return;
    if (!j[key].is_string() || j[key].get<std::string>().empty()) {
      fail(child(path, key), "expected a non-empty file name");
    }
    dst = j[key].get<std::string>();
  };
  str("result", out.result);
  str("decay", out.decay);
  str("report", out.report);
}

void check_point(Complex a, const SpaceSpec& spec, const std::string& path) {
  if (!(std::abs(a) < 1.0)) fail(path, "parameter must lie in the open unit disc");
  if (std::abs(a) > spec.r_max()) {
    std::ostringstream os;
    os << "parameter modulus " << std::abs(a) << " exceeds the certified radius r_max=" << spec.r_max()
       << " (raise space.r_max and space.degree)";
    fail(path, os.str());
  }
}

void check_terms(const std::vector<KernelTerm>& terms, const SpaceSpec& spec, const std::string& path) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    check_point(terms[i].a, spec, child(path, i) + "/a");
    if (std::size_t(terms[i].order) > spec.degree()) {
      fail(child(path, i) + "/order", "kernel order exceeds the truncation degree");
    }
  }
}

}  // namespace

TaskConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  TaskConfig c;
  expect_object(j, "", {"space", "signal", "task", "n", "n_max", "optimizer", "output"});
  if (!j.contains("space")) fail("/space", "missing required field");
  parse_space(j["space"], c);
  if (j.contains("signal")) parse_signal(j["signal"], c);
  if (j.contains("task")) {
    if (!j["task"].is_string()) fail("/task", "expected a string");
    c.task = parse_task(j["task"].get<std::string>());
    if (!c.task) fail("/task", "unknown task (afd, nbest, stochastic, verify)");
  }
  if (j.contains("n")) {
    const auto n = integer(j["n"], "/n");
    if (n < 0) fail("/n", "n must be >= 0");
    c.n = int(n);
  }
  if (j.contains("n_max")) {
    const auto n = integer(j["n_max"], "/n_max");
    if (n < 1) fail("/n_max", "n_max must be >= 1");
    c.n_max = int(n);
  }
  if (j.contains("optimizer")) parse_optimizer(j["optimizer"], c.optimizer);
  if (j.contains("output")) parse_output(j["output"], c.output);

  // Cross-field validation against the constructed space.
  std::optional<SpaceSpec> spec;
  try {
    spec.emplace(c.spec());
  } catch (const Error& e) {
    fail("/space", e.what());
  }
  try {
    c.optimizer.validate(*spec);
  } catch (const Error& e) {
    fail("/optimizer", e.what());
  }
  const auto& s = c.signal;
  if (s.kind == SignalKind::coefficients && s.coefficients.size() > spec->size()) {
    fail("/signal/coefficients", std::to_string(s.coefficients.size()) +
                                     " coefficients exceed degree " + std::to_string(spec->degree()));
  }
  if (s.kind == SignalKind::realizations) {
    for (std::size_t i = 0; i < s.realizations.size(); ++i) {
      if (s.realizations[i].size() > spec->size()) {
        fail(child("/signal/realizations", i), "more coefficients than the truncation degree allows");
      }
    }
    if (!s.weights.empty() && s.weights.size() != s.realizations.size()) {
      fail("/signal/weights", "one weight per realization expected");
    }
  }
  if (s.kind == SignalKind::kernel_mix) check_terms(s.kernels, *spec, "/signal/kernel_mix");
  if (s.kind == SignalKind::random) check_terms(s.random.kernels, *spec, "/signal/random/kernels");
  return c;
}

TaskConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rkhs::cli
