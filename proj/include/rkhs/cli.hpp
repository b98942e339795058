#pragma once

// Batch front end: task configs in, result JSON / decay CSV / verify report out.
// File formats are described in docs/formats.md.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rkhs/approx.hpp"
#include "rkhs/stochastic.hpp"
#include "rkhs/verify.hpp"

namespace rkhs::cli {

enum class Task { afd, nbest, stochastic, verify };

const char* to_string(Task task) noexcept;
std::optional<Task> parse_task(std::string_view name) noexcept;

enum class SignalKind { none, coefficients, kernel_mix, random, realizations };

struct RandomSignal {
  EnsembleKind kind = EnsembleKind::kernel_mix;
  double gamma = 2.0;
  int count = 1;  // "M"
  std::uint64_t seed = 0;
  std::vector<KernelTerm> kernels;
  bool random_scale = true;
};

struct SignalConfig {
  SignalKind kind = SignalKind::none;
  std::vector<Complex> coefficients;
  std::vector<KernelTerm> kernels;
  RandomSignal random;
  std::vector<std::vector<Complex>> realizations;
  std::vector<double> weights;  // empty means uniform
};

struct OutputPaths {
  std::string result = "result.json";
  std::string decay = "decay.csv";
  std::string report = "report.json";
};

struct TaskConfig {
  Family family = Family::hardy;
  double param = 0.0;
  SpaceOptions space;
  SignalConfig signal;
  std::optional<Task> task;
  int n = 1;
  std::optional<int> n_max;
  OptimizerConfig optimizer;
  OutputPaths output;

  SpaceSpec spec() const { return SpaceSpec(family, param, space); }
};

/// Throws Error(ErrorKind::parse) whose message starts with the JSON pointer
/// of the offending value.
TaskConfig parse_config(std::string_view text);
TaskConfig load_config(const std::filesystem::path& path);

struct RunOptions {
  Task task = Task::nbest;
  std::filesystem::path out_dir = ".";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;  // overrides optimizer.seed and random.seed
};

/// Signals for the configured space: one entry for coefficients/kernel_mix,
/// M entries for random or realization lists.
Ensemble build_ensemble(const TaskConfig& config);

/// Returns 0 on success, 2 when a verify check fails, 1 on error (reported
/// on `err`).
int run_task(TaskConfig config, const RunOptions& options, std::ostream& out, std::ostream& err);

// Serializers, exposed for tests.
std::string result_json(const TaskConfig& config, const ApproximationResult& result,
                        const std::vector<ApproximationResult>& sweep = {});
std::string stochastic_json(const TaskConfig& config, const StochasticResult& result);
std::string report_json(const TaskConfig& config, const std::vector<ConditionReport>& reports);
/// Header n,residual,energy; row n=0 is the zero approximation.
std::string decay_csv(double norm, const std::vector<ApproximationResult>& sweep);

}  // namespace rkhs::cli
