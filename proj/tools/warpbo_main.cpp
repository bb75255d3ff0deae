// Copyright 2026 The warpbo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "warpbo/benchmarks.hpp"
#include "warpbo/bo_engine.hpp"
#include "warpbo/state_io.hpp"

namespace {

using nlohmann::json;
using namespace warpbo;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitState = 3;
constexpr int kExitObservation = 4;
constexpr int kExitNothingToExport = 5;

class ObservationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seed precedence: --seed flag, then WARPBO_SEED, then the config value.
std::optional<std::uint64_t> explicit_seed(const std::optional<std::uint64_t>& flag) {
  if (flag.has_value()) return flag;
  if (const char* env = std::getenv("WARPBO_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("WARPBO_SEED is not an unsigned integer");
    }
  }
  return std::nullopt;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t from_config) {
  return explicit_seed(flag).value_or(from_config);
}

json point_to_json(const SearchSpace& space, const std::vector<double>& x) {
  json p;
  for (std::size_t d = 0; d < space.dim(); ++d) p[space.dims[d].name] = x[d];
  return p;
}

std::vector<double> point_from_json(const SearchSpace& space, const json& p) {
  if (!p.is_object()) throw ObservationError("point record must be a JSON object");
  std::vector<double> x(space.dim());
  std::size_t matched = 0;
  for (std::size_t d = 0; d < space.dim(); ++d) {
    if (!p.contains(space.dims[d].name)) {
      throw ObservationError("point record missing coordinate '" + space.dims[d].name + "'");
    }
    if (!p.at(space.dims[d].name).is_number()) {
      throw ObservationError("coordinate '" + space.dims[d].name + "' must be a number");
    }
    x[d] = p.at(space.dims[d].name).get<double>();
    ++matched;
  }
  if (p.size() != matched) throw ObservationError("point record has unknown coordinates");
  return x;
}

std::string trace_to_csv(const SearchSpace& space, const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "iteration,task";
  for (const auto& d : space.dims) out << "," << d.name;
  out << ",y,best\n";
  for (const auto& row : trace) {
    out << row.iteration << "," << row.task;
    for (double v : row.x) out << "," << format_double(v);
    out << "," << format_double(row.y) << "," << format_double(row.best) << "\n";
  }
  return out.str();
}

// Runs the external objective: one JSON record on stdin, one real on
// stdout, exit code zero. Throws on any protocol violation.
double run_objective_subprocess(const std::vector<std::string>& command,
                                const std::string& request_line) {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw std::runtime_error("pipe() failed");
  }
  const pid_t pid = fork();
  if (pid < 0) throw std::runtime_error("fork() failed");
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    std::vector<char*> argv;
    argv.reserve(command.size() + 1);
    for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    std::fprintf(stderr, "exec failed: %s: %s\n", argv[0], std::strerror(errno));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  {
    const std::string payload = request_line + "\n";
    ssize_t off = 0;
    while (off < static_cast<ssize_t>(payload.size())) {
      const ssize_t n = write(in_pipe[1], payload.data() + off, payload.size() - off);
      if (n <= 0) break;
      off += n;
    }
    close(in_pipe[1]);
  }
  std::string output;
  char buf[4096];
  ssize_t n;
  while ((n = read(out_pipe[0], buf, sizeof(buf))) > 0) output.append(buf, n);
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw std::runtime_error("objective command exited with nonzero status");
  }
  std::istringstream iss(output);
  double value;
  if (!(iss >> value) || !std::isfinite(value)) {
    throw std::runtime_error("objective command did not print a finite number");
  }
  return value;
}

ExperimentState state_from_setup(const ExperimentSetup& setup, std::uint64_t seed) {
  return make_experiment(setup.space, setup.config, seed);
}

int cmd_suggest(const std::string& config_path, const std::string& state_path,
                const std::string& task_flag, const std::optional<std::uint64_t>& seed_flag) {
  ExperimentState state = [&] {
    if (std::filesystem::exists(state_path)) return load_state_file(state_path);
    const ExperimentSetup setup = load_config_file(config_path);
    return state_from_setup(setup, resolve_seed(seed_flag, setup.seed));
  }();
  if (const auto seed = explicit_seed(seed_flag); seed.has_value()) state.seed = *seed;
  const std::string task = task_flag.empty() ? state.space.tasks.front() : task_flag;
  const std::vector<double> x = suggest(state, task);
  json record;
  record["task"] = task;
  record["point"] = point_to_json(state.space, x);
  std::cout << record.dump() << "\n";
  save_state_file(state, state_path);
  return kExitOk;
}

int cmd_observe(const std::string& config_path, const std::string& state_path,
                const std::string& task_flag, const std::string& point_text, double value,
                const std::optional<std::uint64_t>& seed_flag) {
  ExperimentState state = [&] {
    if (std::filesystem::exists(state_path)) return load_state_file(state_path);
    if (config_path.empty()) throw StateError("state file not found: " + state_path);
    const ExperimentSetup setup = load_config_file(config_path);
    return state_from_setup(setup, resolve_seed(seed_flag, setup.seed));
  }();
  const std::string task = task_flag.empty() ? state.space.tasks.front() : task_flag;
  json p;
  try {
    p = json::parse(point_text);
  } catch (const json::exception& e) {
    throw ObservationError(std::string("point record is not valid JSON: ") + e.what());
  }
  const std::vector<double> x = point_from_json(state.space, p);
  try {
    state = observe(std::move(state), task, x, value);
  } catch (const std::exception& e) {
    throw ObservationError(e.what());
  }
  save_state_file(state, state_path);
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& state_path,
            const std::string& trace_path, std::size_t max_evals, const std::string& task_flag,
            const std::optional<std::uint64_t>& seed_flag) {
  const ExperimentSetup setup = load_config_file(config_path);
  if (setup.objective.empty()) {
    throw ConfigError("'objective.command' is required for the run command");
  }
  ExperimentState state =
      (!state_path.empty() && std::filesystem::exists(state_path))
          ? load_state_file(state_path)
          : state_from_setup(setup, resolve_seed(seed_flag, setup.seed));
  if (const auto seed = explicit_seed(seed_flag); seed.has_value()) state.seed = *seed;
  const std::string task = task_flag.empty() ? state.space.tasks.front() : task_flag;

  const SearchSpace space = state.space;
  const auto objective = [&](const std::string& task_name,
                             std::span<const double> raw) -> double {
    json req;
    req["task"] = task_name;
    req["params"] = point_to_json(space, std::vector<double>(raw.begin(), raw.end()));
    return run_objective_subprocess(setup.objective.command, req.dump());
  };

  RunResult result = run_loop(std::move(state), objective, max_evals, task);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  if (!trace_path.empty()) {
    atomic_write_file(trace_path, trace_to_csv(result.state.space, result.trace));
  }
  if (!state_path.empty()) save_state_file(result.state, state_path);
  const auto best = result.state.incumbent(result.state.space.task_index(task));
  json summary;
  summary["evaluations"] = result.state.observations.size();
  summary["task"] = task;
  if (best.has_value()) summary["best"] = *best;
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

int cmd_bench(const std::string& name, std::size_t evals, std::size_t repeats,
              const std::string& warping, const std::string& kernel,
              const std::string& out_dir, const std::optional<std::uint64_t>& seed_flag) {
  const BenchmarkSpec* spec = nullptr;
  try {
    spec = &benchmark_by_name(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (warping != "on" && warping != "off") {
    throw ConfigError("--warping must be 'on' or 'off'");
  }
  const std::uint64_t base_seed = resolve_seed(seed_flag, 20140206);

  SearchSpace space;
  space.dims.clear();
  for (std::size_t d = 0; d < spec->bounds.size(); ++d) {
    space.dims.push_back(
        {"x" + std::to_string(d + 1), spec->bounds[d].first, spec->bounds[d].second, false});
  }
  EngineConfig config;
  config.kernel_family = kernel_family_from_name(kernel);
  config.warping.enabled = warping == "on";

  const auto objective = [&](const std::string&, std::span<const double> raw) {
    return spec->fn(raw);
  };

  std::vector<double> per_run_best;
  for (std::size_t r = 0; r < repeats; ++r) {
    ExperimentState state = make_experiment(space, config, base_seed + r);
    RunResult result = run_loop(std::move(state), objective, evals, "default");
    const auto best = result.state.incumbent(0);
    per_run_best.push_back(best.value_or(std::numeric_limits<double>::quiet_NaN()));
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::string path = out_dir + "/" + name + "_warp-" + warping + "_run" +
                               std::to_string(r) + ".csv";
      atomic_write_file(path, trace_to_csv(space, result.trace));
    }
  }

  double mean = 0.0;
  for (double b : per_run_best) mean += b;
  mean /= per_run_best.empty() ? 1.0 : static_cast<double>(per_run_best.size());
  double var = 0.0;
  for (double b : per_run_best) var += (b - mean) * (b - mean);
  var /= per_run_best.empty() ? 1.0 : static_cast<double>(per_run_best.size());

  json summary;
  summary["benchmark"] = name;
  summary["evals"] = evals;
  summary["repeats"] = repeats;
  summary["warping"] = warping;
  summary["kernel"] = kernel;
  summary["seed"] = base_seed;
  summary["mean_best"] = mean;
  summary["sd_best"] = std::sqrt(var);
  summary["per_run_best"] = per_run_best;
  summary["optimum"] = spec->optimum_value;
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

int cmd_export_warpings(const std::string& state_path, const std::string& out_path,
                        std::size_t grid) {
  const ExperimentState state = load_state_file(state_path);
  if (state.sampler_state.empty()) {
    throw ExportError("state has no hyperparameter samples to export");
  }
  const WarpingCurves curves = mean_warping_export(state.sampler_state, grid);
  std::ostringstream out;
  out << "x";
  for (std::size_t t = 0; t < curves.num_tasks; ++t) {
    for (std::size_t d = 0; d < curves.dim; ++d) {
      const std::string col = state.space.tasks[t] + "." + state.space.dims[d].name;
      out << "," << col << ".mean," << col << ".sd";
    }
  }
  out << "\n";
  for (std::size_t g = 0; g < curves.grid.size(); ++g) {
    out << format_double(curves.grid[g]);
    for (std::size_t t = 0; t < curves.num_tasks; ++t) {
      for (std::size_t d = 0; d < curves.dim; ++d) {
        out << "," << format_double(curves.mean[t * curves.dim + d][g]) << ","
            << format_double(curves.sd[t * curves.dim + d][g]);
      }
    }
    out << "\n";
  }
  atomic_write_file(out_path, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian optimization with learned input warping"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag, "Override the experiment seed");

  std::string config_path, state_path, task, point_text, trace_path, out_path, out_dir;
  double value = 0.0;
  std::size_t max_evals = 0, evals = 40, repeats = 10, grid = 101;
  std::string warping = "on";
  std::string kernel = "matern52";
  std::string bench_name;

  CLI::App* suggest_cmd = app.add_subcommand("suggest", "Print the next point to evaluate");
  suggest_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
  suggest_cmd->add_option("--state", state_path, "State file (created if absent)")->required();
  suggest_cmd->add_option("--task", task, "Task name (default: first task)");

  CLI::App* observe_cmd = app.add_subcommand("observe", "Record an observed value");
  observe_cmd->add_option("--config", config_path, "Config used if the state file is absent");
  observe_cmd->add_option("--state", state_path, "State file")->required();
  observe_cmd->add_option("--task", task, "Task name (default: first task)");
  observe_cmd->add_option("--point", point_text, "Point record, e.g. '{\"x1\": 0.5}'")
      ->required();
  observe_cmd->add_option("--value", value, "Observed objective value")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "Drive an external objective command");
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--state", state_path, "State file to resume/persist");
  run_cmd->add_option("--trace", trace_path, "Trace CSV output path");
  run_cmd->add_option("--max-evals", max_evals, "Total evaluation budget")->required();
  run_cmd->add_option("--task", task, "Task name (default: first task)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a registered analytic benchmark");
  bench_cmd->add_option("--benchmark", bench_name, "Benchmark name")->required();
  bench_cmd->add_option("--evals", evals, "Evaluations per run");
  bench_cmd->add_option("--repeats", repeats, "Independent runs (seed = base + index)");
  bench_cmd->add_option("--warping", warping, "Warping 'on' or 'off'");
  bench_cmd->add_option("--kernel", kernel, "Kernel family: matern52 or se");
  bench_cmd->add_option("--out-dir", out_dir, "Directory for per-run trace CSVs");

  CLI::App* export_cmd =
      app.add_subcommand("export-warpings", "Export mean/sd warping curves as CSV");
  export_cmd->add_option("--state", state_path, "State file")->required();
  export_cmd->add_option("--out", out_path, "Output CSV path")->required();
  export_cmd->add_option("--grid", grid, "Grid resolution (rows)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (suggest_cmd->parsed()) return cmd_suggest(config_path, state_path, task, seed_flag);
    if (observe_cmd->parsed()) {
      return cmd_observe(config_path, state_path, task, point_text, value, seed_flag);
    }
    if (run_cmd->parsed()) {
      return cmd_run(config_path, state_path, trace_path, max_evals, task, seed_flag);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(bench_name, evals, repeats, warping, kernel, out_dir, seed_flag);
    }
    if (export_cmd->parsed()) return cmd_export_warpings(state_path, out_path, grid);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const StateError& e) {
    std::cerr << "state error: " << e.what() << "\n";
    return kExitState;
  } catch (const ObservationError& e) {
    std::cerr << "observation error: " << e.what() << "\n";
    return kExitObservation;
  } catch (const ExportError& e) {
    std::cerr << "export error: " << e.what() << "\n";
    return kExitNothingToExport;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
