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

#ifndef WARPBO_BO_ENGINE_HPP_
#define WARPBO_BO_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "warpbo/acquisition.hpp"
#include "warpbo/gp.hpp"
#include "warpbo/slice_sampler.hpp"

namespace warpbo {

struct DimSpec {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  bool log_scale = false;
};

struct SearchSpace {
  std::vector<DimSpec> dims;
  std::vector<std::string> tasks{"default"};

  std::size_t dim() const { return dims.size(); }
  std::size_t num_tasks() const { return tasks.size(); }
  std::size_t task_index(const std::string& name) const;
  void validate() const;
};

// Affine (or log-affine) projection of a raw point onto the unit hypercube
// and back. Throws std::out_of_range for points outside the bounds.
std::vector<double> normalize(const SearchSpace& space, std::span<const double> raw);
std::vector<double> denormalize(const SearchSpace& space, std::span<const double> unit);

struct WarpingConfig {
  bool enabled = true;
  std::string preset = "default";
  std::vector<WarpingPrior> per_dim;  // optional per-dimension override

  std::vector<WarpingPrior> resolve(std::size_t dim) const;
};

struct AcquisitionConfig {
  std::size_t budget_per_dim = 1000;
};

struct EngineConfig {
  KernelFamily kernel_family = KernelFamily::kMatern52;
  WarpingConfig warping;
  SamplerConfig sampler;          // seed field unused; streams derive from the state
  int resample_burn_in = 10;      // burn-in between iterations (warm-started chain)
  AcquisitionConfig acquisition;
  int init_count = 2;

  void validate() const;
};

struct Observation {
  std::size_t task = 0;
  std::vector<double> x;  // raw coordinates
  double y = 0.0;
};

// Complete, serializable experiment: search space, configuration, history,
// last retained hyperparameter samples, and the seed every stochastic
// decision derives from.
struct ExperimentState {
  SearchSpace space;
  EngineConfig config;
  std::uint64_t seed = 0;
  std::vector<Observation> observations;
  std::vector<HyperState> sampler_state;
  // History fingerprint the cached sampler_state was computed at; suggest
  // reuses the cache when it still matches, so a repeated call on an
  // unchanged state returns the same point.
  std::uint64_t sampler_counter = 0;
  std::uint64_t iteration = 0;
  std::uint64_t failed_attempts = 0;

  std::size_t count_on_task(std::size_t task) const;
  // Lowest observed value on a task; empty if none.
  std::optional<double> incumbent(std::size_t task) const;
  // History as normalized training data.
  ObservationSet to_observation_set() const;
};

ExperimentState make_experiment(SearchSpace space, EngineConfig config, std::uint64_t seed);

// Next point to query on a task (raw coordinates). Quasi-random during the
// initialization phase, MCMC-averaged EI afterwards. Updates the cached
// sampler state; a repeated call on the same state returns the same point.
std::vector<double> suggest(ExperimentState& state, const std::string& task);

// Appends an observation; a pure transition returning the new state.
// Rejects non-finite values and out-of-bounds points.
ExperimentState observe(ExperimentState state, const std::string& task,
                        std::span<const double> raw, double y);

struct TraceRow {
  std::uint64_t iteration = 0;
  std::string task;
  std::vector<double> x;
  double y = 0.0;
  double best = 0.0;
};

struct RunResult {
  ExperimentState state;
  std::vector<TraceRow> trace;
  std::vector<std::string> warnings;
};

using EngineObjective =
    std::function<double(const std::string& task, std::span<const double> raw)>;

// Drives suggest -> evaluate -> observe until `max_evals` total evaluations
// on the target task (counting pre-existing ones). A failing objective is
// retried once, then the attempt is logged and skipped.
RunResult run_loop(ExperimentState state, const EngineObjective& objective,
                   std::size_t max_evals, const std::string& task);

// Pointwise mean/sd of the warp curves over a set of hyperparameter
// samples, per task and dimension, on a uniform grid over [0, 1].
struct WarpingCurves {
  std::vector<double> grid;
  // task-major, then dimension: curves[t * dim + d]
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> sd;
  std::size_t dim = 0;
  std::size_t num_tasks = 0;
};

WarpingCurves mean_warping_export(std::span<const HyperState> samples, std::size_t grid_size);

}  // namespace warpbo

#endif  // WARPBO_BO_ENGINE_HPP_
