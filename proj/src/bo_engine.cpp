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

#include "warpbo/bo_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "warpbo/sobol.hpp"

namespace warpbo {
namespace {

// Purpose tags for stream derivation.
constexpr std::uint64_t kStreamSampler = 1;
constexpr std::uint64_t kStreamAcquisition = 2;
constexpr std::uint64_t kStreamDuplicate = 3;

std::uint64_t state_counter(const ExperimentState& state) {
  // Any new observation or failed attempt moves the engine onto fresh
  // streams; identical states keep identical streams.
  return state.observations.size() * 1000003ULL + state.failed_attempts;
}

bool sampler_state_compatible(const ExperimentState& state) {
  if (state.sampler_state.empty()) return false;
  const HyperState& h = state.sampler_state.back();
  if (h.kernel.dim() != state.space.dim()) return false;
  if (h.warpings.size() != state.space.num_tasks()) return false;
  if (state.space.num_tasks() > 1 &&
      (!h.task_cov.has_value() || h.task_cov->num_tasks != state.space.num_tasks())) {
    return false;
  }
  return true;
}

}  // namespace

std::size_t SearchSpace::task_index(const std::string& name) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i] == name) return i;
  }
  throw std::invalid_argument("unknown task: " + name);
}

void SearchSpace::validate() const {
  if (dims.empty()) throw std::invalid_argument("SearchSpace: at least one dimension required");
  if (dims.size() > 64) throw std::invalid_argument("SearchSpace: at most 64 dimensions");
  if (tasks.empty()) throw std::invalid_argument("SearchSpace: at least one task required");
  std::set<std::string> seen;
  for (const auto& d : dims) {
    if (d.name.empty()) throw std::invalid_argument("SearchSpace: dimension names required");
    if (!seen.insert(d.name).second) {
      throw std::invalid_argument("SearchSpace: duplicate dimension name " + d.name);
    }
    if (!(d.lower < d.upper)) {
      throw std::invalid_argument("SearchSpace: lower bound must be below upper for " + d.name);
    }
    if (!std::isfinite(d.lower) || !std::isfinite(d.upper)) {
      throw std::invalid_argument("SearchSpace: bounds must be finite for " + d.name);
    }
    if (d.log_scale && !(d.lower > 0.0)) {
      throw std::invalid_argument("SearchSpace: log-scale dimensions need lower > 0 for " +
                                  d.name);
    }
  }
  std::set<std::string> task_seen;
  for (const auto& t : tasks) {
    if (t.empty()) throw std::invalid_argument("SearchSpace: task names must be nonempty");
    if (!task_seen.insert(t).second) {
      throw std::invalid_argument("SearchSpace: duplicate task name " + t);
    }
  }
}

std::vector<double> normalize(const SearchSpace& space, std::span<const double> raw) {
  if (raw.size() != space.dim()) throw std::invalid_argument("normalize: dimension mismatch");
  std::vector<double> unit(raw.size());
  for (std::size_t d = 0; d < raw.size(); ++d) {
    const DimSpec& spec = space.dims[d];
    if (!(raw[d] >= spec.lower && raw[d] <= spec.upper)) {
      throw std::out_of_range("normalize: coordinate out of bounds for " + spec.name);
    }
    double z;
    if (spec.log_scale) {
      z = (std::log(raw[d]) - std::log(spec.lower)) /
          (std::log(spec.upper) - std::log(spec.lower));
    } else {
      z = (raw[d] - spec.lower) / (spec.upper - spec.lower);
    }
    unit[d] = std::clamp(z, 0.0, 1.0);
  }
  return unit;
}

std::vector<double> denormalize(const SearchSpace& space, std::span<const double> unit) {
  if (unit.size() != space.dim()) {
    throw std::invalid_argument("denormalize: dimension mismatch");
  }
  std::vector<double> raw(unit.size());
  for (std::size_t d = 0; d < unit.size(); ++d) {
    const DimSpec& spec = space.dims[d];
    if (!(unit[d] >= 0.0 && unit[d] <= 1.0)) {
      throw std::out_of_range("denormalize: coordinate outside the unit cube");
    }
    double v;
    if (spec.log_scale) {
      const double ll = std::log(spec.lower);
      v = std::exp(ll + unit[d] * (std::log(spec.upper) - ll));
    } else {
      v = spec.lower + unit[d] * (spec.upper - spec.lower);
    }
    raw[d] = std::clamp(v, spec.lower, spec.upper);
  }
  return raw;
}

std::vector<WarpingPrior> WarpingConfig::resolve(std::size_t dim) const {
  if (!per_dim.empty()) {
    if (per_dim.size() != dim) {
      throw std::invalid_argument("WarpingConfig: per-dimension priors must cover every dim");
    }
    return per_dim;
  }
  return std::vector<WarpingPrior>(dim, prior_preset(preset));
}

void EngineConfig::validate() const {
  sampler.validate();
  if (resample_burn_in < 0) {
    throw std::invalid_argument("EngineConfig: resample_burn_in must be >= 0");
  }
  if (acquisition.budget_per_dim < 1) {
    throw std::invalid_argument("EngineConfig: acquisition budget must be >= 1");
  }
  if (init_count < 1) throw std::invalid_argument("EngineConfig: init_count must be >= 1");
  if (warping.enabled) (void)prior_preset(warping.preset);
  for (const auto& wp : warping.per_dim) {
    if (!(wp.sigma_alpha > 0.0) || !(wp.sigma_beta > 0.0)) {
      throw std::invalid_argument("EngineConfig: warping prior sigmas must be > 0");
    }
  }
}

std::size_t ExperimentState::count_on_task(std::size_t task) const {
  std::size_t n = 0;
  for (const auto& o : observations) n += o.task == task ? 1 : 0;
  return n;
}

std::optional<double> ExperimentState::incumbent(std::size_t task) const {
  std::optional<double> best;
  for (const auto& o : observations) {
    if (o.task != task) continue;
    if (!best.has_value() || o.y < *best) best = o.y;
  }
  return best;
}

ObservationSet ExperimentState::to_observation_set() const {
  ObservationSet obs;
  obs.dim = space.dim();
  obs.num_tasks = space.num_tasks();
  for (const auto& o : observations) {
    obs.add(normalize(space, o.x), o.y, o.task);
  }
  return obs;
}

ExperimentState make_experiment(SearchSpace space, EngineConfig config, std::uint64_t seed) {
  space.validate();
  config.validate();
  ExperimentState state;
  state.space = std::move(space);
  state.config = std::move(config);
  state.seed = seed;
  return state;
}

std::vector<double> suggest(ExperimentState& state, const std::string& task) {
  state.space.validate();
  state.config.validate();
  const std::size_t t = state.space.task_index(task);
  const std::size_t dim = state.space.dim();
  const std::size_t on_task = state.count_on_task(t);

  // Initialization phase: a fixed quasi-random design, one shared sequence
  // for every task.
  if (on_task < static_cast<std::size_t>(state.config.init_count)) {
    const SobolSequence sobol(dim);
    return denormalize(state.space, sobol.point(on_task + 1));
  }

  const std::uint64_t counter = state_counter(state);
  const ObservationSet obs = state.to_observation_set();

  HyperPriors priors = HyperPriors::defaults(dim, state.space.num_tasks());
  priors.warping_enabled = state.config.warping.enabled;
  if (priors.warping_enabled) {
    const std::vector<WarpingPrior> per_dim = state.config.warping.resolve(dim);
    priors.warping_priors.assign(state.space.num_tasks(), per_dim);
  }

  const bool cache_fresh =
      sampler_state_compatible(state) && state.sampler_counter == counter + 1;
  if (!cache_fresh) {
    SamplerConfig scfg = state.config.sampler;
    scfg.seed = make_stream(state.seed, kStreamSampler, counter).next_u64();
    HyperState init = default_initial_state(dim, state.space.num_tasks(),
                                            state.config.kernel_family);
    if (sampler_state_compatible(state)) {
      init = state.sampler_state.back();
      scfg.burn_in = state.config.resample_burn_in;
    }
    state.sampler_state = sample_hypers(obs, priors, scfg, init);
    state.sampler_counter = counter + 1;
  }
  const std::vector<HyperState>& samples = state.sampler_state;

  AcquisitionContext ctx;
  ctx.posteriors.reserve(samples.size());
  for (const HyperState& h : samples) ctx.posteriors.push_back(fit(obs, h));
  ctx.f_best = *state.incumbent(t);
  ctx.task = t;

  std::vector<std::vector<double>> observed_on_task;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs.task_of(i) == t) observed_on_task.push_back(obs.points[i]);
  }

  RngStream acq_rng = make_stream(state.seed, kStreamAcquisition, counter);
  std::vector<double> unit =
      maximize_acquisition(ctx, dim, state.config.acquisition.budget_per_dim * dim,
                           observed_on_task, acq_rng);

  // Nudge away from near-duplicate suggestions; repeated identical inputs
  // make the Gram matrix singular.
  RngStream dup_rng = make_stream(state.seed, kStreamDuplicate, counter);
  for (int attempt = 0; attempt < 16; ++attempt) {
    bool duplicate = false;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (obs.task_of(i) != t) continue;
      double max_diff = 0.0;
      for (std::size_t d = 0; d < dim; ++d) {
        max_diff = std::max(max_diff, std::fabs(obs.points[i][d] - unit[d]));
      }
      if (max_diff < 1e-9) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) break;
    for (double& v : unit) {
      v = std::clamp(v + (dup_rng.uniform() - 0.5) * 1e-3, 0.0, 1.0);
    }
  }

  return denormalize(state.space, unit);
}

ExperimentState observe(ExperimentState state, const std::string& task,
                        std::span<const double> raw, double y) {
  const std::size_t t = state.space.task_index(task);
  if (!std::isfinite(y)) throw std::invalid_argument("observe: value must be finite");
  // Bounds-check through normalize; throws std::out_of_range outside.
  (void)normalize(state.space, raw);
  Observation o;
  o.task = t;
  o.x.assign(raw.begin(), raw.end());
  o.y = y;
  state.observations.push_back(std::move(o));
  state.iteration += 1;
  return state;
}

RunResult run_loop(ExperimentState state, const EngineObjective& objective,
                   std::size_t max_evals, const std::string& task) {
  RunResult result;
  const std::size_t t = state.space.task_index(task);
  std::size_t failures = 0;

  while (state.count_on_task(t) < max_evals && failures < max_evals) {
    const std::vector<double> x = suggest(state, task);
    double y = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
    for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
      try {
        y = objective(task, x);
        ok = std::isfinite(y);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      // Skip the point; the failed-attempt counter reroutes the next
      // suggestion onto a fresh stream so the loop cannot stall.
      state.failed_attempts += 1;
      failures += 1;
      result.warnings.push_back("objective failed twice; skipping a suggestion");
      continue;
    }
    state = observe(std::move(state), task, x, y);
    TraceRow row;
    row.iteration = state.iteration;
    row.task = task;
    row.x = x;
    row.y = y;
    row.best = *state.incumbent(t);
    result.trace.push_back(std::move(row));
  }
  result.state = std::move(state);
  return result;
}

WarpingCurves mean_warping_export(std::span<const HyperState> samples, std::size_t grid_size) {
  if (samples.empty()) {
    throw std::invalid_argument("mean_warping_export: at least one sample required");
  }
  if (grid_size < 2) throw std::invalid_argument("mean_warping_export: grid must have >= 2 points");
  const std::size_t num_tasks = samples[0].warpings.size();
  const std::size_t dim = samples[0].warpings.empty() ? 0 : samples[0].warpings[0].dim();
  for (const auto& h : samples) {
    if (h.warpings.size() != num_tasks || (num_tasks > 0 && h.warpings[0].dim() != dim)) {
      throw std::invalid_argument("mean_warping_export: inconsistent samples");
    }
  }

  WarpingCurves curves;
  curves.dim = dim;
  curves.num_tasks = num_tasks;
  curves.grid.resize(grid_size);
  for (std::size_t g = 0; g < grid_size; ++g) {
    curves.grid[g] = static_cast<double>(g) / static_cast<double>(grid_size - 1);
  }
  curves.mean.assign(num_tasks * dim, std::vector<double>(grid_size, 0.0));
  curves.sd.assign(num_tasks * dim, std::vector<double>(grid_size, 0.0));

  const double n = static_cast<double>(samples.size());
  for (std::size_t t = 0; t < num_tasks; ++t) {
    for (std::size_t d = 0; d < dim; ++d) {
      std::vector<double>& mean = curves.mean[t * dim + d];
      std::vector<double>& sd = curves.sd[t * dim + d];
      for (std::size_t g = 0; g < grid_size; ++g) {
        double sum = 0.0, sum_sq = 0.0;
        for (const HyperState& h : samples) {
          const double w = beta_cdf(curves.grid[g], h.warpings[t].shapes[d]);
          sum += w;
          sum_sq += w * w;
        }
        mean[g] = sum / n;
        const double var = std::max(0.0, sum_sq / n - mean[g] * mean[g]);
        sd[g] = std::sqrt(var);
      }
    }
  }
  return curves;
}

}  // namespace warpbo
