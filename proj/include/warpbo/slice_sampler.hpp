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

#ifndef WARPBO_SLICE_SAMPLER_HPP_
#define WARPBO_SLICE_SAMPLER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "warpbo/gp.hpp"
#include "warpbo/rng.hpp"
#include "warpbo/warping.hpp"

namespace warpbo {

struct SamplerConfig {
  int burn_in = 50;
  int num_samples = 10;
  int thin = 1;
  int max_stepout = 8;
  double initial_width = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LogNormalPrior {
  double mu = 0.0;
  double sigma = 1.0;
};

struct NormalPrior {
  double mu = 0.0;
  double sigma = 1.0;
};

// Priors over every sampled hyperparameter. Warping priors are per task and
// per dimension (uniform per-dimension settings are the common case).
struct HyperPriors {
  std::vector<std::vector<WarpingPrior>> warping_priors;  // [task][dim]
  LogNormalPrior length_scale_prior{0.0, 1.0};
  LogNormalPrior amplitude_prior{0.0, 1.0};
  LogNormalPrior noise_prior{-6.0, 2.0};
  NormalPrior mean_prior{0.0, 1.0};
  bool warping_enabled = true;  // false pins every shape at (1,1)

  static HyperPriors defaults(std::size_t dim, std::size_t num_tasks,
                              const WarpingPrior& warping = WarpingPrior{});
  void validate(std::size_t dim, std::size_t num_tasks) const;
};

// One univariate stepping-out/shrinkage slice-sampling update. Returns a
// point on the slice through x0; requires log_density(x0) to be finite.
// Throws std::runtime_error if shrinkage collapses below 1e-12 width.
double slice_sample_1d(const std::function<double(double)>& log_density, double x0,
                       double width, int max_stepout, RngStream& rng);

// Coordinate-wise slice-sampling sweep over the full HyperState, targeting
// log marginal likelihood plus log priors. Positive parameters move in log
// space; task angles move on (0, pi). Returns `num_samples` retained states
// after `burn_in` discarded sweeps, `thin` sweeps apart. Deterministic for a
// fixed config seed.
std::vector<HyperState> sample_hypers(const ObservationSet& obs, const HyperPriors& priors,
                                      const SamplerConfig& cfg, const HyperState& init);

// A neutral chain start: unit amplitude and length scales, small noise,
// zero mean, identity warps.
HyperState default_initial_state(std::size_t dim, std::size_t num_tasks,
                                 KernelFamily family);

}  // namespace warpbo

#endif  // WARPBO_SLICE_SAMPLER_HPP_
