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

#ifndef WARPBO_ACQUISITION_HPP_
#define WARPBO_ACQUISITION_HPP_

#include <functional>
#include <span>
#include <vector>

#include "warpbo/gp.hpp"
#include "warpbo/rng.hpp"

namespace warpbo {

// Everything needed to score a candidate query point: one posterior per
// retained hyperparameter sample, the incumbent (lowest observed value on
// the target task), and the task being optimized.
struct AcquisitionContext {
  std::vector<PosteriorSample> posteriors;
  double f_best = 0.0;
  std::size_t task = 0;

  void validate() const;
};

// Standardized improvement (f_best - mean) / sd; requires sd > 0.
double improvement_score(double mean, double sd, double f_best);

// Expected improvement of a Gaussian prediction over the incumbent. The
// sd = 0 limit degenerates to max(f_best - mean, 0).
double expected_improvement(double mean, double sd, double f_best);

// EI averaged over the posterior samples at a normalized point.
double marginal_ei(const AcquisitionContext& ctx, std::span<const double> x);

// Maximizes a nonnegative objective over [0,1]^dim: a low-discrepancy
// candidate sweep spending about half the budget, followed by coordinate
// wise golden-section refinement of the best candidates. `extra_starts` are
// additional candidates (e.g. perturbed observations). Deterministic for a
// fixed rng state; ties break toward the lowest candidate index.
std::vector<double> maximize_over_cube(
    const std::function<double(std::span<const double>)>& objective, std::size_t dim,
    std::size_t budget, std::span<const std::vector<double>> extra_starts, RngStream& rng);

// Multi-start maximization of marginal EI over the unit hypercube;
// `observed` are the normalized training inputs on the target task, used as
// perturbed refinement seeds.
std::vector<double> maximize_acquisition(const AcquisitionContext& ctx, std::size_t dim,
                                         std::size_t budget,
                                         std::span<const std::vector<double>> observed,
                                         RngStream& rng);

}  // namespace warpbo

#endif  // WARPBO_ACQUISITION_HPP_
