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

#ifndef WARPBO_GP_HPP_
#define WARPBO_GP_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "warpbo/kernels.hpp"
#include "warpbo/warping.hpp"

namespace warpbo {

// Training data on the unit hypercube. `tasks` is empty in single-task mode
// and holds one index per observation otherwise.
struct ObservationSet {
  std::size_t dim = 0;
  std::size_t num_tasks = 1;
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  std::vector<std::size_t> tasks;

  std::size_t size() const { return points.size(); }
  std::size_t task_of(std::size_t i) const { return tasks.empty() ? 0 : tasks[i]; }
  void add(std::vector<double> x, double y, std::size_t task = 0);
  void validate() const;
};

// One joint setting of every sampled hyperparameter: kernel, noise, constant
// mean, one warp per task, and the task covariance when T > 1. Noise and
// mean live in standardized output units.
struct HyperState {
  KernelParams kernel;
  double noise_variance = 1e-6;
  double constant_mean = 0.0;
  std::vector<WarpingParams> warpings;
  std::optional<TaskCovariance> task_cov;

  void validate(std::size_t dim, std::size_t num_tasks) const;
};

struct Standardization {
  double mean = 0.0;
  double stddev = 1.0;
};

Standardization standardize(const ObservationSet& obs);

class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable posterior for one HyperState: Cholesky factor of the noisy Gram,
// precomputed solve vector, and the warped training inputs. Safe to share
// across threads for concurrent predict calls.
class PosteriorSample {
 public:
  struct Prediction {
    double mean;
    double variance;  // includes observation noise
  };

  // Posterior mean and variance at a normalized (unwarped) point, reported
  // in raw output units.
  Prediction predict(std::span<const double> x, std::size_t task) const;

  const HyperState& hyper() const { return hyper_; }
  std::size_t size() const { return n_; }
  double jitter_used() const { return jitter_; }
  const std::vector<double>& cholesky_factor() const { return chol_; }
  const std::vector<double>& solve_vector() const { return alpha_; }
  const Standardization& standardization() const { return std_; }
  // Warped training inputs, dimension-major (column d starts at d * N).
  const std::vector<double>& warped_inputs() const { return warped_dims_; }

 private:
  friend PosteriorSample fit(const ObservationSet&, const HyperState&);

  HyperState hyper_;
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> chol_;         // column-major lower factor
  std::vector<double> alpha_;        // (K + noise I)^-1 (y_std - m)
  std::vector<double> warped_dims_;  // dim-major warped coordinates
  std::vector<std::size_t> tasks_;
  std::vector<double> task_mat_;     // realized T x T matrix; empty if T == 1
  Standardization std_;
  double jitter_ = 0.0;
};

// Exact GP fit. Escalates jitter by factors of 10 from 1e-8 to 1e-4 times
// the amplitude; throws FactorizationError beyond that.
PosteriorSample fit(const ObservationSet& obs, const HyperState& h);

// Log marginal likelihood of the (standardized) observations.
double log_marginal_likelihood(const ObservationSet& obs, const HyperState& h);

// Repeated-evaluation form of the marginal likelihood used by the MCMC
// sweep: caches warped coordinates per (task, dimension), the scaled
// distance matrix, and the factorization, and recomputes only what the new
// HyperState invalidates. Returns -infinity instead of throwing when the
// factorization fails after jitter escalation.
class MarginalLikelihoodEvaluator {
 public:
  explicit MarginalLikelihoodEvaluator(ObservationSet obs);
  ~MarginalLikelihoodEvaluator();
  MarginalLikelihoodEvaluator(const MarginalLikelihoodEvaluator&) = delete;
  MarginalLikelihoodEvaluator& operator=(const MarginalLikelihoodEvaluator&) = delete;

  double log_marginal(const HyperState& h);
  const ObservationSet& observations() const;
  const Standardization& standardization() const;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace warpbo

#endif  // WARPBO_GP_HPP_
