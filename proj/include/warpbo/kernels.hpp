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

#ifndef WARPBO_KERNELS_HPP_
#define WARPBO_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace warpbo {

enum class KernelFamily { kSquaredExponential, kMatern52 };

KernelFamily kernel_family_from_name(const std::string& name);
const char* kernel_family_name(KernelFamily family);

// Stationary ARD kernel parameters. Inputs are assumed to live on the
// (warped) unit hypercube; length scales are per dimension.
struct KernelParams {
  double amplitude = 1.0;
  std::vector<double> length_scales;
  KernelFamily family = KernelFamily::kMatern52;

  std::size_t dim() const { return length_scales.size(); }
  void validate() const;
};

// Task covariance through the spherical parametrization: K_T = S L L^T S
// with L lower-triangular, rows built from T(T-1)/2 angles in (0, pi) and
// unit norm, S = diag(scales). Positive definite for any valid angles.
struct TaskCovariance {
  std::size_t num_tasks = 1;
  std::vector<double> angles;  // row-major: row i contributes i angles
  std::vector<double> scales;  // defaults to all ones

  static TaskCovariance identity(std::size_t num_tasks);
  void validate() const;
};

// Scaled squared distance sum_d (x_d - x2_d)^2 / ls_d^2.
double scaled_sq_distance(std::span<const double> x, std::span<const double> x2,
                          const KernelParams& kp);

// Covariance between two (already warped) points.
double kernel_eval(std::span<const double> x, std::span<const double> x2,
                   const KernelParams& kp);

// Kernel value from a precomputed scaled squared distance.
double kernel_from_sq_distance(double r, const KernelParams& kp);

// N x N Gram matrix (row-major) with jitter * amplitude added on the
// diagonal. Upper triangle computed, then mirrored.
std::vector<double> gram_matrix(std::span<const std::vector<double>> points,
                                const KernelParams& kp, double jitter);

// Cross-covariances K(X, x).
std::vector<double> cross_covariance(std::span<const std::vector<double>> points,
                                     std::span<const double> x, const KernelParams& kp);

// Realizes the T x T task covariance matrix (row-major).
std::vector<double> task_matrix(const TaskCovariance& tc);

// Product kernel K_T(t,t2) * K(x,x2); points must already carry their own
// task's warping.
double joint_kernel_eval(std::span<const double> x, std::size_t t,
                         std::span<const double> x2, std::size_t t2,
                         const KernelParams& kp, const TaskCovariance& tc);

}  // namespace warpbo

#endif  // WARPBO_KERNELS_HPP_
