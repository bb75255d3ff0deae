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

#include "warpbo/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "warpbo/simd.hpp"

namespace warpbo {

KernelFamily kernel_family_from_name(const std::string& name) {
  if (name == "se" || name == "squared-exponential") {
    return KernelFamily::kSquaredExponential;
  }
  if (name == "matern52") return KernelFamily::kMatern52;
  throw std::invalid_argument("unknown kernel family: " + name);
}

const char* kernel_family_name(KernelFamily family) {
  return family == KernelFamily::kSquaredExponential ? "se" : "matern52";
}

void KernelParams::validate() const {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("KernelParams: amplitude must be positive and finite");
  }
  if (length_scales.empty()) {
    throw std::invalid_argument("KernelParams: at least one length scale required");
  }
  for (double ls : length_scales) {
    if (!(ls > 0.0) || !std::isfinite(ls)) {
      throw std::invalid_argument("KernelParams: length scales must be positive and finite");
    }
  }
}

TaskCovariance TaskCovariance::identity(std::size_t num_tasks) {
  TaskCovariance tc;
  tc.num_tasks = num_tasks;
  tc.angles.assign(num_tasks * (num_tasks - 1) / 2, 1.5707963267948966);  // pi/2
  tc.scales.assign(num_tasks, 1.0);
  return tc;
}

void TaskCovariance::validate() const {
  if (num_tasks == 0) throw std::invalid_argument("TaskCovariance: T must be >= 1");
  if (angles.size() != num_tasks * (num_tasks - 1) / 2) {
    throw std::invalid_argument("TaskCovariance: expected T(T-1)/2 angles");
  }
  constexpr double kPi = 3.141592653589793238462643383279502884;
  for (double a : angles) {
    if (!(a > 0.0 && a < kPi)) {
      throw std::invalid_argument("TaskCovariance: angles must lie in (0, pi)");
    }
  }
  if (scales.size() != num_tasks) {
    throw std::invalid_argument("TaskCovariance: one scale per task required");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("TaskCovariance: scales must be positive and finite");
    }
  }
}

double scaled_sq_distance(std::span<const double> x, std::span<const double> x2,
                          const KernelParams& kp) {
  if (x.size() != kp.dim() || x2.size() != kp.dim()) {
    throw std::invalid_argument("kernel: point dimension does not match length scales");
  }
  double r = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    const double inv = 1.0 / (kp.length_scales[d] * kp.length_scales[d]);
    const double diff = x[d] - x2[d];
    r += (diff * diff) * inv;
  }
  return r;
}

double kernel_from_sq_distance(double r, const KernelParams& kp) {
  // Shares the exponential with the batch kernels so that scalar calls and
  // batched rows agree bit-for-bit.
  if (kp.family == KernelFamily::kSquaredExponential) {
    return kp.amplitude * simd::fast_exp(-r);
  }
  const double u = 5.0 * r;
  const double t = std::sqrt(u);
  const double poly = (1.0 + t) + u * (1.0 / 3.0);
  return kp.amplitude * (poly * simd::fast_exp(-t));
}

double kernel_eval(std::span<const double> x, std::span<const double> x2,
                   const KernelParams& kp) {
  return kernel_from_sq_distance(scaled_sq_distance(x, x2, kp), kp);
}

std::vector<double> gram_matrix(std::span<const std::vector<double>> points,
                                const KernelParams& kp, double jitter) {
  if (jitter < 0.0) throw std::invalid_argument("gram_matrix: jitter must be >= 0");
  const std::size_t n = points.size();
  std::vector<double> gram(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    gram[i * n + i] = kp.amplitude * (1.0 + jitter);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = kernel_eval(points[i], points[j], kp);
      gram[i * n + j] = v;
      gram[j * n + i] = v;
    }
  }
  return gram;
}

std::vector<double> cross_covariance(std::span<const std::vector<double>> points,
                                     std::span<const double> x, const KernelParams& kp) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = kernel_eval(points[i], x, kp);
  return out;
}

std::vector<double> task_matrix(const TaskCovariance& tc) {
  tc.validate();
  const std::size_t t = tc.num_tasks;
  // Lower-triangular L with unit-norm rows from the angles.
  std::vector<double> lower(t * t, 0.0);
  lower[0] = 1.0;
  std::size_t next_angle = 0;
  for (std::size_t i = 1; i < t; ++i) {
    double sin_prod = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double phi = tc.angles[next_angle++];
      lower[i * t + j] = std::cos(phi) * sin_prod;
      sin_prod *= std::sin(phi);
    }
    lower[i * t + i] = sin_prod;
  }
  std::vector<double> out(t * t, 0.0);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k <= (i < j ? i : j); ++k) {
        dot += lower[i * t + k] * lower[j * t + k];
      }
      out[i * t + j] = tc.scales[i] * tc.scales[j] * dot;
    }
  }
  return out;
}

double joint_kernel_eval(std::span<const double> x, std::size_t t,
                         std::span<const double> x2, std::size_t t2,
                         const KernelParams& kp, const TaskCovariance& tc) {
  if (t >= tc.num_tasks || t2 >= tc.num_tasks) {
    throw std::out_of_range("joint_kernel_eval: task index out of range");
  }
  const std::vector<double> kt = task_matrix(tc);
  return kt[t * tc.num_tasks + t2] * kernel_eval(x, x2, kp);
}

}  // namespace warpbo
