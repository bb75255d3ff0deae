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

#ifndef WARPBO_BENCHMARKS_HPP_
#define WARPBO_BENCHMARKS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "warpbo/special_functions.hpp"

namespace warpbo {

using ObjectiveFunction = std::function<double(std::span<const double>)>;

// An analytic test objective with its known optimum. Optima are re-verified
// by local refinement in the test suite.
struct BenchmarkSpec {
  std::string name;
  std::vector<std::pair<double, double>> bounds;
  double optimum_value = 0.0;
  std::vector<std::vector<double>> minimizers;
  double noise_level = 0.0;
  ObjectiveFunction fn;
};

double branin(double x1, double x2);
double hartmann6(std::span<const double> x);

// Composes a 1-D base function with a Beta-CDF warp of its argument:
// f(x) = base(BetaCDF(x; shape)). The range of `base` is preserved; with
// shape (1,1) the composition is `base` itself.
std::function<double(double)> synthetic_warped(std::function<double(double)> base,
                                               BetaShape shape);

// Two related 1-D objectives, one per task, each the base seen through its
// own warp. Identical shapes give identical objectives.
std::pair<std::function<double(double)>, std::function<double(double)>> multi_task_pair(
    std::function<double(double)> base, BetaShape shape_task0, BetaShape shape_task1);

const std::vector<std::string>& benchmark_names();
const BenchmarkSpec& benchmark_by_name(const std::string& name);

// FNV-1a hash over the raw bytes of the pinned benchmark constants; a test
// freezes this value so every suite shares one copy of the numbers.
std::uint64_t benchmark_constants_checksum();

}  // namespace warpbo

#endif  // WARPBO_BENCHMARKS_HPP_
