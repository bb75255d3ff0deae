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

#include "warpbo/benchmarks.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace warpbo {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Branin coefficients, standard form.
constexpr double kBraninA = 1.0;
constexpr double kBraninB = 5.1 / (4.0 * kPi * kPi);
constexpr double kBraninC = 5.0 / kPi;
constexpr double kBraninR = 6.0;
constexpr double kBraninS = 10.0;
constexpr double kBraninT = 1.0 / (8.0 * kPi);

// Hartmann-6: canonical 4x6 parameter matrices.
constexpr double kHartmannAlpha[4] = {1.0, 1.2, 3.0, 3.2};
constexpr double kHartmannA[4][6] = {
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
};
constexpr double kHartmannP[4][6] = {
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
};

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

double warped_quadratic_1d(double x) {
  const double u = beta_cdf(x, BetaShape(5.0, 1.0));
  return (u - 0.9) * (u - 0.9);
}

// Separable 3-D extension: product of (1 + per-dimension warped quadratic)
// terms minus one, so the optimum stays a single interior point with value 0.
double warped_quadratic_3d(std::span<const double> x) {
  double prod = 1.0;
  for (double v : x) prod *= 1.0 + warped_quadratic_1d(v);
  return prod - 1.0;
}

std::vector<BenchmarkSpec> make_registry() {
  std::vector<BenchmarkSpec> specs;

  BenchmarkSpec br;
  br.name = "branin";
  br.bounds = {{-5.0, 10.0}, {0.0, 15.0}};
  br.optimum_value = 0.397887357729738;
  br.minimizers = {{-kPi, 12.275}, {kPi, 2.275}, {9.42478, 2.475}};
  br.fn = [](std::span<const double> x) { return branin(x[0], x[1]); };
  specs.push_back(std::move(br));

  BenchmarkSpec h6;
  h6.name = "hartmann6";
  h6.bounds.assign(6, {0.0, 1.0});
  h6.optimum_value = -3.322368011391339;
  h6.minimizers = {{0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573}};
  h6.fn = [](std::span<const double> x) { return hartmann6(x); };
  specs.push_back(std::move(h6));

  const double xstar = std::pow(0.9, 0.2);  // warp (5,1) puts the optimum at 0.9^(1/5)

  BenchmarkSpec w1;
  w1.name = "warped-quad-1d";
  w1.bounds = {{0.0, 1.0}};
  w1.optimum_value = 0.0;
  w1.minimizers = {{xstar}};
  w1.fn = [](std::span<const double> x) { return warped_quadratic_1d(x[0]); };
  specs.push_back(std::move(w1));

  BenchmarkSpec w3;
  w3.name = "warped-quad-3d";
  w3.bounds.assign(3, {0.0, 1.0});
  w3.optimum_value = 0.0;
  w3.minimizers = {{xstar, xstar, xstar}};
  w3.fn = [](std::span<const double> x) { return warped_quadratic_3d(x); };
  specs.push_back(std::move(w3));

  return specs;
}

const std::vector<BenchmarkSpec>& registry() {
  static const std::vector<BenchmarkSpec> specs = make_registry();
  return specs;
}

}  // namespace

double branin(double x1, double x2) {
  const double inner = x2 - kBraninB * x1 * x1 + kBraninC * x1 - kBraninR;
  return kBraninA * inner * inner + kBraninS * (1.0 - kBraninT) * std::cos(x1) + kBraninS;
}

double hartmann6(std::span<const double> x) {
  if (x.size() != 6) throw std::invalid_argument("hartmann6: expects 6 coordinates");
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    double inner = 0.0;
    for (int j = 0; j < 6; ++j) {
      const double diff = x[j] - kHartmannP[i][j];
      inner += kHartmannA[i][j] * diff * diff;
    }
    total -= kHartmannAlpha[i] * std::exp(-inner);
  }
  return total;
}

std::function<double(double)> synthetic_warped(std::function<double(double)> base,
                                               BetaShape shape) {
  return [base = std::move(base), shape](double x) { return base(beta_cdf(x, shape)); };
}

std::pair<std::function<double(double)>, std::function<double(double)>> multi_task_pair(
    std::function<double(double)> base, BetaShape shape_task0, BetaShape shape_task1) {
  return {synthetic_warped(base, shape_task0), synthetic_warped(std::move(base), shape_task1)};
}

const std::vector<std::string>& benchmark_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : registry()) out.push_back(s.name);
    return out;
  }();
  return names;
}

const BenchmarkSpec& benchmark_by_name(const std::string& name) {
  for (const auto& s : registry()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown benchmark: " + name);
}

std::uint64_t benchmark_constants_checksum() {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const double branin_consts[6] = {kBraninA, kBraninB, kBraninC, kBraninR, kBraninS, kBraninT};
  hash_bytes(h, branin_consts, sizeof(branin_consts));
  hash_bytes(h, kHartmannAlpha, sizeof(kHartmannAlpha));
  hash_bytes(h, kHartmannA, sizeof(kHartmannA));
  hash_bytes(h, kHartmannP, sizeof(kHartmannP));
  return h;
}

}  // namespace warpbo
