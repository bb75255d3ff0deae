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

#include "warpbo/warping.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace warpbo {
namespace {
constexpr double kLnSqrt2Pi = 0.918938533204672741780329736405617639;
}

WarpingParams WarpingParams::identity(std::size_t dim) {
  WarpingParams w;
  w.shapes.assign(dim, BetaShape(1.0, 1.0));
  return w;
}

bool WarpingParams::is_identity() const {
  for (const auto& s : shapes) {
    if (!s.is_identity()) return false;
  }
  return true;
}

WarpingPrior prior_preset(const std::string& name) {
  if (name == "identity-ish") return {0.0, 0.5, 0.0, 0.5};
  if (name == "exponential") return {0.0, 0.25, 1.0, 1.0};
  if (name == "logarithmic") return {1.0, 1.0, 0.0, 0.25};
  if (name == "sigmoidal") return {2.0, 0.5, 2.0, 0.5};
  if (name == "default") return WarpingPrior{};
  throw std::invalid_argument("unknown warping prior preset: " + name);
}

double warp_coord(double x, const WarpingParams& w, std::size_t d) {
  return beta_cdf(x, w.shapes.at(d));
}

std::vector<double> warp_point(std::span<const double> x, const WarpingParams& w) {
  if (x.size() != w.dim()) {
    throw std::invalid_argument("warp_point: dimension mismatch");
  }
  std::vector<double> out(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) out[d] = beta_cdf(x[d], w.shapes[d]);
  return out;
}

double log_normal_log_density(double v, double mu, double sigma) {
  if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
  const double z = (std::log(v) - mu) / sigma;
  return -std::log(v) - std::log(sigma) - kLnSqrt2Pi - 0.5 * z * z;
}

double log_prior(const WarpingParams& w, const WarpingPrior& p) {
  double total = 0.0;
  for (const auto& s : w.shapes) {
    total += log_normal_log_density(s.alpha(), p.mu_alpha, p.sigma_alpha);
    total += log_normal_log_density(s.beta(), p.mu_beta, p.sigma_beta);
  }
  return total;
}

double log_prior(const WarpingParams& w, std::span<const WarpingPrior> per_dim) {
  if (per_dim.size() != w.dim()) {
    throw std::invalid_argument("log_prior: one prior per dimension required");
  }
  double total = 0.0;
  for (std::size_t d = 0; d < w.dim(); ++d) {
    const auto& s = w.shapes[d];
    total += log_normal_log_density(s.alpha(), per_dim[d].mu_alpha, per_dim[d].sigma_alpha);
    total += log_normal_log_density(s.beta(), per_dim[d].mu_beta, per_dim[d].sigma_beta);
  }
  return total;
}

WarpingParams sample_prior(const WarpingPrior& p, std::size_t dim, RngStream& rng) {
  WarpingParams w;
  w.shapes.reserve(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    const double a = std::exp(p.mu_alpha + p.sigma_alpha * rng.normal());
    const double b = std::exp(p.mu_beta + p.sigma_beta * rng.normal());
    w.shapes.emplace_back(a, b);
  }
  return w;
}

}  // namespace warpbo
