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

#ifndef WARPBO_WARPING_HPP_
#define WARPBO_WARPING_HPP_

#include <span>
#include <string>
#include <vector>

#include "warpbo/rng.hpp"
#include "warpbo/special_functions.hpp"

namespace warpbo {

// Per-dimension Beta-CDF warp of the unit hypercube: coordinate d maps
// through the CDF with shape (alpha_d, beta_d). Monotone and bijective on
// [0,1]^D; shape (1,1) in every dimension is the identity.
struct WarpingParams {
  std::vector<BetaShape> shapes;

  std::size_t dim() const { return shapes.size(); }
  static WarpingParams identity(std::size_t dim);
  bool is_identity() const;
};

// Independent log-normal laws on alpha and beta: log(alpha) ~ N(mu_alpha,
// sigma_alpha), log(beta) ~ N(mu_beta, sigma_beta). Centered defaults keep
// the warp near the identity until data argue otherwise.
struct WarpingPrior {
  double mu_alpha = 0.0;
  double sigma_alpha = 0.8660254037844386;  // sqrt(0.75)
  double mu_beta = 0.0;
  double sigma_beta = 0.8660254037844386;
};

// Named prior families: "identity-ish", "exponential", "logarithmic",
// "sigmoidal", "default". Throws std::invalid_argument on unknown names.
WarpingPrior prior_preset(const std::string& name);

// Applies the warp coordinate-wise; x must lie in [0,1]^D with D matching.
std::vector<double> warp_point(std::span<const double> x, const WarpingParams& w);

// Warps a single coordinate of dimension d.
double warp_coord(double x, const WarpingParams& w, std::size_t d);

// Log density of the shape parameters under independent log-normal priors
// (density of the parameter itself, including the 1/value Jacobian).
double log_prior(const WarpingParams& w, const WarpingPrior& p);
double log_prior(const WarpingParams& w, std::span<const WarpingPrior> per_dim);

// One draw of shape parameters from the prior, one pair per dimension.
WarpingParams sample_prior(const WarpingPrior& p, std::size_t dim, RngStream& rng);

// Log density of a log-normal law evaluated at v > 0.
double log_normal_log_density(double v, double mu, double sigma);

}  // namespace warpbo

#endif  // WARPBO_WARPING_HPP_
