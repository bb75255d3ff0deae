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

#ifndef WARPBO_SPECIAL_FUNCTIONS_HPP_
#define WARPBO_SPECIAL_FUNCTIONS_HPP_

namespace warpbo {

// Shape parameters of a Beta distribution. Both must be strictly positive
// and finite; values are clamped into [1e-6, 1e6] so that extreme MCMC
// proposals degrade gracefully instead of overflowing downstream.
class BetaShape {
 public:
  BetaShape(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  bool is_identity() const { return alpha_ == 1.0 && beta_ == 1.0; }

  static constexpr double kMinShape = 1e-6;
  static constexpr double kMaxShape = 1e6;

 private:
  double alpha_;
  double beta_;
};

// ln Gamma(x) for x > 0, Lanczos approximation (~14 significant digits).
double log_gamma_fn(double x);

// ln B(alpha, beta) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b).
double log_beta_fn(const BetaShape& s);

// Regularized incomplete beta function I_x(alpha, beta) for x in [0, 1].
// Exactly 0 at x=0 and 1 at x=1; identity shapes return x unchanged.
// Throws std::domain_error outside [0, 1].
double beta_cdf(double x, const BetaShape& s);

// Beta density at x. Valid on (0, 1); the endpoints are admitted only when
// both shapes are >= 1 (where the analytic limit is finite).
double beta_pdf(double x, const BetaShape& s);

}  // namespace warpbo

#endif  // WARPBO_SPECIAL_FUNCTIONS_HPP_
