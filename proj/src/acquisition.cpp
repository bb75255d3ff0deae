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

#include "warpbo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "warpbo/sobol.hpp"

namespace warpbo {
namespace {

constexpr double kInvSqrt2 = 0.707106781186547524400844362104849039;
constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;

double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }
double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// Golden-section maximization of a 1-D slice over [lo, hi].
template <typename Fn>
double golden_section_max(const Fn& fn, double lo, double hi, int iters, double* best_val) {
  constexpr double kInvPhi = 0.618033988749894848204586834365638118;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  if (fc > fd) {
    *best_val = fc;
    return c;
  }
  *best_val = fd;
  return d;
}

}  // namespace

void AcquisitionContext::validate() const {
  if (posteriors.empty()) {
    throw std::invalid_argument("AcquisitionContext: at least one posterior required");
  }
  if (!std::isfinite(f_best)) {
    throw std::invalid_argument("AcquisitionContext: incumbent must be finite");
  }
}

double improvement_score(double mean, double sd, double f_best) {
  if (!(sd > 0.0)) {
    throw std::invalid_argument("improvement_score: sd must be > 0");
  }
  return (f_best - mean) / sd;
}

double expected_improvement(double mean, double sd, double f_best) {
  if (sd < 0.0) throw std::invalid_argument("expected_improvement: sd must be >= 0");
  if (sd == 0.0) return std::max(f_best - mean, 0.0);
  const double z = (f_best - mean) / sd;
  const double value = sd * (z * normal_cdf(z) + normal_pdf(z));
  return value > 0.0 ? value : 0.0;
}

double marginal_ei(const AcquisitionContext& ctx, std::span<const double> x) {
  double total = 0.0;
  for (const PosteriorSample& ps : ctx.posteriors) {
    const auto pred = ps.predict(x, ctx.task);
    total += expected_improvement(pred.mean, std::sqrt(pred.variance), ctx.f_best);
  }
  return total / static_cast<double>(ctx.posteriors.size());
}

std::vector<double> maximize_over_cube(
    const std::function<double(std::span<const double>)>& objective, std::size_t dim,
    std::size_t budget, std::span<const std::vector<double>> extra_starts, RngStream& rng) {
  if (budget < 1) throw std::invalid_argument("maximize_over_cube: budget must be >= 1");
  if (dim == 0) throw std::invalid_argument("maximize_over_cube: dim must be >= 1");

  const std::size_t num_candidates = (budget + 1) / 2;
  SobolSequence sobol(dim, rng.next_u64() | 1ULL);  // scrambled, seed-derived

  std::vector<std::vector<double>> candidates;
  candidates.reserve(num_candidates + extra_starts.size());
  for (std::size_t k = 0; k < num_candidates; ++k) candidates.push_back(sobol.point(k + 1));
  for (const auto& s : extra_starts) {
    if (s.size() != dim) throw std::invalid_argument("maximize_over_cube: bad start dimension");
    candidates.push_back(s);
  }

  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scores[i] = objective(candidates[i]);

  // Rank candidate indices by score, ties toward the lower index.
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<double> best = candidates[order[0]];
  double best_score = scores[order[0]];

  const std::size_t num_starts = std::min<std::size_t>(5, order.size());
  const std::size_t refine_budget = budget - std::min(budget, num_candidates);
  if (num_starts > 0 && refine_budget > 0) {
    // Spend the remaining budget on coordinate-wise golden-section passes
    // around the top candidates, bracketing +-0.1 of the cube per pass.
    const std::size_t per_start = std::max<std::size_t>(refine_budget / num_starts, 4);
    const int iters = 12;
    const std::size_t per_sweep = dim * (iters + 2);
    const std::size_t sweeps = std::max<std::size_t>(1, per_start / per_sweep);
    for (std::size_t s = 0; s < num_starts; ++s) {
      std::vector<double> x = candidates[order[s]];
      double fx = scores[order[s]];
      for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t d = 0; d < dim; ++d) {
          const double lo = std::max(0.0, x[d] - 0.1);
          const double hi = std::min(1.0, x[d] + 0.1);
          double line_best = 0.0;
          const double xd = golden_section_max(
              [&](double v) {
                std::vector<double> probe = x;
                probe[d] = v;
                return objective(probe);
              },
              lo, hi, iters, &line_best);
          if (line_best > fx) {
            fx = line_best;
            x[d] = xd;
          }
        }
      }
      if (fx > best_score) {
        best_score = fx;
        best = x;
      }
    }
  }

  for (double& v : best) v = std::clamp(v, 0.0, 1.0);
  return best;
}

std::vector<double> maximize_acquisition(const AcquisitionContext& ctx, std::size_t dim,
                                         std::size_t budget,
                                         std::span<const std::vector<double>> observed,
                                         RngStream& rng) {
  ctx.validate();
  // Observed points nudged by small Gaussian noise make good exploitation
  // starts; EI is often sharply peaked near the incumbent.
  std::vector<std::vector<double>> starts;
  starts.reserve(observed.size());
  for (const auto& p : observed) {
    std::vector<double> s(p);
    for (double& v : s) v = std::clamp(v + 0.001 * rng.normal(), 0.0, 1.0);
    starts.push_back(std::move(s));
  }
  const auto objective = [&](std::span<const double> x) { return marginal_ei(ctx, x); };
  return maximize_over_cube(objective, dim, budget, starts, rng);
}

}  // namespace warpbo
