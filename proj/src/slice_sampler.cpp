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

#include "warpbo/slice_sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace warpbo {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLnSqrt2Pi = 0.918938533204672741780329736405617639;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double normal_logpdf(double v, double mu, double sigma) {
  const double z = (v - mu) / sigma;
  return -std::log(sigma) - kLnSqrt2Pi - 0.5 * z * z;
}

// One sampled scalar of the HyperState, addressed in its sampling space
// (log space for positive parameters, raw space for the mean and angles).
struct Coord {
  enum class Kind {
    kLogAmplitude,
    kLogLengthScale,
    kLogNoise,
    kMean,
    kLogAlpha,
    kLogBeta,
    kAngle,
  };
  Kind kind;
  std::size_t task = 0;
  std::size_t index = 0;
};

double get_coord(const HyperState& h, const Coord& c) {
  switch (c.kind) {
    case Coord::Kind::kLogAmplitude:
      return std::log(h.kernel.amplitude);
    case Coord::Kind::kLogLengthScale:
      return std::log(h.kernel.length_scales[c.index]);
    case Coord::Kind::kLogNoise:
      return std::log(h.noise_variance);
    case Coord::Kind::kMean:
      return h.constant_mean;
    case Coord::Kind::kLogAlpha:
      return std::log(h.warpings[c.task].shapes[c.index].alpha());
    case Coord::Kind::kLogBeta:
      return std::log(h.warpings[c.task].shapes[c.index].beta());
    case Coord::Kind::kAngle:
      return h.task_cov->angles[c.index];
  }
  return 0.0;
}

void set_coord(HyperState& h, const Coord& c, double v) {
  switch (c.kind) {
    case Coord::Kind::kLogAmplitude:
      h.kernel.amplitude = std::exp(v);
      break;
    case Coord::Kind::kLogLengthScale:
      h.kernel.length_scales[c.index] = std::exp(v);
      break;
    case Coord::Kind::kLogNoise:
      h.noise_variance = std::exp(v);
      break;
    case Coord::Kind::kMean:
      h.constant_mean = v;
      break;
    case Coord::Kind::kLogAlpha: {
      BetaShape& s = h.warpings[c.task].shapes[c.index];
      s = BetaShape(std::exp(v), s.beta());
      break;
    }
    case Coord::Kind::kLogBeta: {
      BetaShape& s = h.warpings[c.task].shapes[c.index];
      s = BetaShape(s.alpha(), std::exp(v));
      break;
    }
    case Coord::Kind::kAngle:
      h.task_cov->angles[c.index] = v;
      break;
  }
}

double prior_term(const HyperPriors& priors, const Coord& c, double v) {
  switch (c.kind) {
    case Coord::Kind::kLogAmplitude:
      return normal_logpdf(v, priors.amplitude_prior.mu, priors.amplitude_prior.sigma);
    case Coord::Kind::kLogLengthScale:
      return normal_logpdf(v, priors.length_scale_prior.mu, priors.length_scale_prior.sigma);
    case Coord::Kind::kLogNoise:
      return normal_logpdf(v, priors.noise_prior.mu, priors.noise_prior.sigma);
    case Coord::Kind::kMean:
      return normal_logpdf(v, priors.mean_prior.mu, priors.mean_prior.sigma);
    case Coord::Kind::kLogAlpha: {
      const WarpingPrior& wp = priors.warping_priors[c.task][c.index];
      return normal_logpdf(v, wp.mu_alpha, wp.sigma_alpha);
    }
    case Coord::Kind::kLogBeta: {
      const WarpingPrior& wp = priors.warping_priors[c.task][c.index];
      return normal_logpdf(v, wp.mu_beta, wp.sigma_beta);
    }
    case Coord::Kind::kAngle:
      return (v > 0.0 && v < kPi) ? 0.0 : kNegInf;
  }
  return kNegInf;
}

std::vector<Coord> build_coords(std::size_t dim, std::size_t num_tasks,
                                const HyperPriors& priors) {
  std::vector<Coord> coords;
  coords.push_back({Coord::Kind::kLogAmplitude});
  for (std::size_t d = 0; d < dim; ++d) coords.push_back({Coord::Kind::kLogLengthScale, 0, d});
  coords.push_back({Coord::Kind::kLogNoise});
  coords.push_back({Coord::Kind::kMean});
  if (priors.warping_enabled) {
    for (std::size_t t = 0; t < num_tasks; ++t) {
      for (std::size_t d = 0; d < dim; ++d) {
        coords.push_back({Coord::Kind::kLogAlpha, t, d});
        coords.push_back({Coord::Kind::kLogBeta, t, d});
      }
    }
  }
  if (num_tasks > 1) {
    const std::size_t num_angles = num_tasks * (num_tasks - 1) / 2;
    for (std::size_t a = 0; a < num_angles; ++a) coords.push_back({Coord::Kind::kAngle, 0, a});
  }
  return coords;
}

}  // namespace

void SamplerConfig::validate() const {
  if (burn_in < 0) throw std::invalid_argument("SamplerConfig: burn_in must be >= 0");
  if (num_samples < 1) throw std::invalid_argument("SamplerConfig: num_samples must be >= 1");
  if (thin < 1) throw std::invalid_argument("SamplerConfig: thin must be >= 1");
  if (max_stepout < 1) throw std::invalid_argument("SamplerConfig: max_stepout must be >= 1");
  if (!(initial_width > 0.0)) {
    throw std::invalid_argument("SamplerConfig: initial_width must be > 0");
  }
}

HyperPriors HyperPriors::defaults(std::size_t dim, std::size_t num_tasks,
                                  const WarpingPrior& warping) {
  HyperPriors p;
  p.warping_priors.assign(num_tasks, std::vector<WarpingPrior>(dim, warping));
  return p;
}

void HyperPriors::validate(std::size_t dim, std::size_t num_tasks) const {
  if (warping_enabled) {
    if (warping_priors.size() != num_tasks) {
      throw std::invalid_argument("HyperPriors: one warping prior set per task required");
    }
    for (const auto& per_dim : warping_priors) {
      if (per_dim.size() != dim) {
        throw std::invalid_argument("HyperPriors: one warping prior per dimension required");
      }
      for (const auto& wp : per_dim) {
        if (!(wp.sigma_alpha > 0.0) || !(wp.sigma_beta > 0.0)) {
          throw std::invalid_argument("HyperPriors: warping prior sigmas must be > 0");
        }
      }
    }
  }
  if (!(length_scale_prior.sigma > 0.0) || !(amplitude_prior.sigma > 0.0) ||
      !(noise_prior.sigma > 0.0) || !(mean_prior.sigma > 0.0)) {
    throw std::invalid_argument("HyperPriors: prior scales must be > 0");
  }
}

double slice_sample_1d(const std::function<double(double)>& log_density, double x0,
                       double width, int max_stepout, RngStream& rng) {
  const double f0 = log_density(x0);
  if (!std::isfinite(f0)) {
    throw std::invalid_argument("slice_sample_1d: log density not finite at start point");
  }
  const double level = f0 + std::log(rng.uniform_open());

  double left = x0 - width * rng.uniform();
  double right = left + width;
  int budget_left = static_cast<int>(std::floor(max_stepout * rng.uniform()));
  int budget_right = (max_stepout - 1) - budget_left;
  while (budget_left-- > 0 && log_density(left) > level) left -= width;
  while (budget_right-- > 0 && log_density(right) > level) right += width;

  for (;;) {
    const double x1 = left + (right - left) * rng.uniform();
    const double f1 = log_density(x1);
    if (f1 >= level) return x1;
    if (x1 < x0) {
      left = x1;
    } else {
      right = x1;
    }
    if (right - left < 1e-12) {
      throw std::runtime_error("slice_sample_1d: shrinkage collapsed (pathological density)");
    }
  }
}

HyperState default_initial_state(std::size_t dim, std::size_t num_tasks,
                                 KernelFamily family) {
  HyperState h;
  h.kernel.amplitude = 1.0;
  h.kernel.length_scales.assign(dim, 1.0);
  h.kernel.family = family;
  h.noise_variance = std::exp(-6.0);
  h.constant_mean = 0.0;
  h.warpings.assign(num_tasks, WarpingParams::identity(dim));
  if (num_tasks > 1) h.task_cov = TaskCovariance::identity(num_tasks);
  return h;
}

std::vector<HyperState> sample_hypers(const ObservationSet& obs, const HyperPriors& priors,
                                      const SamplerConfig& cfg, const HyperState& init) {
  cfg.validate();
  obs.validate();
  priors.validate(obs.dim, obs.num_tasks);
  init.validate(obs.dim, obs.num_tasks);
  if (obs.size() == 0) throw std::invalid_argument("sample_hypers: empty observation set");

  MarginalLikelihoodEvaluator evaluator(obs);
  RngStream rng(cfg.seed);
  HyperState state = init;
  if (!priors.warping_enabled) {
    state.warpings.assign(obs.num_tasks, WarpingParams::identity(obs.dim));
  }

  const std::vector<Coord> coords = build_coords(obs.dim, obs.num_tasks, priors);
  const int total_sweeps = cfg.burn_in + cfg.num_samples * cfg.thin;
  std::vector<HyperState> retained;
  retained.reserve(cfg.num_samples);

  for (int sweep = 0; sweep < total_sweeps; ++sweep) {
    for (const Coord& c : coords) {
      const double x0 = get_coord(state, c);
      const auto log_density = [&](double v) {
        const double lp = prior_term(priors, c, v);
        if (lp == kNegInf) return kNegInf;
        set_coord(state, c, v);
        const double lml = evaluator.log_marginal(state);
        return lml + lp;
      };
      const double x1 = slice_sample_1d(log_density, x0, cfg.initial_width,
                                        cfg.max_stepout, rng);
      set_coord(state, c, x1);
    }
    const int post = sweep - cfg.burn_in;
    if (post >= 0 && (post + 1) % cfg.thin == 0) retained.push_back(state);
  }
  return retained;
}

}  // namespace warpbo
