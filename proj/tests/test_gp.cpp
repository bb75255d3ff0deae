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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <doctest.h>

#include "oracles/dense_oracle.hpp"
#include "warpbo/gp.hpp"
#include "warpbo/rng.hpp"
#include "warpbo/slice_sampler.hpp"

using namespace warpbo;

namespace {

constexpr double kLn2Pi = 1.837877066409345483560659472811235279;

ObservationSet random_obs(std::size_t n, std::size_t dim, warpbo::RngStream& rng,
                          std::size_t num_tasks = 1) {
  ObservationSet obs;
  obs.dim = dim;
  obs.num_tasks = num_tasks;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (double& v : x) v = rng.uniform();
    obs.add(std::move(x), rng.normal(0.0, 2.0), num_tasks > 1 ? i % num_tasks : 0);
  }
  return obs;
}

HyperState random_hyper(std::size_t dim, std::size_t num_tasks, bool warped,
                        warpbo::RngStream& rng) {
  HyperState h;
  h.kernel.amplitude = std::exp(rng.uniform(-0.5, 0.5));
  h.kernel.length_scales.resize(dim);
  for (double& v : h.kernel.length_scales) v = std::exp(rng.uniform(-1.5, 0.3));
  h.kernel.family = rng.uniform() < 0.5 ? KernelFamily::kMatern52
                                        : KernelFamily::kSquaredExponential;
  h.noise_variance = std::exp(rng.uniform(-8.0, -2.0));
  h.constant_mean = rng.uniform(-0.5, 0.5);
  for (std::size_t t = 0; t < num_tasks; ++t) {
    WarpingParams w;
    for (std::size_t d = 0; d < dim; ++d) {
      if (warped) {
        w.shapes.emplace_back(std::exp(rng.uniform(-0.8, 0.8)),
                              std::exp(rng.uniform(-0.8, 0.8)));
      } else {
        w.shapes.emplace_back(1.0, 1.0);
      }
    }
    h.warpings.push_back(std::move(w));
  }
  if (num_tasks > 1) {
    TaskCovariance tc;
    tc.num_tasks = num_tasks;
    for (std::size_t i = 0; i < num_tasks * (num_tasks - 1) / 2; ++i) {
      tc.angles.push_back(rng.uniform(0.3, 2.8));
    }
    tc.scales.assign(num_tasks, 1.0);
    h.task_cov = std::move(tc);
  }
  return h;
}

// Reference GP quantities by Gaussian elimination on the same noisy Gram
// the fit reports (same jitter), standardization replicated explicitly.
struct DenseRef {
  std::vector<double> gram;  // row-major noisy Gram
  std::vector<double> alpha;
  std::vector<double> y_std;
  Standardization stdz;
  double lml;
};

DenseRef dense_reference(const ObservationSet& obs, const HyperState& h, double jitter) {
  const std::size_t n = obs.size();
  DenseRef ref;
  ref.stdz = standardize(obs);
  ref.y_std.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ref.y_std[i] = (obs.values[i] - ref.stdz.mean) / ref.stdz.stddev;
  }

  std::vector<std::vector<double>> warped(n);
  for (std::size_t i = 0; i < n; ++i) {
    warped[i] = warp_point(obs.points[i], h.warpings[obs.task_of(i)]);
  }
  std::vector<double> kt;
  if (obs.num_tasks > 1) kt = task_matrix(*h.task_cov);

  ref.gram.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = kernel_eval(warped[i], warped[j], h.kernel);
      if (!kt.empty()) v *= kt[obs.task_of(i) * obs.num_tasks + obs.task_of(j)];
      if (i == j) v += h.noise_variance + jitter * h.kernel.amplitude;
      ref.gram[i * n + j] = v;
    }
  }
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = ref.y_std[i] - h.constant_mean;
  ref.alpha = oracle::solve_dense(ref.gram, b);
  const double quad = std::inner_product(b.begin(), b.end(), ref.alpha.begin(), 0.0);
  const double logdet = oracle::log_det_spd(ref.gram, n);
  ref.lml = -0.5 * quad - 0.5 * logdet - 0.5 * static_cast<double>(n) * kLn2Pi;
  return ref;
}

}  // namespace

TEST_SUITE_BEGIN("gp");

TEST_CASE("single-observation fit solves the 1x1 system in standardized units") {
  ObservationSet obs;
  obs.dim = 1;
  obs.add({0.5}, 3.0);
  HyperState h = default_initial_state(1, 1, KernelFamily::kMatern52);
  h.noise_variance = 0.0;
  const PosteriorSample ps = fit(obs, h);
  // One observation standardizes to zero, so the solve vector is zero and
  // the de-standardized prediction returns the training value.
  CHECK(ps.solve_vector()[0] == doctest::Approx(0.0).epsilon(1e-12));
  const auto pred = ps.predict(std::vector<double>{0.5}, 0);
  CHECK(pred.mean == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("diagonal Gram reduces the solve to elementwise division") {
  // Far-apart points with a tiny length scale decouple; alpha is
  // (y_std - m) / (amplitude + noise) elementwise.
  ObservationSet obs;
  obs.dim = 1;
  obs.add({0.0}, 3.0);
  obs.add({1.0}, -3.0);
  HyperState h = default_initial_state(1, 1, KernelFamily::kSquaredExponential);
  h.kernel.length_scales = {1e-3};
  h.noise_variance = 0.5;
  h.constant_mean = 0.0;
  const PosteriorSample ps = fit(obs, h);
  const double denom = 1.0 + 0.5 + ps.jitter_used();
  CHECK(ps.solve_vector()[0] == doctest::Approx(1.0 / denom).epsilon(1e-10));
  CHECK(ps.solve_vector()[1] == doctest::Approx(-1.0 / denom).epsilon(1e-10));
}

TEST_CASE("cholesky factor reconstructs the noisy Gram") {
  warpbo::RngStream rng(101);
  const ObservationSet obs = random_obs(12, 2, rng);
  const HyperState h = random_hyper(2, 1, true, rng);
  const PosteriorSample ps = fit(obs, h);
  const DenseRef ref = dense_reference(obs, h, ps.jitter_used());

  const std::size_t n = obs.size();
  const auto& chol = ps.cholesky_factor();  // column-major lower
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double rec = 0.0;
      for (std::size_t k = 0; k <= std::min(i, j); ++k) {
        rec += chol[k * n + i] * chol[k * n + j];
      }
      err += (rec - ref.gram[i * n + j]) * (rec - ref.gram[i * n + j]);
      norm += ref.gram[i * n + j] * ref.gram[i * n + j];
    }
  }
  CHECK(std::sqrt(err / norm) <= 1e-8);
}

TEST_CASE("fit, predict, and log marginal likelihood match the dense oracle") {
  warpbo::RngStream rng(102);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = 2 + rng.next_u64() % 11;
    const std::size_t dim = 1 + rng.next_u64() % 4;
    const bool warped = rep % 2 == 0;
    const ObservationSet obs = random_obs(n, dim, rng);
    const HyperState h = random_hyper(dim, 1, warped, rng);

    const PosteriorSample ps = fit(obs, h);
    const DenseRef ref = dense_reference(obs, h, ps.jitter_used());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(ps.solve_vector()[i] == doctest::Approx(ref.alpha[i]).epsilon(1e-8));
    }

    CHECK(log_marginal_likelihood(obs, h) == doctest::Approx(ref.lml).epsilon(1e-8));

    // Random query against the oracle predictive equations.
    std::vector<double> q(dim);
    for (double& v : q) v = rng.uniform();
    const auto pred = ps.predict(q, 0);
    const std::vector<double> wq = warp_point(q, h.warpings[0]);
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) {
      k[i] = kernel_eval(warp_point(obs.points[i], h.warpings[0]), wq, h.kernel);
    }
    double mean_std = h.constant_mean;
    for (std::size_t i = 0; i < n; ++i) mean_std += k[i] * ref.alpha[i];
    const std::vector<double> v = oracle::solve_dense(ref.gram, k);
    double var_std = h.kernel.amplitude + h.noise_variance;
    for (std::size_t i = 0; i < n; ++i) var_std -= k[i] * v[i];
    var_std = std::max(var_std, 0.0);

    CHECK(pred.mean ==
          doctest::Approx(ref.stdz.mean + ref.stdz.stddev * mean_std).epsilon(1e-8));
    CHECK(pred.variance ==
          doctest::Approx(ref.stdz.stddev * ref.stdz.stddev * var_std)
              .epsilon(1e-7)
              .scale(1.0));
  }
}

TEST_CASE("multi-task fit matches the dense oracle") {
  warpbo::RngStream rng(103);
  for (int rep = 0; rep < 10; ++rep) {
    const std::size_t n = 6 + rng.next_u64() % 6;
    const ObservationSet obs = random_obs(n, 2, rng, 2);
    const HyperState h = random_hyper(2, 2, true, rng);
    const PosteriorSample ps = fit(obs, h);
    const DenseRef ref = dense_reference(obs, h, ps.jitter_used());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(ps.solve_vector()[i] == doctest::Approx(ref.alpha[i]).epsilon(1e-8));
    }
    CHECK(log_marginal_likelihood(obs, h) == doctest::Approx(ref.lml).epsilon(1e-8));
  }
}

TEST_CASE("noise-free fit interpolates the training data") {
  warpbo::RngStream rng(104);
  ObservationSet obs = random_obs(10, 2, rng);
  HyperState h = random_hyper(2, 1, true, rng);
  h.noise_variance = 0.0;
  h.kernel.length_scales = {0.4, 0.4};
  const PosteriorSample ps = fit(obs, h);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto pred = ps.predict(obs.points[i], 0);
    CHECK(std::fabs(pred.mean - obs.values[i]) <=
          1e-6 * (1.0 + std::fabs(obs.values[i])));
    CHECK(pred.variance >= 0.0);
    CHECK(pred.variance <= 1e-6);
  }
}

TEST_CASE("far queries revert to the prior") {
  ObservationSet obs;
  obs.dim = 1;
  obs.add({0.0}, 1.0);
  obs.add({0.05}, 3.0);
  HyperState h = default_initial_state(1, 1, KernelFamily::kSquaredExponential);
  h.kernel.length_scales = {1e-3};
  h.constant_mean = 0.25;
  h.noise_variance = 0.1;
  const PosteriorSample ps = fit(obs, h);
  const auto pred = ps.predict(std::vector<double>{1.0}, 0);
  const Standardization s = standardize(obs);
  CHECK(pred.mean == doctest::Approx(s.mean + s.stddev * 0.25).epsilon(1e-9));
  CHECK(pred.variance ==
        doctest::Approx(s.stddev * s.stddev * (1.0 + 0.1)).epsilon(1e-9));
}

TEST_CASE("identity warps leave training inputs untouched bit-for-bit") {
  warpbo::RngStream rng(105);
  const ObservationSet obs = random_obs(8, 3, rng);
  const HyperState h = random_hyper(3, 1, false, rng);
  const PosteriorSample ps = fit(obs, h);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(ps.warped_inputs()[d * obs.size() + i] == obs.points[i][d]);
    }
  }
}

TEST_CASE("log marginal likelihood is invariant under row permutations") {
  warpbo::RngStream rng(106);
  ObservationSet obs = random_obs(9, 2, rng);
  const HyperState h = random_hyper(2, 1, true, rng);
  const double base = log_marginal_likelihood(obs, h);

  ObservationSet shuffled;
  shuffled.dim = obs.dim;
  shuffled.num_tasks = 1;
  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.next_u64() % i]);
  }
  for (std::size_t i : order) shuffled.add(obs.points[i], obs.values[i]);
  CHECK(log_marginal_likelihood(shuffled, h) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("predictive variance is nonnegative over random fits") {
  warpbo::RngStream rng(107);
  for (int rep = 0; rep < 5; ++rep) {
    const ObservationSet obs = random_obs(20, 2, rng);
    const HyperState h = random_hyper(2, 1, true, rng);
    const PosteriorSample ps = fit(obs, h);
    for (int q = 0; q < 200; ++q) {
      const std::vector<double> x = {rng.uniform(), rng.uniform()};
      CHECK(ps.predict(x, 0).variance >= 0.0);
    }
  }
}

TEST_CASE("repeated-evaluation path agrees with the one-shot path") {
  warpbo::RngStream rng(108);
  const ObservationSet obs = random_obs(14, 3, rng);
  MarginalLikelihoodEvaluator eval(obs);
  HyperState h = random_hyper(3, 1, true, rng);
  for (int i = 0; i < 20; ++i) {
    // Mutate one coordinate at a time, as the sampler does.
    switch (i % 5) {
      case 0: h.kernel.amplitude = std::exp(rng.uniform(-0.5, 0.5)); break;
      case 1: h.kernel.length_scales[i % 3] = std::exp(rng.uniform(-1.5, 0.3)); break;
      case 2: h.noise_variance = std::exp(rng.uniform(-8.0, -2.0)); break;
      case 3: h.constant_mean = rng.uniform(-0.5, 0.5); break;
      case 4:
        h.warpings[0].shapes[i % 3] =
            BetaShape(std::exp(rng.uniform(-0.8, 0.8)), std::exp(rng.uniform(-0.8, 0.8)));
        break;
    }
    CHECK(eval.log_marginal(h) ==
          doctest::Approx(log_marginal_likelihood(obs, h)).epsilon(1e-11));
  }
}

TEST_CASE("input validation") {
  ObservationSet obs;
  obs.dim = 2;
  CHECK_THROWS_AS(obs.add({0.5, 1.5}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(obs.add({0.5, 0.5}, std::nan("")), std::invalid_argument);
  obs.add({0.5, 0.5}, 1.0);
  HyperState h = default_initial_state(2, 1, KernelFamily::kMatern52);
  h.noise_variance = -1.0;
  CHECK_THROWS_AS(fit(obs, h), std::invalid_argument);
  h.noise_variance = 0.0;
  h.warpings.clear();
  CHECK_THROWS_AS(fit(obs, h), std::invalid_argument);
}

TEST_SUITE_END();
