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

#include <cmath>

#include <doctest.h>

#include "warpbo/acquisition.hpp"
#include "warpbo/rng.hpp"
#include "warpbo/slice_sampler.hpp"

using namespace warpbo;

namespace {

// Small real posterior set shared by the maximizer tests.
AcquisitionContext make_context(double noise = 1e-6) {
  ObservationSet obs;
  obs.dim = 1;
  obs.add({0.1}, 1.0);
  obs.add({0.55}, 0.2);
  obs.add({0.95}, 0.8);
  HyperState h = default_initial_state(1, 1, KernelFamily::kMatern52);
  h.kernel.length_scales = {0.25};
  h.noise_variance = noise;
  AcquisitionContext ctx;
  ctx.posteriors.push_back(fit(obs, h));
  h.kernel.length_scales = {0.4};
  ctx.posteriors.push_back(fit(obs, h));
  ctx.f_best = 0.2;
  ctx.task = 0;
  return ctx;
}

}  // namespace

TEST_SUITE_BEGIN("acquisition");

TEST_CASE("improvement score arithmetic") {
  CHECK(improvement_score(1.0, 1.0, 1.0) == 0.0);
  CHECK(improvement_score(-1.0, 2.0, 1.0) == doctest::Approx(1.0));
  CHECK(improvement_score(1.3, 0.4, 1.0) == doctest::Approx(-0.75));
  CHECK_THROWS_AS(improvement_score(0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("expected improvement closed-form values") {
  // Zero standardized improvement leaves only the density term.
  CHECK(expected_improvement(1.0, 1.0, 1.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-13));
  CHECK(expected_improvement(5.0, 0.0, 0.0) == 0.0);
  CHECK(expected_improvement(-2.0, 0.0, 0.0) == 2.0);
  CHECK(expected_improvement(0.0, 1e-12, -40.0) == 0.0);
  CHECK_THROWS_AS(expected_improvement(0.0, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("expected improvement matches a Monte-Carlo estimate") {
  // Light version of the acceptance oracle: 1e6 draws, 3 standard errors.
  RngStream rng(301);
  for (int rep = 0; rep < 12; ++rep) {
    const double mean = rng.uniform(-2.0, 2.0);
    const double sd = rng.uniform(0.05, 2.0);
    const double f_best = rng.uniform(-2.0, 2.0);
    const int n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = mean + sd * rng.normal();
      const double imp = z < f_best ? f_best - z : 0.0;
      sum += imp;
      sum_sq += imp * imp;
    }
    const double mc = sum / n;
    const double se = std::sqrt((sum_sq / n - mc * mc) / n);
    const double ei = expected_improvement(mean, sd, f_best);
    CHECK(std::fabs(ei - mc) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("expected improvement properties") {
  RngStream rng(302);
  for (int i = 0; i < 200; ++i) {
    const double f_best = rng.uniform(-1.0, 1.0);
    const double mean = f_best + rng.uniform(-3.0, 3.0);
    const double sd = rng.uniform(0.01, 2.0);
    const double ei = expected_improvement(mean, sd, f_best);
    CHECK(ei >= 0.0);

    // Increasing in sd (when the mean is not absurdly far below).
    if (mean > f_best - sd * 10.0) {
      CHECK(expected_improvement(mean, sd * 1.3, f_best) >= ei - 1e-15);
    }
    // Decreasing in mean at fixed sd.
    CHECK(expected_improvement(mean + 0.3, sd, f_best) <= ei + 1e-15);
    // Translation equivariance.
    const double c = rng.uniform(-5.0, 5.0);
    CHECK(std::fabs(expected_improvement(mean + c, sd, f_best + c) - ei) <= 1e-12);
  }
}

TEST_CASE("marginal EI averages the per-posterior values") {
  const AcquisitionContext ctx = make_context();
  const std::vector<double> x = {0.4};

  AcquisitionContext single;
  single.posteriors.push_back(ctx.posteriors[0]);
  single.f_best = ctx.f_best;
  const auto pred = single.posteriors[0].predict(x, 0);
  CHECK(marginal_ei(single, x) ==
        doctest::Approx(expected_improvement(pred.mean, std::sqrt(pred.variance), 0.2))
            .epsilon(1e-13));

  double manual = 0.0;
  for (const auto& ps : ctx.posteriors) {
    const auto p = ps.predict(x, 0);
    manual += expected_improvement(p.mean, std::sqrt(p.variance), ctx.f_best);
  }
  manual /= static_cast<double>(ctx.posteriors.size());
  CHECK(marginal_ei(ctx, x) == doctest::Approx(manual).epsilon(1e-13));

  // Duplicated posterior equals either copy.
  AcquisitionContext twin;
  twin.posteriors = {ctx.posteriors[0], ctx.posteriors[0]};
  twin.f_best = ctx.f_best;
  CHECK(marginal_ei(twin, x) == doctest::Approx(marginal_ei(single, x)).epsilon(1e-13));
}

TEST_CASE("maximize_over_cube finds the argmax of a smooth surface") {
  // Surface with a known interior peak at 0.42.
  const auto fn = [](std::span<const double> x) {
    const double d = x[0] - 0.42;
    return std::exp(-120.0 * d * d);
  };
  RngStream rng(303);
  const auto best = maximize_over_cube(fn, 1, 1000, {}, rng);
  CHECK(std::fabs(best[0] - 0.42) <= 0.01);
}

TEST_CASE("maximize_acquisition tracks a dense-grid argmax") {
  const AcquisitionContext ctx = make_context();
  // Dense grid reference over 1e4 points.
  double grid_best = -1.0, grid_arg = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double x = static_cast<double>(i) / 10000.0;
    const double v = marginal_ei(ctx, std::vector<double>{x});
    if (v > grid_best) {
      grid_best = v;
      grid_arg = x;
    }
  }
  RngStream rng(304);
  const std::vector<std::vector<double>> observed = {{0.1}, {0.55}, {0.95}};
  const auto best = maximize_acquisition(ctx, 1, 1000, observed, rng);
  CHECK(std::fabs(best[0] - grid_arg) <= 0.01);

  // Determinism under an identical stream.
  RngStream rng2(304);
  const auto best2 = maximize_acquisition(ctx, 1, 1000, observed, rng2);
  CHECK(best == best2);
}

TEST_CASE("maximizer output stays inside the unit cube") {
  const auto flat = [](std::span<const double>) { return 0.0; };
  RngStream rng(305);
  for (std::size_t dim : {1ul, 3ul, 6ul}) {
    const auto best = maximize_over_cube(flat, dim, 64, {}, rng);
    REQUIRE(best.size() == dim);
    for (double v : best) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("context validation") {
  AcquisitionContext empty;
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_SUITE_END();
