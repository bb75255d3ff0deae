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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "warpbo/rng.hpp"
#include "warpbo/state_io.hpp"

using namespace warpbo;

namespace {

const char* kGoodConfig = R"({
  "version": 1,
  "seed": 42,
  "space": {
    "dims": [
      {"name": "lr", "lower": 0.001, "upper": 1.0, "log": true},
      {"name": "reg", "lower": 0.0, "upper": 10.0}
    ],
    "tasks": ["small", "large"]
  },
  "kernel": "matern52",
  "warping": {"enabled": true, "preset": "default"},
  "sampler": {"burn_in": 12, "num_samples": 5, "thin": 2, "max_stepout": 6,
              "initial_width": 0.9, "resample_burn_in": 3},
  "acquisition": {"budget_per_dim": 500},
  "init_count": 3,
  "objective": {"command": ["python3", "obj.py"]}
})";

}  // namespace

TEST_SUITE_BEGIN("state_io");

TEST_CASE("config parsing") {
  const ExperimentSetup setup = parse_config_text(kGoodConfig);
  CHECK(setup.seed == 42);
  CHECK(setup.space.dim() == 2);
  CHECK(setup.space.dims[0].log_scale);
  CHECK(setup.space.tasks == std::vector<std::string>{"small", "large"});
  CHECK(setup.config.sampler.burn_in == 12);
  CHECK(setup.config.sampler.num_samples == 5);
  CHECK(setup.config.resample_burn_in == 3);
  CHECK(setup.config.acquisition.budget_per_dim == 500);
  CHECK(setup.config.init_count == 3);
  CHECK(setup.objective.command.size() == 2);
}

TEST_CASE("config schema rejections") {
  CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[1,2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(R"({"version": 2, "space": {"dims": []}})"), ConfigError);
  // Unknown keys at several levels.
  CHECK_THROWS_AS(parse_config_text(R"({"version": 1, "spce": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"version": 1,
                          "space": {"dims": [{"name": "x", "lower": 0, "upper": 1,
                                              "stride": 2}]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"version": 1,
                          "space": {"dims": [{"name": "x", "lower": 0, "upper": 1}]},
                          "sampler": {"burnin": 2}})"),
                  ConfigError);
  // Missing version.
  CHECK_THROWS_AS(parse_config_text(
                      R"({"space": {"dims": [{"name": "x", "lower": 0, "upper": 1}]}})"),
                  ConfigError);
  // Bad types.
  CHECK_THROWS_AS(parse_config_text(
                      R"({"version": 1,
                          "space": {"dims": [{"name": "x", "lower": "a", "upper": 1}]}})"),
                  ConfigError);
  // Invalid values caught by validation.
  CHECK_THROWS_AS(parse_config_text(
                      R"({"version": 1,
                          "space": {"dims": [{"name": "x", "lower": 1, "upper": 0}]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"version": 1, "init_count": 0,
                          "space": {"dims": [{"name": "x", "lower": 0, "upper": 1}]}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text(
                      R"({"version": 1, "objective": {"command": []},
                          "space": {"dims": [{"name": "x", "lower": 0, "upper": 1}]}})"),
                  ConfigError);
}

TEST_CASE("state serialization round-trips byte-for-byte") {
  const ExperimentSetup setup = parse_config_text(kGoodConfig);
  ExperimentState state = make_experiment(setup.space, setup.config, setup.seed);
  state = observe(std::move(state), "small", std::vector<double>{0.01, 3.25}, -1.5e-7);
  state = observe(std::move(state), "large", std::vector<double>{0.5, 9.999}, 123456.789);

  HyperState h = default_initial_state(2, 2, KernelFamily::kMatern52);
  h.kernel.amplitude = 1.2345678901234567;
  h.noise_variance = 3.2e-11;
  h.constant_mean = -0.75;
  h.warpings[1].shapes[0] = BetaShape(2.5, 0.3333333333333333);
  h.task_cov->angles = {0.7853981633974483};
  state.sampler_state = {h};
  state.sampler_counter = 17;

  const std::string bytes = serialize_state(state);
  const ExperimentState reloaded = parse_state_text(bytes);
  CHECK(serialize_state(reloaded) == bytes);
  CHECK(reloaded.observations.size() == 2);
  CHECK(reloaded.observations[0].y == -1.5e-7);
  CHECK(reloaded.sampler_state.size() == 1);
  CHECK(reloaded.sampler_state[0].kernel.amplitude == 1.2345678901234567);
  CHECK(reloaded.sampler_state[0].task_cov->angles[0] == 0.7853981633974483);
  CHECK(reloaded.sampler_counter == 17);
}

TEST_CASE("state parsing rejects corruption") {
  CHECK_THROWS_AS(parse_state_text("{{{"), StateError);
  CHECK_THROWS_AS(parse_state_text("{}"), StateError);
  CHECK_THROWS_AS(parse_state_text(R"({"version": 9})"), StateError);

  const ExperimentSetup setup = parse_config_text(kGoodConfig);
  ExperimentState state = make_experiment(setup.space, setup.config, setup.seed);
  std::string bytes = serialize_state(state);
  bytes.replace(bytes.find("\"version\""), 9, "\"versoin\"");
  CHECK_THROWS_AS(parse_state_text(bytes), StateError);
}

TEST_CASE("format_double round-trips bit-exactly") {
  RngStream rng(601);
  for (int i = 0; i < 2000; ++i) {
    double v;
    switch (i % 4) {
      case 0: v = rng.normal(0.0, 1e-12); break;
      case 1: v = rng.normal(0.0, 1.0); break;
      case 2: v = rng.normal(0.0, 1e12); break;
      default: v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.next_u64() % 600) - 300);
    }
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("atomic_write_file replaces content and leaves no temp file") {
  const std::string path = std::filesystem::temp_directory_path() / "warpbo_atomic_test.txt";
  atomic_write_file(path, "first");
  atomic_write_file(path, "second");
  std::ifstream in(path);
  std::string content;
  std::getline(in, content);
  CHECK(content == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}

TEST_SUITE_END();
