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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommandResult {
  int exit_code;
  std::string out;
};

CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(WARPBO_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (fgets(buf, sizeof(buf), pipe) != nullptr) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("warpbo_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

const char* kConfig2d = R"({
  "version": 1,
  "seed": 7,
  "space": {"dims": [
    {"name": "x1", "lower": -2.0, "upper": 2.0},
    {"name": "x2", "lower": 0.0, "upper": 5.0}
  ]},
  "sampler": {"burn_in": 6, "num_samples": 3, "resample_burn_in": 3},
  "acquisition": {"budget_per_dim": 200}
})";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("suggest on a fresh experiment prints an in-bounds point") {
  TempDir dir;
  write_file(dir.file("config.json"), kConfig2d);
  const auto res = run_cli("suggest --config " + dir.file("config.json") + " --state " +
                           dir.file("state.json"));
  CHECK(res.exit_code == 0);
  const json record = json::parse(res.out);
  CHECK(record.at("task") == "default");
  const double x1 = record.at("point").at("x1").get<double>();
  const double x2 = record.at("point").at("x2").get<double>();
  CHECK(x1 >= -2.0);
  CHECK(x1 <= 2.0);
  CHECK(x2 >= 0.0);
  CHECK(x2 <= 5.0);
  CHECK(fs::exists(dir.file("state.json")));

  // Same state, no observe: identical suggestion.
  const auto res2 = run_cli("suggest --config " + dir.file("config.json") + " --state " +
                            dir.file("state.json"));
  CHECK(res2.exit_code == 0);
  CHECK(res2.out == res.out);
}

TEST_CASE("config schema error exits 2") {
  TempDir dir;
  write_file(dir.file("config.json"), R"({"version": 1, "unknown_key": 1,
    "space": {"dims": [{"name": "x", "lower": 0, "upper": 1}]}})");
  const auto res = run_cli("suggest --config " + dir.file("config.json") + " --state " +
                           dir.file("state.json"));
  CHECK(res.exit_code == 2);
}

TEST_CASE("corrupt state exits 3 and leaves the file untouched") {
  TempDir dir;
  write_file(dir.file("config.json"), kConfig2d);
  write_file(dir.file("state.json"), "{broken");
  const std::string before = read_file(dir.file("state.json"));
  const auto res = run_cli("suggest --config " + dir.file("config.json") + " --state " +
                           dir.file("state.json"));
  CHECK(res.exit_code == 3);
  CHECK(read_file(dir.file("state.json")) == before);
}

TEST_CASE("observe records values and rejects bad ones") {
  TempDir dir;
  write_file(dir.file("config.json"), kConfig2d);
  const std::string state = dir.file("state.json");
  auto res = run_cli("observe --config " + dir.file("config.json") + " --state " + state +
                     " --point '{\"x1\": 0.5, \"x2\": 1.5}' --value 3.25");
  CHECK(res.exit_code == 0);

  // Round-trip: reload and check the incumbent via another observe + suggest.
  res = run_cli("observe --state " + state + " --point '{\"x1\": -1.0, \"x2\": 0.5}'" +
                " --value 1.0");
  CHECK(res.exit_code == 0);
  const json state_json = json::parse(read_file(state));
  CHECK(state_json.at("observations").size() == 2);
  CHECK(state_json.at("observations").at(1).at("y").get<double>() == 1.0);

  const std::string before = read_file(state);
  res = run_cli("observe --state " + state + " --point '{\"x1\": 0.0, \"x2\": 0.0}'" +
                " --value nan");
  CHECK(res.exit_code == 4);
  CHECK(read_file(state) == before);

  res = run_cli("observe --state " + state + " --point '{\"x1\": 99.0, \"x2\": 0.0}'" +
                " --value 1.0");
  CHECK(res.exit_code == 4);
  res = run_cli("observe --state " + state + " --point '{\"x1\": 0.0, \"bogus\": 0.0}'" +
                " --value 1.0");
  CHECK(res.exit_code == 4);
  CHECK(read_file(state) == before);
}

TEST_CASE("run drives an external objective and writes a trace") {
  TempDir dir;
  // Objective: reads the JSON request, answers a fixed quadratic.
  const std::string obj = dir.file("objective.py");
  write_file(obj, R"(import json, sys
req = json.loads(sys.stdin.readline())
p = req["params"]
print((p["x1"] - 0.25) ** 2 + (p["x2"] - 2.0) ** 2)
)");
  json cfg = json::parse(kConfig2d);
  cfg["objective"]["command"] = {"python3", obj};
  write_file(dir.file("config.json"), cfg.dump());

  const std::string trace = dir.file("trace.csv");
  const auto res = run_cli("run --config " + dir.file("config.json") + " --state " +
                           dir.file("state.json") + " --trace " + trace + " --max-evals 6");
  CHECK(res.exit_code == 0);
  const json summary = json::parse(res.out);
  CHECK(summary.at("evaluations").get<int>() == 6);
  CHECK(summary.at("best").get<double>() >= 0.0);

  std::ifstream tr(trace);
  std::string header;
  std::getline(tr, header);
  CHECK(header == "iteration,task,x1,x2,y,best");
  int rows = 0;
  std::string line;
  while (std::getline(tr, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 6);
}

TEST_CASE("run with max-evals 0 writes an empty trace and exits 0") {
  TempDir dir;
  json cfg = json::parse(kConfig2d);
  cfg["objective"]["command"] = {"true"};
  write_file(dir.file("config.json"), cfg.dump());
  const std::string trace = dir.file("trace.csv");
  const auto res = run_cli("run --config " + dir.file("config.json") + " --trace " + trace +
                           " --max-evals 0");
  CHECK(res.exit_code == 0);
  std::ifstream tr(trace);
  std::string header, rest;
  std::getline(tr, header);
  CHECK(header == "iteration,task,x1,x2,y,best");
  CHECK_FALSE(std::getline(tr, rest));
}

TEST_CASE("run survives an objective that prints garbage") {
  TempDir dir;
  json cfg = json::parse(kConfig2d);
  cfg["objective"]["command"] = {"echo", "not-a-number"};
  write_file(dir.file("config.json"), cfg.dump());
  const auto res = run_cli("run --config " + dir.file("config.json") + " --max-evals 2");
  CHECK(res.exit_code == 0);
  const json summary = json::parse(res.out);
  CHECK(summary.at("evaluations").get<int>() == 0);
}

TEST_CASE("bench emits a machine-readable summary and identical reruns") {
  TempDir dir;
  const std::string args = "bench --benchmark branin --evals 6 --repeats 2 --warping off "
                           "--seed 5 --out-dir " +
                           dir.file("traces");
  const auto res = run_cli(args);
  CHECK(res.exit_code == 0);
  const json summary = json::parse(res.out);
  CHECK(summary.at("benchmark") == "branin");
  CHECK(summary.at("repeats").get<int>() == 2);
  CHECK(summary.at("per_run_best").size() == 2);
  CHECK(summary.at("mean_best").get<double>() > 0.39);

  const std::string t0 = read_file(dir.file("traces/branin_warp-off_run0.csv"));
  const std::string t1 = read_file(dir.file("traces/branin_warp-off_run1.csv"));
  CHECK_FALSE(t0.empty());

  const auto res2 = run_cli(args);
  CHECK(res2.out == res.out);
  CHECK(read_file(dir.file("traces/branin_warp-off_run0.csv")) == t0);
  CHECK(read_file(dir.file("traces/branin_warp-off_run1.csv")) == t1);

  // repeats=1 reports sd 0.
  const auto res3 = run_cli("bench --benchmark branin --evals 5 --repeats 1 --warping off");
  const json s3 = json::parse(res3.out);
  CHECK(s3.at("sd_best").get<double>() == 0.0);

  const auto bad = run_cli("bench --benchmark nope --evals 5");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("export-warpings") {
  TempDir dir;
  write_file(dir.file("config.json"), R"({
    "version": 1, "seed": 3,
    "space": {"dims": [{"name": "x1", "lower": 0.0, "upper": 1.0}]},
    "sampler": {"burn_in": 5, "num_samples": 4, "resample_burn_in": 2},
    "acquisition": {"budget_per_dim": 100},
    "init_count": 2
  })");
  const std::string state = dir.file("state.json");

  // No samples yet: export must exit 5.
  auto res = run_cli("suggest --config " + dir.file("config.json") + " --state " + state);
  CHECK(res.exit_code == 0);
  res = run_cli("export-warpings --state " + state + " --out " + dir.file("curves.csv") +
                " --grid 17");
  CHECK(res.exit_code == 5);

  // Feed some observations until the sampler runs, then export.
  for (const char* obs :
       {"--point '{\"x1\": 0.5}' --value 2.0", "--point '{\"x1\": 0.75}' --value 1.0",
        "--point '{\"x1\": 0.25}' --value 3.0"}) {
    res = run_cli("observe --state " + state + " " + obs);
    CHECK(res.exit_code == 0);
  }
  res = run_cli("suggest --config " + dir.file("config.json") + " --state " + state);
  CHECK(res.exit_code == 0);
  res = run_cli("export-warpings --state " + state + " --out " + dir.file("curves.csv") +
                " --grid 17");
  CHECK(res.exit_code == 0);

  std::ifstream curves(dir.file("curves.csv"));
  std::string header;
  std::getline(curves, header);
  CHECK(header == "x,default.x1.mean,default.x1.sd");
  int rows = 0;
  std::string line;
  while (std::getline(curves, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 17);
}

TEST_CASE("seed precedence: flag over environment over config") {
  TempDir dir;
  write_file(dir.file("config.json"), kConfig2d);

  // Observe past the init phase so suggestions depend on the seed.
  const std::string state_a = dir.file("a.json");
  const std::string state_b = dir.file("b.json");
  const std::string state_c = dir.file("c.json");
  for (const std::string& st : {state_a, state_b, state_c}) {
    for (const char* obs :
         {"--point '{\"x1\": -1.0, \"x2\": 1.0}' --value 4.0",
          "--point '{\"x1\": 1.0, \"x2\": 4.0}' --value 2.0",
          "--point '{\"x1\": 0.0, \"x2\": 2.5}' --value 1.0"}) {
      const auto res = run_cli("observe --config " + dir.file("config.json") + " --state " +
                               st + " " + obs);
      REQUIRE(res.exit_code == 0);
    }
  }
  const auto flag_run =
      run_cli("--seed 1234 suggest --config " + dir.file("config.json") + " --state " + state_a);
  CHECK(flag_run.exit_code == 0);

  ::setenv("WARPBO_SEED", "1234", 1);
  const auto env_run =
      run_cli("suggest --config " + dir.file("config.json") + " --state " + state_b);
  ::unsetenv("WARPBO_SEED");
  CHECK(env_run.exit_code == 0);
  // Flag and env agree when they carry the same value.
  CHECK(env_run.out == flag_run.out);

  const auto cfg_run =
      run_cli("suggest --config " + dir.file("config.json") + " --state " + state_c);
  CHECK(cfg_run.exit_code == 0);
  CHECK(cfg_run.out != flag_run.out);  // config seed 7 differs from 1234
}

TEST_SUITE_END();
