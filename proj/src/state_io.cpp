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

#include "warpbo/state_io.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace warpbo {
namespace {

using nlohmann::json;

constexpr int kConfigVersion = 1;
constexpr int kStateVersion = 1;

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& context) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ConfigError("unknown key '" + item.key() + "' in " + context);
    }
  }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) {
    throw ConfigError("missing key '" + std::string(key) + "' in " + context);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for key '" + std::string(key) + "' in " + context);
  }
}

template <typename T>
T optional_of(const json& obj, const char* key, T fallback, const std::string& context) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for key '" + std::string(key) + "' in " + context);
  }
}

SearchSpace parse_space(const json& j) {
  if (!j.is_object()) throw ConfigError("'space' must be an object");
  check_keys(j, {"dims", "tasks"}, "space");
  SearchSpace space;
  if (!j.contains("dims") || !j.at("dims").is_array() || j.at("dims").empty()) {
    throw ConfigError("'space.dims' must be a nonempty array");
  }
  space.dims.clear();
  for (const auto& dj : j.at("dims")) {
    if (!dj.is_object()) throw ConfigError("every entry of 'space.dims' must be an object");
    check_keys(dj, {"name", "lower", "upper", "log"}, "space.dims[]");
    DimSpec d;
    d.name = require<std::string>(dj, "name", "space.dims[]");
    d.lower = require<double>(dj, "lower", "space.dims[]");
    d.upper = require<double>(dj, "upper", "space.dims[]");
    d.log_scale = optional_of<bool>(dj, "log", false, "space.dims[]");
    space.dims.push_back(std::move(d));
  }
  if (j.contains("tasks")) {
    if (!j.at("tasks").is_array() || j.at("tasks").empty()) {
      throw ConfigError("'space.tasks' must be a nonempty array of names");
    }
    space.tasks.clear();
    for (const auto& t : j.at("tasks")) {
      if (!t.is_string()) throw ConfigError("'space.tasks' entries must be strings");
      space.tasks.push_back(t.get<std::string>());
    }
  }
  try {
    space.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid search space: ") + e.what());
  }
  return space;
}

WarpingPrior parse_warping_prior(const json& j, const std::string& context) {
  check_keys(j, {"mu_alpha", "sigma_alpha", "mu_beta", "sigma_beta"}, context);
  WarpingPrior p;
  p.mu_alpha = require<double>(j, "mu_alpha", context);
  p.sigma_alpha = require<double>(j, "sigma_alpha", context);
  p.mu_beta = require<double>(j, "mu_beta", context);
  p.sigma_beta = require<double>(j, "sigma_beta", context);
  return p;
}

EngineConfig parse_engine_config(const json& j) {
  EngineConfig cfg;
  if (j.contains("kernel")) {
    try {
      cfg.kernel_family = kernel_family_from_name(require<std::string>(j, "kernel", "config"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("warping")) {
    const json& w = j.at("warping");
    if (!w.is_object()) throw ConfigError("'warping' must be an object");
    check_keys(w, {"enabled", "preset", "per_dim"}, "warping");
    cfg.warping.enabled = optional_of<bool>(w, "enabled", true, "warping");
    cfg.warping.preset = optional_of<std::string>(w, "preset", "default", "warping");
    if (w.contains("per_dim")) {
      if (!w.at("per_dim").is_array()) throw ConfigError("'warping.per_dim' must be an array");
      for (const auto& pj : w.at("per_dim")) {
        cfg.warping.per_dim.push_back(parse_warping_prior(pj, "warping.per_dim[]"));
      }
    }
  }
  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    if (!s.is_object()) throw ConfigError("'sampler' must be an object");
    check_keys(s,
               {"burn_in", "resample_burn_in", "num_samples", "thin", "max_stepout",
                "initial_width"},
               "sampler");
    cfg.sampler.burn_in = optional_of<int>(s, "burn_in", cfg.sampler.burn_in, "sampler");
    cfg.resample_burn_in =
        optional_of<int>(s, "resample_burn_in", cfg.resample_burn_in, "sampler");
    cfg.sampler.num_samples =
        optional_of<int>(s, "num_samples", cfg.sampler.num_samples, "sampler");
    cfg.sampler.thin = optional_of<int>(s, "thin", cfg.sampler.thin, "sampler");
    cfg.sampler.max_stepout =
        optional_of<int>(s, "max_stepout", cfg.sampler.max_stepout, "sampler");
    cfg.sampler.initial_width =
        optional_of<double>(s, "initial_width", cfg.sampler.initial_width, "sampler");
  }
  if (j.contains("acquisition")) {
    const json& a = j.at("acquisition");
    if (!a.is_object()) throw ConfigError("'acquisition' must be an object");
    check_keys(a, {"budget_per_dim"}, "acquisition");
    cfg.acquisition.budget_per_dim = optional_of<std::uint64_t>(
        a, "budget_per_dim", cfg.acquisition.budget_per_dim, "acquisition");
  }
  cfg.init_count = optional_of<int>(j, "init_count", cfg.init_count, "config");
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return cfg;
}

json engine_config_to_json(const EngineConfig& cfg) {
  json j;
  j["kernel"] = kernel_family_name(cfg.kernel_family);
  json w;
  w["enabled"] = cfg.warping.enabled;
  w["preset"] = cfg.warping.preset;
  if (!cfg.warping.per_dim.empty()) {
    json arr = json::array();
    for (const auto& p : cfg.warping.per_dim) {
      arr.push_back({{"mu_alpha", p.mu_alpha},
                     {"sigma_alpha", p.sigma_alpha},
                     {"mu_beta", p.mu_beta},
                     {"sigma_beta", p.sigma_beta}});
    }
    w["per_dim"] = std::move(arr);
  }
  j["warping"] = std::move(w);
  j["sampler"] = {{"burn_in", cfg.sampler.burn_in},
                  {"resample_burn_in", cfg.resample_burn_in},
                  {"num_samples", cfg.sampler.num_samples},
                  {"thin", cfg.sampler.thin},
                  {"max_stepout", cfg.sampler.max_stepout},
                  {"initial_width", cfg.sampler.initial_width}};
  j["acquisition"] = {{"budget_per_dim", cfg.acquisition.budget_per_dim}};
  j["init_count"] = cfg.init_count;
  return j;
}

json space_to_json(const SearchSpace& space) {
  json dims = json::array();
  for (const auto& d : space.dims) {
    dims.push_back(
        {{"name", d.name}, {"lower", d.lower}, {"upper", d.upper}, {"log", d.log_scale}});
  }
  return {{"dims", std::move(dims)}, {"tasks", space.tasks}};
}

json hyperstate_to_json(const HyperState& h) {
  json j;
  j["amplitude"] = h.kernel.amplitude;
  j["length_scales"] = h.kernel.length_scales;
  j["family"] = kernel_family_name(h.kernel.family);
  j["noise_variance"] = h.noise_variance;
  j["constant_mean"] = h.constant_mean;
  json warps = json::array();
  for (const auto& w : h.warpings) {
    json shapes = json::array();
    for (const auto& s : w.shapes) shapes.push_back({s.alpha(), s.beta()});
    warps.push_back(std::move(shapes));
  }
  j["warpings"] = std::move(warps);
  if (h.task_cov.has_value()) {
    j["task_angles"] = h.task_cov->angles;
    j["task_scales"] = h.task_cov->scales;
  }
  return j;
}

HyperState hyperstate_from_json(const json& j) {
  check_keys(j,
             {"amplitude", "length_scales", "family", "noise_variance", "constant_mean",
              "warpings", "task_angles", "task_scales"},
             "sampler_state[]");
  HyperState h;
  h.kernel.amplitude = require<double>(j, "amplitude", "sampler_state[]");
  h.kernel.length_scales = require<std::vector<double>>(j, "length_scales", "sampler_state[]");
  h.kernel.family = kernel_family_from_name(require<std::string>(j, "family", "sampler_state[]"));
  h.noise_variance = require<double>(j, "noise_variance", "sampler_state[]");
  h.constant_mean = require<double>(j, "constant_mean", "sampler_state[]");
  const json& warps = j.at("warpings");
  for (const auto& wj : warps) {
    WarpingParams w;
    for (const auto& sj : wj) {
      if (!sj.is_array() || sj.size() != 2) {
        throw StateError("warping shapes must be [alpha, beta] pairs");
      }
      w.shapes.emplace_back(sj[0].get<double>(), sj[1].get<double>());
    }
    h.warpings.push_back(std::move(w));
  }
  if (j.contains("task_angles")) {
    TaskCovariance tc;
    tc.num_tasks = h.warpings.size();
    tc.angles = require<std::vector<double>>(j, "task_angles", "sampler_state[]");
    tc.scales = require<std::vector<double>>(j, "task_scales", "sampler_state[]");
    h.task_cov = std::move(tc);
  }
  return h;
}

}  // namespace

ExperimentSetup parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j,
             {"version", "seed", "space", "kernel", "warping", "sampler", "acquisition",
              "init_count", "objective"},
             "config");
  const int version = require<int>(j, "version", "config");
  if (version != kConfigVersion) {
    throw ConfigError("unsupported config version " + std::to_string(version));
  }
  ExperimentSetup setup;
  if (!j.contains("space")) throw ConfigError("missing key 'space' in config");
  setup.space = parse_space(j.at("space"));
  setup.config = parse_engine_config(j);
  setup.seed = optional_of<std::uint64_t>(j, "seed", 0, "config");
  if (j.contains("objective")) {
    const json& o = j.at("objective");
    if (!o.is_object()) throw ConfigError("'objective' must be an object");
    check_keys(o, {"command"}, "objective");
    setup.objective.command =
        require<std::vector<std::string>>(o, "command", "objective");
    if (setup.objective.command.empty()) {
      throw ConfigError("'objective.command' must be a nonempty argv array");
    }
  }
  if (setup.config.warping.per_dim.size() > 0 &&
      setup.config.warping.per_dim.size() != setup.space.dim()) {
    throw ConfigError("'warping.per_dim' must list one prior per dimension");
  }
  return setup;
}

ExperimentSetup load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_state(const ExperimentState& state) {
  json j;
  j["version"] = kStateVersion;
  j["seed"] = state.seed;
  j["space"] = space_to_json(state.space);
  j["config"] = engine_config_to_json(state.config);
  json obs = json::array();
  for (const auto& o : state.observations) {
    obs.push_back({{"task", o.task}, {"x", o.x}, {"y", o.y}});
  }
  j["observations"] = std::move(obs);
  json samples = json::array();
  for (const auto& h : state.sampler_state) samples.push_back(hyperstate_to_json(h));
  j["sampler_state"] = std::move(samples);
  j["sampler_counter"] = state.sampler_counter;
  j["iteration"] = state.iteration;
  j["failed_attempts"] = state.failed_attempts;
  return j.dump(2) + "\n";
}

ExperimentState parse_state_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw StateError(std::string("state is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw StateError("state root must be an object");
    check_keys(j,
               {"version", "seed", "space", "config", "observations", "sampler_state",
                "sampler_counter", "iteration", "failed_attempts"},
               "state");
    const int version = require<int>(j, "version", "state");
    if (version != kStateVersion) {
      throw StateError("unsupported state version " + std::to_string(version));
    }
    ExperimentState state;
    state.space = parse_space(j.at("space"));
    state.config = parse_engine_config(j.at("config"));
    state.seed = require<std::uint64_t>(j, "seed", "state");
    for (const auto& oj : j.at("observations")) {
      check_keys(oj, {"task", "x", "y"}, "observations[]");
      Observation o;
      o.task = require<std::uint64_t>(oj, "task", "observations[]");
      o.x = require<std::vector<double>>(oj, "x", "observations[]");
      o.y = require<double>(oj, "y", "observations[]");
      if (o.task >= state.space.num_tasks()) throw StateError("observation task out of range");
      if (o.x.size() != state.space.dim()) throw StateError("observation dimension mismatch");
      state.observations.push_back(std::move(o));
    }
    for (const auto& hj : j.at("sampler_state")) {
      state.sampler_state.push_back(hyperstate_from_json(hj));
    }
    state.sampler_counter = require<std::uint64_t>(j, "sampler_counter", "state");
    state.iteration = require<std::uint64_t>(j, "iteration", "state");
    state.failed_attempts = require<std::uint64_t>(j, "failed_attempts", "state");
    return state;
  } catch (const ConfigError& e) {
    throw StateError(e.what());
  } catch (const json::exception& e) {
    throw StateError(std::string("malformed state: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw StateError(e.what());
  } catch (const std::out_of_range& e) {
    throw StateError(e.what());
  }
}

ExperimentState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StateError("cannot open state file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state_text(ss.str());
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write temporary file: " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + tmp + " -> " + path);
  }
}

void save_state_file(const ExperimentState& state, const std::string& path) {
  atomic_write_file(path, serialize_state(state));
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace warpbo
