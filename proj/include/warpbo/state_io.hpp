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

#ifndef WARPBO_STATE_IO_HPP_
#define WARPBO_STATE_IO_HPP_

#include <stdexcept>
#include <string>

#include "warpbo/bo_engine.hpp"

namespace warpbo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// External objective invoked as a subprocess: one JSON record on stdin,
// one real number on stdout.
struct ObjectiveSpec {
  std::vector<std::string> command;
  bool empty() const { return command.empty(); }
};

struct ExperimentSetup {
  SearchSpace space;
  EngineConfig config;
  std::uint64_t seed = 0;
  ObjectiveSpec objective;
};

// Versioned JSON config with strict schema validation; unknown keys are
// rejected with the offending path in the message. Throws ConfigError.
ExperimentSetup parse_config_text(const std::string& text);
ExperimentSetup load_config_file(const std::string& path);

// Canonical state serialization: sorted keys, fixed layout, shortest
// round-trip number formatting. Equal states produce identical bytes.
std::string serialize_state(const ExperimentState& state);
ExperimentState parse_state_text(const std::string& text);  // throws StateError
ExperimentState load_state_file(const std::string& path);
void save_state_file(const ExperimentState& state, const std::string& path);

// Writes content to a temporary file in the target directory and renames it
// over the destination; an interrupted write never corrupts existing data.
void atomic_write_file(const std::string& path, const std::string& content);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

}  // namespace warpbo

#endif  // WARPBO_STATE_IO_HPP_
