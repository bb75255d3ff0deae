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

#ifndef WARPBO_RNG_HPP_
#define WARPBO_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>

namespace warpbo {

// splitmix64 step; used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Explicit-state random stream (xoshiro256++). All draws are pure functions
// of the four state words, so a stream can be serialized, restored, and
// split without global state. Results are identical on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  static RngStream from_state(const std::array<std::uint64_t, 4>& words) {
    RngStream r(0);
    r.state_ = words;
    return r;
  }

  std::array<std::uint64_t, 4> state() const { return state_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1); never returns an exact endpoint.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller. One value per call so the draw is a pure
  // function of the stream state (no cached second variate to serialize).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  // Derives an independent stream keyed off this stream's current state.
  // Does not advance this stream.
  RngStream split(std::uint64_t key) const {
    std::uint64_t s = state_[0] ^ rotl(state_[2], 13) ^ (key * 0xd1342543de82ef95ULL);
    return RngStream(splitmix64(s));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

// Deterministic stream for a (root seed, purpose, counter) triple. The BO
// engine derives every stochastic decision from one of these, which makes
// suggestions pure functions of the persisted state.
inline RngStream make_stream(std::uint64_t root, std::uint64_t purpose,
                             std::uint64_t counter = 0) {
  std::uint64_t s = root;
  (void)splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (purpose + 1);
  (void)splitmix64(s);
  s ^= 0xd1342543de82ef95ULL * (counter + 1);
  return RngStream(splitmix64(s));
}

}  // namespace warpbo

#endif  // WARPBO_RNG_HPP_
