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

#ifndef WARPBO_SOBOL_HPP_
#define WARPBO_SOBOL_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "warpbo/rng.hpp"

namespace warpbo {

// Gray-code Sobol sequence with Joe-Kuo direction numbers. Direction data
// covers SOBOL_MAX_DIM dimensions; beyond that, extra coordinates fall back
// to seeded uniform draws (documented in the README).
inline constexpr std::size_t SOBOL_MAX_DIM = 16;

class SobolSequence {
 public:
  // `scramble_seed != 0` applies a seed-derived digital XOR scramble per
  // dimension; 0 gives the plain sequence (index 1 in 2-D is (0.5, 0.5)).
  explicit SobolSequence(std::size_t dim, std::uint64_t scramble_seed = 0);

  std::size_t dim() const { return dim_; }

  // Point at 1-based index `k` (index 0 of the raw sequence is the origin
  // and is never returned). Stateless: any index can be queried directly.
  std::vector<double> point(std::uint64_t k) const;

 private:
  std::size_t dim_;
  std::vector<std::uint32_t> direction_;  // dim_ * 32, dimension-major
  std::vector<std::uint32_t> shift_;      // digital scramble per dimension
  std::uint64_t extra_seed_;              // for dims beyond the table
};

}  // namespace warpbo

#endif  // WARPBO_SOBOL_HPP_
