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

#ifndef WARPBO_SRC_SIMD_FAST_EXP_HPP_
#define WARPBO_SRC_SIMD_FAST_EXP_HPP_

#include <bit>
#include <cmath>
#include <cstdint>

namespace warpbo::simd::detail {

// exp(x) via Cody-Waite range reduction and a degree-13 Taylor polynomial.
// The AVX2 kernels implement the identical operation sequence with packed
// intrinsics, so scalar and vector paths agree bit-for-bit lane by lane.
inline constexpr double kExpClamp = 708.0;
inline constexpr double kLog2E = 1.44269504088896340736;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpPoly[13] = {
    1.0 / 6227020800.0,  // 1/13!
    1.0 / 479001600.0,   // 1/12!
    1.0 / 39916800.0,    // 1/11!
    1.0 / 3628800.0,     // 1/10!
    1.0 / 362880.0,      // 1/9!
    1.0 / 40320.0,       // 1/8!
    1.0 / 5040.0,        // 1/7!
    1.0 / 720.0,         // 1/6!
    1.0 / 120.0,         // 1/5!
    1.0 / 24.0,          // 1/4!
    1.0 / 6.0,           // 1/3!
    1.0 / 2.0,           // 1/2!
    1.0,                 // 1/1!
};

inline double fast_exp_impl(double x) {
  if (x > kExpClamp) x = kExpClamp;
  if (x < -kExpClamp) x = -kExpClamp;
  const double n = std::nearbyint(x * kLog2E);
  double r = std::fma(-n, kLn2Hi, x);
  r = std::fma(-n, kLn2Lo, r);
  double p = kExpPoly[0];
  for (int i = 1; i < 13; ++i) p = std::fma(p, r, kExpPoly[i]);
  p = std::fma(p, r, 1.0);
  const auto ni = static_cast<std::int64_t>(n);
  const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(ni + 1023) << 52);
  return p * scale;
}

}  // namespace warpbo::simd::detail

#endif  // WARPBO_SRC_SIMD_FAST_EXP_HPP_
