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

#include "warpbo/sobol.hpp"

#include <stdexcept>

namespace warpbo {
namespace {

// Primitive-polynomial data (degree s, coefficient a, initial m_i) for
// dimensions 2..16, Joe & Kuo "new-joe-kuo-6" tables. Dimension 1 is the
// van der Corput sequence in base 2.
struct PolyInit {
  int s;
  std::uint32_t a;
  std::uint32_t m[6];
};

constexpr PolyInit kJoeKuo[] = {
    {1, 0, {1, 0, 0, 0, 0, 0}},        // dim 2
    {2, 1, {1, 3, 0, 0, 0, 0}},        // dim 3
    {3, 1, {1, 3, 1, 0, 0, 0}},        // dim 4
    {3, 2, {1, 1, 1, 0, 0, 0}},        // dim 5
    {4, 1, {1, 1, 3, 3, 0, 0}},        // dim 6
    {4, 4, {1, 3, 5, 13, 0, 0}},       // dim 7
    {5, 2, {1, 1, 5, 5, 17, 0}},       // dim 8
    {5, 4, {1, 1, 5, 5, 5, 0}},        // dim 9
    {5, 7, {1, 1, 7, 11, 19, 0}},      // dim 10
    {5, 11, {1, 1, 5, 1, 1, 0}},       // dim 11
    {5, 13, {1, 1, 1, 3, 11, 0}},      // dim 12
    {5, 14, {1, 3, 5, 5, 31, 0}},      // dim 13
    {6, 1, {1, 3, 3, 9, 7, 49}},       // dim 14
    {6, 13, {1, 1, 1, 15, 21, 21}},    // dim 15
    {6, 16, {1, 3, 1, 13, 27, 49}},    // dim 16
};

constexpr int kBits = 32;

}  // namespace

SobolSequence::SobolSequence(std::size_t dim, std::uint64_t scramble_seed)
    : dim_(dim), extra_seed_(scramble_seed) {
  if (dim == 0) throw std::invalid_argument("SobolSequence: dimension must be positive");
  const std::size_t tabled = dim < SOBOL_MAX_DIM ? dim : SOBOL_MAX_DIM;
  direction_.assign(tabled * kBits, 0);

  // Dimension 1: v_k = 2^(31-k).
  for (int k = 0; k < kBits; ++k) direction_[k] = 1u << (31 - k);

  for (std::size_t d = 1; d < tabled; ++d) {
    const PolyInit& p = kJoeKuo[d - 1];
    std::uint32_t* v = &direction_[d * kBits];
    for (int k = 0; k < p.s; ++k) v[k] = p.m[k] << (31 - k);
    for (int k = p.s; k < kBits; ++k) {
      v[k] = v[k - p.s] ^ (v[k - p.s] >> p.s);
      for (int l = 1; l < p.s; ++l) {
        if ((p.a >> (p.s - 1 - l)) & 1u) v[k] ^= v[k - l];
      }
    }
  }

  shift_.assign(tabled, 0);
  if (scramble_seed != 0) {
    RngStream rng(scramble_seed);
    for (auto& s : shift_) s = static_cast<std::uint32_t>(rng.next_u64() >> 32);
  }
}

std::vector<double> SobolSequence::point(std::uint64_t k) const {
  std::vector<double> out(dim_);
  const std::size_t tabled = dim_ < SOBOL_MAX_DIM ? dim_ : SOBOL_MAX_DIM;
  const std::uint64_t g = k ^ (k >> 1);  // gray code: standard enumeration order
  for (std::size_t d = 0; d < tabled; ++d) {
    // x_k = XOR of direction numbers at the set bits of gray(k).
    std::uint32_t x = 0;
    std::uint64_t kk = g;
    int bit = 0;
    while (kk) {
      if (kk & 1u) x ^= direction_[d * kBits + bit];
      kk >>= 1;
      ++bit;
    }
    x ^= shift_[d];
    out[d] = static_cast<double>(x) * 0x1.0p-32;
  }
  // Coordinates beyond the direction table: seeded uniforms keyed by (k, d).
  for (std::size_t d = tabled; d < dim_; ++d) {
    RngStream rng = make_stream(extra_seed_ + 0x50b01ULL, d, k);
    out[d] = rng.uniform();
  }
  return out;
}

}  // namespace warpbo
