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

#ifndef WARPBO_SIMD_HPP_
#define WARPBO_SIMD_HPP_

#include <cstddef>

namespace warpbo::simd {

// Batch kernels behind the GP inner loops. Every entry has a scalar
// reference implementation and, on x86-64, an AVX2 variant selected at
// runtime. Variants are written op-for-op compatible with the reference so
// results are bit-identical across paths; the equivalence tests assert this.
struct KernelTable {
  // out[i] = sum_d (q[d] - xdims[d][i])^2 * inv_sq_ls[d], dimension-major input.
  void (*sq_dist_row)(const double* const* xdims, std::size_t d, std::size_t n,
                      const double* q, const double* inv_sq_ls, double* out);

  // out[i] = amp * exp(-r[i])
  void (*se_transform)(const double* r, std::size_t n, double amp, double* out);

  // out[i] = amp * (1 + t + (5/3) r) * exp(-t), t = sqrt(5 r[i])
  void (*m52_transform)(const double* r, std::size_t n, double amp, double* out);

  // In-place lower Cholesky of a column-major n*n matrix; false if not SPD.
  bool (*cholesky)(double* a, std::size_t n);

  // Solve L y = b / L^T x = b in place; L column-major lower from cholesky().
  void (*solve_lower)(const double* L, std::size_t n, double* b);
  void (*solve_lower_t)(const double* L, std::size_t n, double* b);

  const char* name;
};

enum class Level { kScalar, kAvx2 };

// Level chosen at first use: CPU detection, overridable with
// WARPBO_SIMD=scalar|avx2 in the environment.
Level active_level();
const char* level_name(Level level);

const KernelTable& active();
const KernelTable& scalar_table();
bool avx2_supported();
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table_if_available();

// Reference exponential shared by the scalar kernels; the AVX2 variant
// mirrors it lane-for-lane. Accurate to a couple of ulp on [-708, 708]
// and saturating outside.
double fast_exp(double x);

}  // namespace warpbo::simd

#endif  // WARPBO_SIMD_HPP_
