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

// AVX2 variants of the batch kernels. Each one mirrors the scalar reference
// operation-for-operation (same rounding at every step), so the two paths
// are bit-identical; only this translation unit is built with -mavx2 -mfma.

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "warpbo/simd.hpp"

#include "simd/fast_exp.hpp"

#define WARPBO_LINALG_NAMESPACE warpbo::simd::avx2_impl
#include "simd/linalg_core.inl"
#undef WARPBO_LINALG_NAMESPACE

namespace warpbo::simd {
namespace avx2_impl {
namespace {

// Packed exp matching detail::fast_exp_impl lane-for-lane.
inline __m256d exp_pd(__m256d x) {
  const __m256d clamp = _mm256_set1_pd(detail::kExpClamp);
  x = _mm256_min_pd(_mm256_max_pd(x, _mm256_sub_pd(_mm256_setzero_pd(), clamp)), clamp);
  const __m256d n =
      _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(detail::kLog2E)),
                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(detail::kLn2Hi), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(detail::kLn2Lo), r);
  __m256d p = _mm256_set1_pd(detail::kExpPoly[0]);
  for (int i = 1; i < 13; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(detail::kExpPoly[i]));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  // Integer exponent assembly; n is integral and |n| < 2^51 after clamping.
  const double kShifter = 6755399441055744.0;  // 1.5 * 2^52
  const __m256i biased = _mm256_castpd_si256(_mm256_add_pd(n, _mm256_set1_pd(kShifter)));
  const __m256i ni = _mm256_sub_epi64(
      biased, _mm256_set1_epi64x(static_cast<long long>(std::bit_cast<std::uint64_t>(kShifter))));
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

}  // namespace

void sq_dist_row(const double* const* xdims, std::size_t d, std::size_t n,
                 const double* q, const double* inv_sq_ls, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t dd = 0; dd < d; ++dd) {
      const __m256d diff =
          _mm256_sub_pd(_mm256_set1_pd(q[dd]), _mm256_loadu_pd(xdims[dd] + i));
      acc = _mm256_add_pd(
          acc, _mm256_mul_pd(_mm256_mul_pd(diff, diff), _mm256_set1_pd(inv_sq_ls[dd])));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t dd = 0; dd < d; ++dd) {
      const double diff = q[dd] - xdims[dd][i];
      acc += (diff * diff) * inv_sq_ls[dd];
    }
    out[i] = acc;
  }
}

void se_transform(const double* r, std::size_t n, double amp, double* out) {
  const __m256d vamp = _mm256_set1_pd(amp);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), _mm256_loadu_pd(r + i)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vamp, e));
  }
  for (; i < n; ++i) out[i] = amp * detail::fast_exp_impl(-r[i]);
}

void m52_transform(const double* r, std::size_t n, double amp, double* out) {
  const __m256d vamp = _mm256_set1_pd(amp);
  const __m256d five = _mm256_set1_pd(5.0);
  const __m256d third = _mm256_set1_pd(1.0 / 3.0);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d u = _mm256_mul_pd(five, _mm256_loadu_pd(r + i));
    const __m256d t = _mm256_sqrt_pd(u);
    const __m256d poly =
        _mm256_add_pd(_mm256_add_pd(one, t), _mm256_mul_pd(u, third));
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), t));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vamp, _mm256_mul_pd(poly, e)));
  }
  for (; i < n; ++i) {
    const double u = 5.0 * r[i];
    const double t = std::sqrt(u);
    const double poly = (1.0 + t) + u * (1.0 / 3.0);
    out[i] = amp * (poly * detail::fast_exp_impl(-t));
  }
}

}  // namespace avx2_impl

const KernelTable* avx2_table_if_available() {
  static const KernelTable table{
      &avx2_impl::sq_dist_row,    &avx2_impl::se_transform,
      &avx2_impl::m52_transform,  &avx2_impl::cholesky_impl,
      &avx2_impl::solve_lower_impl, &avx2_impl::solve_lower_t_impl,
      "avx2",
  };
  return &table;
}

}  // namespace warpbo::simd
