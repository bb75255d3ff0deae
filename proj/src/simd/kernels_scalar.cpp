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

#include <cmath>
#include <cstddef>

#include "warpbo/simd.hpp"

#include "simd/fast_exp.hpp"

#define WARPBO_LINALG_NAMESPACE warpbo::simd::scalar_impl
#include "simd/linalg_core.inl"
#undef WARPBO_LINALG_NAMESPACE

namespace warpbo::simd {
namespace scalar_impl {

void sq_dist_row(const double* const* xdims, std::size_t d, std::size_t n,
                 const double* q, const double* inv_sq_ls, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t dd = 0; dd < d; ++dd) {
    const double* col = xdims[dd];
    const double qd = q[dd];
    const double w = inv_sq_ls[dd];
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = qd - col[i];
      out[i] += (diff * diff) * w;
    }
  }
}

void se_transform(const double* r, std::size_t n, double amp, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = amp * detail::fast_exp_impl(-r[i]);
}

void m52_transform(const double* r, std::size_t n, double amp, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 5.0 * r[i];
    const double t = std::sqrt(u);
    const double poly = (1.0 + t) + u * (1.0 / 3.0);
    out[i] = amp * (poly * detail::fast_exp_impl(-t));
  }
}

}  // namespace scalar_impl

double fast_exp(double x) { return detail::fast_exp_impl(x); }

const KernelTable& scalar_table() {
  static const KernelTable table{
      &scalar_impl::sq_dist_row,    &scalar_impl::se_transform,
      &scalar_impl::m52_transform,  &scalar_impl::cholesky_impl,
      &scalar_impl::solve_lower_impl, &scalar_impl::solve_lower_t_impl,
      "scalar",
  };
  return table;
}

}  // namespace warpbo::simd
