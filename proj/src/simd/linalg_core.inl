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

// Dense Cholesky and triangular solves on column-major storage, cloned into
// one translation unit per instruction set. The inner loops are elementwise
// independent, so the compiled variants produce bit-identical results at any
// vector width; only throughput differs.
//
// Include from a .cpp after defining WARPBO_LINALG_NAMESPACE.

namespace WARPBO_LINALG_NAMESPACE {

inline bool cholesky_impl(double* a, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    double* ck = a + k * n;
    const double akk = ck[k];
    if (!(akk > 0.0) || !std::isfinite(akk)) return false;
    const double lkk = std::sqrt(akk);
    ck[k] = lkk;
    const double inv = 1.0 / lkk;
    for (std::size_t i = k + 1; i < n; ++i) ck[i] *= inv;
    for (std::size_t j = k + 1; j < n; ++j) {
      const double ljk = ck[j];
      double* cj = a + j * n;
      for (std::size_t i = j; i < n; ++i) cj[i] -= ljk * ck[i];
    }
  }
  return true;
}

inline void solve_lower_impl(const double* L, std::size_t n, double* b) {
  for (std::size_t j = 0; j < n; ++j) {
    const double* cj = L + j * n;
    b[j] /= cj[j];
    const double bj = b[j];
    for (std::size_t i = j + 1; i < n; ++i) b[i] -= cj[i] * bj;
  }
}

inline void solve_lower_t_impl(const double* L, std::size_t n, double* b) {
  for (std::size_t jj = n; jj-- > 0;) {
    const double* cj = L + jj * n;
    double s = b[jj];
    for (std::size_t i = jj + 1; i < n; ++i) s -= cj[i] * b[i];
    b[jj] = s / cj[jj];
  }
}

}  // namespace WARPBO_LINALG_NAMESPACE
