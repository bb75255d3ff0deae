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

#include <cstdlib>
#include <cstring>

#include "warpbo/simd.hpp"

namespace warpbo::simd {

#ifndef WARPBO_HAVE_AVX2
const KernelTable* avx2_table_if_available() { return nullptr; }
#endif

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const char* level_name(Level level) {
  return level == Level::kAvx2 ? "avx2" : "scalar";
}

Level active_level() {
  static const Level level = [] {
    const char* force = std::getenv("WARPBO_SIMD");
    if (force != nullptr) {
      if (std::strcmp(force, "scalar") == 0) return Level::kScalar;
      if (std::strcmp(force, "avx2") == 0 && avx2_supported() &&
          avx2_table_if_available() != nullptr) {
        return Level::kAvx2;
      }
      return Level::kScalar;
    }
    return (avx2_supported() && avx2_table_if_available() != nullptr) ? Level::kAvx2
                                                                      : Level::kScalar;
  }();
  return level;
}

const KernelTable& active() {
  static const KernelTable& table =
      active_level() == Level::kAvx2 ? *avx2_table_if_available() : scalar_table();
  return table;
}

}  // namespace warpbo::simd
