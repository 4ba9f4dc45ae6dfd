// Copyright 2026 The misp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "misp/simd.hpp"

namespace misp::simd {

namespace scalar {
extern const Kernels table;
}

#if defined(MISP_HAVE_AVX2)
namespace avx2 {
extern const Kernels table;
}
#endif

#if defined(MISP_HAVE_NEON)
namespace neon {
extern const Kernels table;
}
#endif

}  // namespace misp::simd
