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

// Synthetic scenes and raw bundles for demos, tests and benchmarks.

#include <cstdint>

#include "misp/raw.hpp"

namespace misp {

/// Smooth linear-sRGB scene in [0.02, 0.85]: gradients plus a few soft blobs.
RgbImage synth_scene(int width, int height, std::uint64_t seed);

/// Metadata of a plausible sensor: 14-bit, black 512, two CCM calibrations.
CameraMetadata synth_metadata(Cfa cfa = Cfa::RGGB);

/// Inverts WB/CCM for the as-shot settings, mosaics and quantizes to counts.
/// Dimensions must be even.
RawBundle synth_bundle(const RgbImage& linear_scene, const CameraMetadata& meta);

}  // namespace misp
