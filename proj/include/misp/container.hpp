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

// JPEG with an embedded raw trailer, so an exported picture can be re-rendered
// from its sensor data. Layout after the final EOI marker:
//
//   "MISP" | u8 version | u32 meta_len | meta JSON | u32 payload_len |
//   raw DEFLATE of the little-endian u16 mosaic | u32 CRC-32
//
// Integers are little-endian; the CRC covers everything from the magic to the
// end of the payload. meta JSON is {"recipe": ..., "sidecar": ...}.

#include <optional>

#include "misp/bundleio.hpp"
#include "misp/recipe.hpp"

namespace misp {

inline constexpr std::uint8_t kContainerVersion = 1;

struct EmbeddedRaw {
  Bytes jpeg;
  RawBundle bundle;
  RenderRecipe recipe;
};

/// Appends the trailer to a JPEG ending in EOI. An existing trailer is replaced.
Bytes embed_raw(const Bytes& jpeg, const RawBundle& bundle, const RenderRecipe& recipe);

/// nullopt when the file carries no trailer. Throws FormatError for a
/// truncated or corrupt trailer and on checksum mismatch.
std::optional<EmbeddedRaw> extract_raw(const Bytes& bytes);

}  // namespace misp
