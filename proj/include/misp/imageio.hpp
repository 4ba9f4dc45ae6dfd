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

// Encoders and decoders for the image files the tools exchange.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "misp/image.hpp"

namespace misp {

using Bytes = std::vector<std::uint8_t>;

struct Gray16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> data;
  friend bool operator==(const Gray16&, const Gray16&) = default;
};

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const Bytes& bytes);

/// round(clamp01(v) * 255).
std::uint8_t quantize8(float v) noexcept;

/// 8-bit RGB PNG of an image in [0,1].
Bytes encode_png(const RgbImage& img);
/// 8- or 16-bit gray/RGB PNG decoded to [0,1] floats (gray is replicated).
RgbImage decode_png(const Bytes& bytes);

Bytes encode_png_gray16(const Gray16& img);
/// Accepts 8- or 16-bit grayscale PNG; 8-bit samples are returned unscaled.
Gray16 decode_png_gray16(const Bytes& bytes);

/// Binary PGM (P5), maxval 65535, big-endian samples.
Bytes encode_pgm16(const Gray16& img);
/// Accepts P5 with any maxval up to 65535.
Gray16 decode_pgm16(const Bytes& bytes);

/// Baseline JPEG, 4:2:0 chroma subsampling.
Bytes encode_jpeg(const RgbImage& img, int quality = 95);
RgbImage decode_jpeg(const Bytes& bytes);

/// True when the bytes start with the JPEG SOI marker.
bool is_jpeg(const Bytes& bytes) noexcept;
bool is_png(const Bytes& bytes) noexcept;

}  // namespace misp
