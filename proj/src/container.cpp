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

#include "misp/container.hpp"

#include <zlib.h>

#include <cstring>
#include <limits>

#include "misp/error.hpp"

namespace misp {
namespace {

constexpr std::uint8_t kMagic[4] = {'M', 'I', 'S', 'P'};
constexpr std::size_t kFixedSize = 4 + 1 + 4 + 4 + 4;  // magic, version, two lengths, crc

void put_le32(Bytes& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint32_t get_le32(const Bytes& b, std::size_t pos) {
  return static_cast<std::uint32_t>(b[pos]) | static_cast<std::uint32_t>(b[pos + 1]) << 8 |
         static_cast<std::uint32_t>(b[pos + 2]) << 16 | static_cast<std::uint32_t>(b[pos + 3]) << 24;
}

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, std::numeric_limits<uInt>::max()));
    crc = crc32(crc, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

Bytes deflate_raw(const Bytes& in) {
  z_stream zs{};
  if (deflateInit2(&zs, 6, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) != Z_OK) throw FormatError("deflate: init failed");
  Bytes out(deflateBound(&zs, static_cast<uLong>(in.size())));
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw FormatError("deflate: compression failed");
  out.resize(zs.total_out);
  return out;
}

Bytes inflate_raw(const std::uint8_t* data, std::size_t n, std::size_t expected) {
  z_stream zs{};
  if (inflateInit2(&zs, -15) != Z_OK) throw FormatError("inflate: init failed");
  Bytes out(expected);
  zs.next_in = const_cast<Bytef*>(data);
  zs.avail_in = static_cast<uInt>(n);
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  const bool ok = rc == Z_STREAM_END && zs.total_out == expected && zs.avail_in == 0;
  inflateEnd(&zs);
  if (!ok) throw FormatError("embedded raw: mosaic payload does not inflate to the declared size");
  return out;
}

bool magic_at(const Bytes& b, std::size_t pos) {
  return pos >= 2 && pos + 4 <= b.size() && b[pos - 2] == 0xFF && b[pos - 1] == 0xD9 &&
         std::memcmp(&b[pos], kMagic, 4) == 0;
}

}  // namespace

std::optional<EmbeddedRaw> extract_raw(const Bytes& b) {
  for (std::size_t pos = b.size() >= 4 ? b.size() - 4 : 0; pos >= 2; --pos) {
    if (!magic_at(b, pos)) continue;
    const std::size_t remaining = b.size() - pos;
    if (remaining < kFixedSize) throw FormatError("embedded raw: truncated trailer");
    if (b[pos + 4] != kContainerVersion)
      throw FormatError("embedded raw: unsupported version " + std::to_string(b[pos + 4]));
    const std::size_t meta_len = get_le32(b, pos + 5);
    if (meta_len > remaining - kFixedSize) throw FormatError("embedded raw: truncated metadata");
    const std::size_t payload_len_at = pos + 9 + meta_len;
    const std::size_t payload_len = get_le32(b, payload_len_at);
    if (payload_len > remaining - kFixedSize - meta_len) throw FormatError("embedded raw: truncated payload");
    const std::size_t crc_at = payload_len_at + 4 + payload_len;
    if (crc_at + 4 != b.size()) throw FormatError("embedded raw: trailer length does not match the file");
    if (crc32_of(&b[pos], crc_at - pos) != get_le32(b, crc_at)) throw FormatError("embedded raw: checksum mismatch");

    json meta;
    try {
      meta = json::parse(b.begin() + static_cast<std::ptrdiff_t>(pos + 9),
                         b.begin() + static_cast<std::ptrdiff_t>(pos + 9 + meta_len));
    } catch (const json::parse_error& e) {
      throw FormatError(std::string("embedded raw: metadata is not JSON: ") + e.what());
    }
    if (!meta.is_object() || !meta.contains("sidecar") || !meta.contains("recipe"))
      throw FormatError("embedded raw: metadata needs sidecar and recipe");
    const json& side = meta["sidecar"];
    if (!side.contains("width") || !side.contains("height") || !side["width"].is_number_integer() ||
        !side["height"].is_number_integer())
      throw FormatError("embedded raw: sidecar lacks mosaic dimensions");
    const long w = side["width"].get<long>();
    const long h = side["height"].get<long>();
    if (w <= 0 || h <= 0 || w > 1 << 16 || h > 1 << 16) throw FormatError("embedded raw: bad mosaic dimensions");

    EmbeddedRaw out;
    out.jpeg.assign(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(pos));
    out.bundle.meta = metadata_from_json(side);
    out.recipe = recipe_from_json(meta["recipe"]);
    const Bytes raw = inflate_raw(&b[payload_len_at + 4], payload_len, static_cast<std::size_t>(w) * h * 2);
    out.bundle.mosaic = ImagePlane(static_cast<int>(w), static_cast<int>(h));
    auto dst = out.bundle.mosaic.data();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = static_cast<float>(static_cast<std::uint16_t>(raw[2 * i] | raw[2 * i + 1] << 8));
    return out;
  }
  return std::nullopt;
}

Bytes embed_raw(const Bytes& jpeg_in, const RawBundle& bundle, const RenderRecipe& recipe) {
  if (!is_jpeg(jpeg_in)) throw FormatError("embed_raw: input is not a JPEG");
  Bytes jpeg;
  if (auto existing = extract_raw(jpeg_in)) {
    jpeg = std::move(existing->jpeg);
  } else {
    jpeg = jpeg_in;
  }
  if (jpeg.size() < 4 || jpeg[jpeg.size() - 2] != 0xFF || jpeg.back() != 0xD9)
    throw FormatError("embed_raw: JPEG does not end with an EOI marker");
  recipe.validate();
  bundle.meta.validate();

  const Gray16 g = mosaic_to_gray16(bundle.mosaic);
  Bytes raw(g.data.size() * 2);
  for (std::size_t i = 0; i < g.data.size(); ++i) {
    raw[2 * i] = static_cast<std::uint8_t>(g.data[i] & 0xFF);
    raw[2 * i + 1] = static_cast<std::uint8_t>(g.data[i] >> 8);
  }
  const Bytes payload = deflate_raw(raw);

  json side = metadata_to_json(bundle.meta);
  side["width"] = g.width;
  side["height"] = g.height;
  const std::string meta = json{{"recipe", recipe_to_json(recipe)}, {"sidecar", side}}.dump();

  Bytes out = std::move(jpeg);
  const std::size_t start = out.size();
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kContainerVersion);
  put_le32(out, static_cast<std::uint32_t>(meta.size()));
  out.insert(out.end(), meta.begin(), meta.end());
  put_le32(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  put_le32(out, crc32_of(&out[start], out.size() - start));
  return out;
}

}  // namespace misp
