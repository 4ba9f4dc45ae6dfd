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

#include "misp/imageio.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "misp/error.hpp"

namespace misp {
namespace {

struct PngReadState {
  const Bytes* bytes;
  std::size_t pos;
};

void png_read_cb(png_structp png, png_bytep out, png_size_t len) {
  auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (st->pos + len > st->bytes->size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, st->bytes->data() + st->pos, len);
  st->pos += len;
}

void png_write_cb(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_cb(png_structp) {}

Bytes write_png(int w, int h, int color_type, int depth, const std::vector<std::vector<png_byte>>& rows) {
  Bytes out;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("png: cannot create writer");
  png_infop info = png_create_info_struct(png);
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw FormatError("png: encoding failed");
  }
  png_set_write_fn(png, &out, png_write_cb, png_flush_cb);
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (const auto& r : rows) png_write_row(png, r.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

struct DecodedPng {
  int width = 0, height = 0, channels = 0, depth = 0;
  std::vector<std::vector<png_byte>> rows;
};

DecodedPng read_png(const Bytes& bytes) {
  if (!is_png(bytes)) throw FormatError("png: missing signature");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw FormatError("png: cannot create reader");
  png_infop info = png_create_info_struct(png);
  DecodedPng d;
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError("png: corrupt or truncated data");
  }
  PngReadState st{&bytes, 0};
  png_set_read_fn(png, &st, png_read_cb);
  png_read_info(png, info);
  const int ct = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (ct == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (ct == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (ct & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png), png_set_strip_alpha(png);
  png_read_update_info(png, info);
  d.width = static_cast<int>(png_get_image_width(png, info));
  d.height = static_cast<int>(png_get_image_height(png, info));
  d.channels = png_get_channels(png, info);
  d.depth = png_get_bit_depth(png, info);
  const std::size_t rb = png_get_rowbytes(png, info);
  d.rows.assign(static_cast<std::size_t>(d.height), std::vector<png_byte>(rb));
  for (auto& r : d.rows) png_read_row(png, r.data(), nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  (void)depth;
  return d;
}

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silence(j_common_ptr, int) {}

}  // namespace

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("short write to " + path.string());
}

std::uint8_t quantize8(float v) noexcept { return static_cast<std::uint8_t>(std::lround(clamp01(v) * 255.0f)); }

bool is_jpeg(const Bytes& b) noexcept { return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF; }

bool is_png(const Bytes& b) noexcept {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= 8 && std::memcmp(b.data(), sig, 8) == 0;
}

Bytes encode_png(const RgbImage& img) {
  std::vector<std::vector<png_byte>> rows(static_cast<std::size_t>(img.height()));
  for (int y = 0; y < img.height(); ++y) {
    const auto src = img.row(y);
    rows[y].resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) rows[y][i] = quantize8(src[i]);
  }
  return write_png(img.width(), img.height(), PNG_COLOR_TYPE_RGB, 8, rows);
}

RgbImage decode_png(const Bytes& bytes) {
  const DecodedPng d = read_png(bytes);
  RgbImage out(d.width, d.height, ColorState::display);
  const float maxv = d.depth == 16 ? 65535.0f : 255.0f;
  for (int y = 0; y < d.height; ++y) {
    const auto& r = d.rows[y];
    float* dst = out.pixel(0, y);
    for (int x = 0; x < d.width; ++x)
      for (int c = 0; c < 3; ++c) {
        const int sc = d.channels >= 3 ? c : 0;
        const std::size_t i = static_cast<std::size_t>(x) * d.channels + sc;
        const float v = d.depth == 16 ? static_cast<float>((r[2 * i] << 8) | r[2 * i + 1]) : r[i];
        dst[3 * x + c] = v / maxv;
      }
  }
  return out;
}

Bytes encode_png_gray16(const Gray16& img) {
  std::vector<std::vector<png_byte>> rows(static_cast<std::size_t>(img.height));
  for (int y = 0; y < img.height; ++y) {
    rows[y].resize(static_cast<std::size_t>(img.width) * 2);
    for (int x = 0; x < img.width; ++x) {
      const std::uint16_t v = img.data[static_cast<std::size_t>(y) * img.width + x];
      rows[y][2 * x] = static_cast<png_byte>(v >> 8);
      rows[y][2 * x + 1] = static_cast<png_byte>(v & 0xFF);
    }
  }
  return write_png(img.width, img.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

Gray16 decode_png_gray16(const Bytes& bytes) {
  const DecodedPng d = read_png(bytes);
  if (d.channels != 1) throw FormatError("png: mosaic must be single-channel grayscale");
  Gray16 out{d.width, d.height, std::vector<std::uint16_t>(static_cast<std::size_t>(d.width) * d.height)};
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      out.data[static_cast<std::size_t>(y) * d.width + x] =
          d.depth == 16 ? static_cast<std::uint16_t>((d.rows[y][2 * x] << 8) | d.rows[y][2 * x + 1]) : d.rows[y][x];
  return out;
}

Bytes encode_pgm16(const Gray16& img) {
  const std::string header = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n65535\n";
  Bytes out(header.begin(), header.end());
  out.reserve(out.size() + img.data.size() * 2);
  for (std::uint16_t v : img.data) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  }
  return out;
}

Gray16 decode_pgm16(const Bytes& b) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < b.size()) {
      if (b[pos] == '#') {
        while (pos < b.size() && b[pos] != '\n') ++pos;
      } else if (std::isspace(b[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> long {
    skip_ws();
    long v = 0;
    std::size_t start = pos;
    while (pos < b.size() && b[pos] >= '0' && b[pos] <= '9') v = v * 10 + (b[pos++] - '0');
    if (pos == start || v > 1 << 24) throw FormatError("pgm: malformed header");
    return v;
  };
  if (b.size() < 2 || b[0] != 'P' || b[1] != '5') throw FormatError("pgm: expected binary P5 header");
  pos = 2;
  const long w = read_int();
  const long h = read_int();
  const long maxv = read_int();
  if (w <= 0 || h <= 0 || maxv <= 0 || maxv > 65535) throw FormatError("pgm: invalid dimensions or maxval");
  if (pos >= b.size() || !std::isspace(b[pos])) throw FormatError("pgm: malformed header");
  ++pos;
  const std::size_t bps = maxv > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(w) * h * bps;
  if (b.size() - pos < need) throw FormatError("pgm: truncated pixel data");
  Gray16 out{static_cast<int>(w), static_cast<int>(h), std::vector<std::uint16_t>(static_cast<std::size_t>(w) * h)};
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = bps == 2 ? static_cast<std::uint16_t>((b[pos + 2 * i] << 8) | b[pos + 2 * i + 1]) : b[pos + i];
  return out;
}

Bytes encode_jpeg(const RgbImage& img, int quality) {
  jpeg_compress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  unsigned char* buf = nullptr;
  unsigned long size = 0;
  std::vector<JSAMPLE> row(static_cast<std::size_t>(img.width()) * 3);
  if (setjmp(err.jump)) {
    jpeg_destroy_compress(&cinfo);
    std::free(buf);
    throw FormatError(std::string("jpeg: ") + err.message);
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &buf, &size);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    const auto src = img.row(static_cast<int>(cinfo.next_scanline));
    for (std::size_t i = 0; i < src.size(); ++i) row[i] = quantize8(src[i]);
    JSAMPROW ptr = row.data();
    jpeg_write_scanlines(&cinfo, &ptr, 1);
  }
  jpeg_finish_compress(&cinfo);
  Bytes out(buf, buf + size);
  jpeg_destroy_compress(&cinfo);
  std::free(buf);
  return out;
}

RgbImage decode_jpeg(const Bytes& bytes) {
  if (!is_jpeg(bytes)) throw FormatError("jpeg: missing SOI marker");
  jpeg_decompress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  err.mgr.emit_message = jpeg_silence;
  RgbImage out;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw FormatError(std::string("jpeg: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out = RgbImage(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height), ColorState::display);
  std::vector<JSAMPLE> row(static_cast<std::size_t>(cinfo.output_width) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = static_cast<int>(cinfo.output_scanline);
    JSAMPROW ptr = row.data();
    jpeg_read_scanlines(&cinfo, &ptr, 1);
    float* dst = out.pixel(0, y);
    for (std::size_t i = 0; i < row.size(); ++i) dst[i] = row[i] / 255.0f;
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return out;
}

}  // namespace misp
