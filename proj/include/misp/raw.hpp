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

// Sensor-side processing: black-level normalization, Bayer demosaicing,
// white balance with color correction, and CCT/tint white-balance control.

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "misp/image.hpp"
#include "misp/linalg.hpp"

namespace misp {

enum class Cfa { RGGB, BGGR, GRBG, GBRG };

std::string_view to_string(Cfa cfa);
/// Throws SchemaError("cfa", ...) for unknown names.
Cfa parse_cfa(std::string_view name);

/// Channel index (0=R, 1=G, 2=B) sampled at mosaic position (x, y).
int cfa_channel(Cfa cfa, int x, int y) noexcept;

/// Per-channel white-balance gains; green is fixed at 1.
struct WbGains {
  double r = 1.0;
  double b = 1.0;
  friend bool operator==(const WbGains&, const WbGains&) = default;
};

struct CcmCalibration {
  double cct = 6504.0;
  Mat3 matrix = Mat3::identity();
  friend bool operator==(const CcmCalibration&, const CcmCalibration&) = default;
};

struct CameraMetadata {
  double black_level = 0.0;
  double white_level = 65535.0;
  Cfa cfa = Cfa::RGGB;
  WbGains wb_gains;
  std::vector<CcmCalibration> ccm_calibrations{CcmCalibration{}};
  double iso = 100.0;

  /// Throws SchemaError naming the offending field.
  void validate() const;
  friend bool operator==(const CameraMetadata&, const CameraMetadata&) = default;
};

struct RawBundle {
  ImagePlane mosaic;  // sensor counts
  CameraMetadata meta;
  friend bool operator==(const RawBundle&, const RawBundle&) = default;
};

/// (v - black) / (white - black) clamped to [0,1].
ImagePlane normalize_black_level(const RawBundle& bundle);
ImagePlane normalize_black_level(const ImagePlane& mosaic, const CameraMetadata& meta);
/// Inverse of normalize_black_level on [black, white].
ImagePlane denormalize_black_level(const ImagePlane& normalized, const CameraMetadata& meta);

/// Bilinear per-channel demosaic of a normalized mosaic. Dimensions must be even.
RgbImage demosaic(const ImagePlane& mosaic, Cfa cfa);

struct TileConfig {
  int tile = 512;
  int overlap = 16;
};

/// Same result as demosaic(), computed tile by tile with an overlap ring that
/// is discarded. Tiles run in parallel.
RgbImage demosaic_tiled(const ImagePlane& mosaic, Cfa cfa, TileConfig cfg = {});

/// out = clamp(ccm * diag(g_r, 1, g_b) * p). Input state must be camera-raw.
RgbImage apply_wb_ccm(const RgbImage& img, const WbGains& gains, const Mat3& ccm);
/// CCM for the as-shot gains: the single calibration, or the blend at the CCT
/// the gains imply when several are present.
Mat3 as_shot_ccm(const CameraMetadata& meta);

/// Uses the metadata's as-shot gains and as_shot_ccm().
RgbImage apply_wb_ccm(const RgbImage& img, const CameraMetadata& meta);

/// Inverse-CCT blend of the two calibrations bracketing target_cct; clamped
/// to the nearest calibration outside the calibrated range.
Mat3 interpolate_ccm(const CameraMetadata& meta, double target_cct);

// --- CCT / tint -----------------------------------------------------------

inline constexpr double kLocusMinCct = 2000.0;
inline constexpr double kLocusMaxCct = 12000.0;

struct CctTint {
  double cct = 6504.0;
  double tint = 0.0;  // signed offset from the locus in 1960 uv; positive is magenta
};

/// Planckian locus point in CIE 1960 uv.
std::array<double, 2> planck_uv(double cct);

/// Unit isotherm direction at cct, pointing toward lower v. Between table
/// entries it blends the normals at the two entries.
std::array<double, 2> locus_normal(double cct);

/// Inverse of cct_tint_to_uv: the isotherm through (u, v) with the smallest
/// |tint|. Throws ConfigError when no isotherm within the table range passes
/// through the point.
CctTint uv_to_cct_tint(double u, double v);
/// Throws ConfigError for cct outside [2000, 12000] K.
std::array<double, 2> cct_tint_to_uv(const CctTint& ct);

std::array<double, 3> uv_to_xyz(double u, double v);
std::array<double, 2> xyz_to_uv(const std::array<double, 3>& xyz);

/// White-balance gains neutralizing an illuminant at (cct, tint) for the
/// camera described by the metadata calibrations.
WbGains gains_from_cct_tint(const CameraMetadata& meta, const CctTint& ct);
/// Inverse of gains_from_cct_tint by fixed-point iteration on the CCT used to
/// pick the CCM. Results outside the locus range are clamped to it.
CctTint cct_tint_from_gains(const CameraMetadata& meta, const WbGains& gains);

}  // namespace misp
