// Copyright 2026 The vsr3d Authors
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

// Mouth-region segmentation: face symmetry line tracking, lip and mouth
// corner keypoints tracked with HMMs, and extraction of a normalized ROI.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vsr/common.hpp"

namespace vsr {

/// Vertical face mirror axis: column at the vertical image center and the
/// angle from vertical in degrees (positive clockwise).
struct SymmetryLine {
  double column = 0.0;
  double angle = 0.0;
};

enum class Channel { Lum, U, ULum, PseudoHue, Red, Green, Blue };

inline constexpr std::array<Channel, 7> kAllChannels = {
    Channel::Lum, Channel::U, Channel::ULum, Channel::PseudoHue,
    Channel::Red, Channel::Green, Channel::Blue};

std::string_view channel_name(Channel c);
/// Accepts lum|u|ulum|pseudohue|red|green|blue (case-insensitive).
Channel parse_channel(std::string_view name);

struct ChannelSet {
  Image lum;         // luminance, min-max rescaled to [0,1] per frame
  Image u;           // CIE L*u*v* u* (D65 white)
  Image ulum;        // u * lum
  Image pseudo_hue;  // R / (R + G)
  Image red, green, blue;

  int width() const { return lum.width; }
  int height() const { return lum.height; }
  const Image& get(Channel c) const;
  Image& get(Channel c);
};

ChannelSet compute_channels(const RgbImage& frame);

/// Luminance 0.299 R + 0.587 G + 0.114 B of an 8-bit frame, in [0,1].
Image luminance(const RgbImage& frame);

/// (row, column) position in image coordinates.
struct Point {
  double row = 0.0;
  double col = 0.0;
};

struct MouthKeypoints {
  double lip_row = 0.0;
  Point left_corner;
  Point right_corner;
  std::vector<Point> lum_line;  // 81 points, left to right
};

struct RoiVolume {
  int width = 0;
  int height = 0;
  int frames = 0;
  double fps = 25.0;
  double scale = 1.0;
  std::vector<Channel> channels;
  std::vector<Volume> data;  // parallel to channels

  const Volume& channel(Channel c) const;
  bool has(Channel c) const;
};

// --- symmetry line -------------------------------------------------------

inline constexpr int kMinPyramidWidth = 20;
inline constexpr double kPyramidRatio = 0.75;

/// Level 0 is the input; each level is round(0.75 x previous) wide and
/// area-averaged. Throws DataError for inputs narrower than 20 px.
std::vector<Image> build_image_pyramid(const Image& image);

/// Sum of squared differences between mirrored bilinear samples in a band of
/// `band` columns on each side of the line. Rows whose band leaves the image
/// are skipped and the sum is rescaled by rows/valid rows; +inf when fewer
/// than 25% of the rows are valid.
double symmetry_cost(const Image& image, const SymmetryLine& line, int band = 5);

struct SymmetrySearchOptions {
  int band = 5;
  double coarse_angle_range = 10.0;  // degrees searched at the smallest level
  double column_window = 2.0;        // +/- pixels per level / per frame
  double angle_window = 1.0;         // +/- degrees per level / per frame
  double column_step = 0.5;
  double angle_step = 0.5;
};

SymmetryLine search_symmetry_line(const Image& image, const SymmetrySearchOptions& options = {});
std::vector<SymmetryLine> find_symmetry_lines(const VideoSequence& video,
                                              const SymmetrySearchOptions& options = {});

// --- frame preparation ---------------------------------------------------

inline constexpr int kCropHalfWidth = 50;

struct PreparedFrames {
  VideoSequence cropped;              // 101 columns, symmetry line vertical at column 50
  std::vector<ChannelSet> channels;   // one per cropped frame
};

PreparedFrames prepare_frames(const VideoSequence& video, std::span<const SymmetryLine> lines);

/// Maps a point of the cropped, rotated frame back to original image coordinates.
Point crop_to_image(const Point& p, const SymmetryLine& line, int image_height);

// --- keypoints -----------------------------------------------------------

struct LipDetectionOptions {
  double transition_sigma = 8.0;
  std::optional<int> forced_first_row;  // manual override for frame 0
};

/// Row (in cropped-frame coordinates) where the inner lower lip meets the
/// symmetry column, for every frame, via Viterbi over rows.
std::vector<double> detect_inner_lower_lip(std::span<const ChannelSet> channels,
                                           const LipDetectionOptions& options = {});

inline constexpr int kLumLineHalfLength = 40;
inline constexpr int kLumLinePoints = 2 * kLumLineHalfLength + 1;

/// 3x3 box filter with edge replication.
Image box_smooth3(const Image& image);

/// Dark polyline between the lips: seeded at the darkest smoothed-luminance
/// pixel on the symmetry column within [lipRow-8, lipRow+4] and extended 40
/// columns each way by following the darkest of the three adjacent pixels.
std::vector<Point> build_min_luminance_line(const ChannelSet& channels, double lip_row);

/// Same, on a pre-smoothed luminance image.
std::vector<Point> build_min_luminance_line_smoothed(const Image& smoothed_lum, double lip_row);

struct CornerDetectionOptions {
  double transition_sigma = 2.0;
};

std::vector<std::pair<Point, Point>> detect_mouth_corners(
    std::span<const ChannelSet> channels, std::span<const std::vector<Point>> lines,
    const CornerDetectionOptions& options = {});

// --- ROI -----------------------------------------------------------------

struct RoiOptions {
  int width = 64;
  int height = 48;
  double width_fraction = 0.75;  // widest mouth spans this fraction of the ROI width
  std::vector<Channel> channels{kAllChannels.begin(), kAllChannels.end()};
};

/// Rotation about the corner midpoint so the corner line is horizontal, one
/// scale factor for the whole sequence, bilinear sampling with edge replication.
RoiVolume extract_roi(std::span<const ChannelSet> channels,
                      std::span<const MouthKeypoints> keypoints, double fps,
                      const RoiOptions& options = {});

/// Forward map of a cropped-frame point into ROI pixel coordinates for frame i.
Point crop_to_roi(const Point& p, const MouthKeypoints& kp, double scale, const RoiOptions& options);

// --- whole stage ---------------------------------------------------------

struct SegmentationOptions {
  SymmetrySearchOptions symmetry;
  LipDetectionOptions lip;
  CornerDetectionOptions corners;
  RoiOptions roi;
};

struct SegmentationResult {
  std::vector<SymmetryLine> lines;
  std::vector<MouthKeypoints> keypoints;        // cropped-frame coordinates
  std::vector<MouthKeypoints> image_keypoints;  // original image coordinates (no lum_line)
  RoiVolume roi;
};

SegmentationResult segment_video(const VideoSequence& video, const SegmentationOptions& options = {});

}  // namespace vsr
