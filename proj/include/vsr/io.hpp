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

// On-disk formats. Every reader throws DataError naming the offending file.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vsr/decoder.hpp"
#include "vsr/eval.hpp"
#include "vsr/features.hpp"
#include "vsr/segmentation.hpp"

namespace vsr::io {

namespace fs = std::filesystem;

void write_ppm(const fs::path& path, const RgbImage& image);
RgbImage read_ppm(const fs::path& path);

/// frame_00000.ppm ... plus manifest.txt ("fps=..", "frames=..").
void write_video_dir(const fs::path& dir, const VideoSequence& video);
VideoSequence read_video_dir(const fs::path& dir);
bool is_video_dir(const fs::path& dir);

/// "LABEL START_MS END_MS" per line; blank lines and '#' comments are ignored.
void write_transcript(const fs::path& path, const Transcript& transcript);
Transcript read_transcript(const fs::path& path);

/// Image-coordinate keypoints, header frame,lipRow,leftRow,leftCol,rightRow,rightCol.
void write_keypoints_csv(const fs::path& path, const std::vector<MouthKeypoints>& keypoints);
std::vector<MouthKeypoints> read_keypoints_csv(const fs::path& path);

/// "VSR1" file. All seven channels must be present; they are written in
/// canonical order so the file layout never depends on the ROI options.
void write_roi(const fs::path& path, const RoiVolume& roi);
RoiVolume read_roi(const fs::path& path, double fps = 25.0);

void write_grid(const fs::path& path, const ProbabilityGrid& grid);
ProbabilityGrid read_grid(const fs::path& path);

struct FeatureRow {
  SubSequenceSpec span;
  FeatureVector features;
  std::optional<std::string> label;
};
void write_features_csv(const fs::path& path, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_features_csv(const fs::path& path);

/// Binary 8-bit grayscale (P5).
void write_pgm(const fs::path& path, int width, int height, const std::vector<std::uint8_t>& pixels);

struct GroundTruthFrame {
  SymmetryLine line;
  double lip_row = 0.0;
  Point left_corner;
  Point right_corner;
};
void write_groundtruth_csv(const fs::path& path, const std::vector<GroundTruthFrame>& frames);
std::vector<GroundTruthFrame> read_groundtruth_csv(const fs::path& path);

struct EvalRow {
  std::string id;
  AlignmentCounts counts;
};
/// Per-sequence rows, then a pooled summary line.
void write_eval_report(const fs::path& path, const std::vector<EvalRow>& rows);
void write_confusion_csv(const fs::path& path, const ConfusionMatrix& cm);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

/// Fixed-point formatting used by every text writer ("%.*f").
std::string fixed(double v, int digits);

}  // namespace vsr::io
