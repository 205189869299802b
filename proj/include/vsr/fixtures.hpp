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

// Deterministic synthetic talking-face videos with known symmetry lines,
// mouth keypoints and transcripts.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vsr/common.hpp"
#include "vsr/features.hpp"
#include "vsr/io.hpp"
#include "vsr/segmentation.hpp"

namespace vsr {

/// SplitMix64. The output sequence is fixed by the algorithm, so corpora are
/// reproducible across platforms and compilers.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Standard normal via Box-Muller (one draw per call).
  double normal();

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a tag.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

struct ClassMotion {
  std::string label;
  double open_amplitude = 0.0;   // px added to the inner opening half-height in the held posture
  double width_amplitude = 0.0;  // px added to the mouth half-width in the held posture
  double period = 8.0;           // frames of the superimposed oscillation
};

/// Eight motions with labels from distinct viseme groups.
const std::vector<ClassMotion>& default_class_motions();

struct SynthConfig {
  std::uint64_t seed = 1;
  int class_count = 3;
  int sentence_length = 8;  // units per sentence
  double fps = 25.0;
  int width = 256;
  int height = 192;
  std::vector<ClassMotion> motions;  // empty: first class_count defaults
  double noise_sigma = 4.0 / 255.0;
  int min_unit_frames = 3;
  int max_unit_frames = 12;
  double axis_column = -1.0;  // < 0: width / 2
  double column_jitter = 3.0;  // px amplitude of the head sway
  double angle_jitter = 2.0;   // degrees amplitude of the head roll
  double mouth_half_width = 22.0;
  double mouth_open_half_height = 1.0;  // closed-mouth seam
  double mouth_offset = 0.25;            // mouth centre below the image centre, fraction of height

  /// Throws std::invalid_argument for out-of-range values.
  void validate() const;
  std::vector<ClassMotion> class_motions() const;
  double axis() const { return axis_column < 0.0 ? 0.5 * width : axis_column; }
};

/// Smooth symmetric skin texture in face coordinates (|u|, v).
struct FaceTexture {
  int half_width = 0;
  int half_height = 0;
  Image values;  // (half_width + 1) x (2 half_height + 1), roughly in [-1, 1]

  double sample(double u, double v) const;
};

FaceTexture make_face_texture(const SynthConfig& cfg);

struct MouthShape {
  double half_width = 22.0;
  double open_half_height = 1.0;
};

struct FacePose {
  SymmetryLine line;
  MouthShape mouth;
};

/// Renders one frame. Noise is drawn from a stream seeded by noise_seed only.
RgbImage synth_face_frame(const SynthConfig& cfg, const FaceTexture& texture, const FacePose& pose,
                          std::uint64_t noise_seed);

/// Keypoints implied by a pose: the inner lower lip on the axis and the
/// horizontal extremes of the mouth opening, in image coordinates.
io::GroundTruthFrame pose_ground_truth(const SynthConfig& cfg, const FacePose& pose);

struct SynthSentence {
  VideoSequence video;
  Transcript transcript;
  std::vector<io::GroundTruthFrame> truth;
  std::vector<std::size_t> unit_classes;  // indices into class_motions()
};

SynthSentence synth_sentence(const SynthConfig& cfg, const FaceTexture& texture, int index);

/// Same sentence stretched or cut to exactly `frames` frames.
SynthSentence synth_sentence_frames(const SynthConfig& cfg, const FaceTexture& texture, int index, int frames);

struct CorpusEntry {
  std::filesystem::path dir;
  std::vector<io::GroundTruthFrame> truth;
  Transcript transcript;
};

/// Writes sentence directories s000, s001, ... each holding frames, manifest.txt,
/// transcript.txt and groundtruth.csv.
std::vector<CorpusEntry> synth_corpus(const SynthConfig& cfg, int sentences, const std::filesystem::path& out);

/// Sentence directories under a corpus root, sorted by name.
std::vector<std::filesystem::path> list_sentence_dirs(const std::filesystem::path& root);

}  // namespace vsr
