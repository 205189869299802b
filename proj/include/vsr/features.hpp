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

// Spatio-temporal DCT features for subsequences of a mouth ROI.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vsr/common.hpp"
#include "vsr/segmentation.hpp"

namespace vsr {

struct SubSequenceSpec {
  int start = 0;
  int duration = 1;

  bool operator==(const SubSequenceSpec&) const = default;
};

using FeatureVector = std::vector<double>;

struct FeatureConfig {
  Channel channel = Channel::Red;
  double delta_t_ms = 30.0;
  int uniform_length = 10;
  int mask_size = 3;
};

/// Delays the video by deltaTms: output frame t samples the input at
/// t - deltaTms * fps / 1000 with linear interpolation, clamped at the ends.
Volume time_shift(const Volume& volume, double delta_t_ms, double fps);

Volume subtract_sequence_mean(const Volume& volume);

/// All (start, d) with minDur <= d <= min(maxDur, frameCount), ordered by
/// start then duration.
std::vector<SubSequenceSpec> enumerate_subsequences(int frame_count, int min_duration, int max_duration);

Volume slice_frames(const Volume& volume, const SubSequenceSpec& spec);

/// Linear resampling in time of d frames onto `length` frames; a single frame is replicated.
Volume resample_to_length(const Volume& volume, int length);

/// Orthonormal type-II DCT along x, then y, then t.
Volume dct3(const Volume& volume);
Volume idct3(const Volume& coeffs);

/// Leading keep_x x keep_y x keep_t block of dct3(volume). Computes the same
/// sums in the same order as dct3, so the retained values are bit-identical.
Volume dct3_leading(const Volume& volume, int keep_x, int keep_y, int keep_t);

inline constexpr int pyramid_feature_count(int s) { return s * (s + 1) * (s + 2) / 6; }

/// Coefficients with i + j + k <= s - 1 in lexicographic (i, j, k) order.
std::vector<double> pyramid_extract(const Volume& coeffs, int s);

/// Precomputes the channel selection, time shift and sequence-mean removal of
/// an ROI once, then featurizes any number of subsequences.
class FeatureExtractor {
 public:
  FeatureExtractor(const RoiVolume& roi, const FeatureConfig& config);

  int frame_count() const { return prepared_.frames; }
  int dimension() const { return pyramid_feature_count(config_.mask_size) + 1; }
  const FeatureConfig& config() const { return config_; }

  FeatureVector operator()(const SubSequenceSpec& spec) const;
  /// Parallel over specs; output order follows the input order.
  std::vector<FeatureVector> extract(std::span<const SubSequenceSpec> specs) const;

 private:
  FeatureConfig config_;
  Volume prepared_;
};

FeatureVector featurize(const RoiVolume& roi, const FeatureConfig& config, const SubSequenceSpec& spec);

struct StandardizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;
};

StandardizationStats fit_standardization(std::span<const FeatureVector> rows);
FeatureVector standardize(std::span<const double> v, const StandardizationStats& stats);

// --- transcripts and labeled samples --------------------------------------

struct TranscriptEntry {
  std::string label;
  int start_ms = 0;
  int end_ms = 0;

  bool operator==(const TranscriptEntry&) const = default;
};
using Transcript = std::vector<TranscriptEntry>;

/// Throws std::invalid_argument unless entries are non-empty intervals in time order.
void validate_transcript(const Transcript& transcript);

enum class UnitKind { Phoneme, Viseme, Biphone, BiViseme };
UnitKind parse_unit_kind(std::string_view name);
std::string_view unit_kind_name(UnitKind kind);
inline bool is_pair_kind(UnitKind k) { return k == UnitKind::Biphone || k == UnitKind::BiViseme; }

inline constexpr char kPairSeparator = '+';

/// Frame span of [startMs, endMs): floor/ceil at the frame rate, at least one
/// frame, clipped to the sequence.
SubSequenceSpec transcript_span(int start_ms, int end_ms, double fps, int frame_count);

struct LabeledSample {
  std::string label;
  SubSequenceSpec span;
  FeatureVector features;
};

std::vector<LabeledSample> extract_labeled_samples(const RoiVolume& roi, const Transcript& transcript,
                                                   UnitKind kind, const FeatureConfig& config);

}  // namespace vsr
