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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "vsr/features.hpp"
#include "vsr/viterbi.hpp"

namespace vsr {

struct MultiClassModel;

struct ClassDurationSpec {
  std::string label;
  int min_duration = 1;
  int max_duration = 1;
};

/// Per-class probability for every (start frame, duration). Cells whose
/// subsequence runs past the last frame are invalid and hold -1.
class ProbabilityGrid {
 public:
  ProbabilityGrid() = default;
  ProbabilityGrid(std::vector<ClassDurationSpec> classes, int frame_count);

  const std::vector<ClassDurationSpec>& classes() const { return classes_; }
  int frame_count() const { return frame_count_; }
  int max_duration() const;

  bool valid(std::size_t cls, int start, int duration) const;
  double at(std::size_t cls, int start, int duration) const;
  /// Stores p clamped to [1e-12, 1 - 1e-12]. Throws on invalid cells.
  void set(std::size_t cls, int start, int duration, double p);

 private:
  std::size_t offset(std::size_t cls, int start, int duration) const;

  std::vector<ClassDurationSpec> classes_;
  int frame_count_ = 0;
  std::vector<std::vector<double>> probs_;
};

inline constexpr double kProbabilityFloor = 1e-12;

/// One classifier feeding the grid together with the duration bounds of its classes.
struct GridSource {
  const MultiClassModel* model = nullptr;
  int min_duration = 1;
  int max_duration = 25;
};

/// Featurizes every feasible subsequence of the ROI once per distinct feature
/// configuration and fills the grid with calibrated per-class probabilities.
ProbabilityGrid build_probability_grid(std::span<const GridSource> sources, const RoiVolume& roi);

/// HMM with one start state per (class, duration) and a shared countdown chain
/// of dummy states. State order: classes in input order, durations ascending,
/// then dummy_1 .. dummy_{Dmax-1}.
struct DurationHmm {
  struct State {
    bool dummy = false;
    std::size_t cls = 0;  // start states only
    int duration = 0;     // start states: own duration; dummies: countdown index k
  };
  std::vector<ClassDurationSpec> classes;
  std::vector<State> states;
  std::size_t start_state_count = 0;
  Transitions transitions;

  std::size_t dummy_index(int k) const { return start_state_count + static_cast<std::size_t>(k - 1); }
};

DurationHmm build_duration_hmm(std::span<const ClassDurationSpec> classes);

struct DecodedEntry {
  std::string label;
  int start = 0;
  int duration = 0;

  bool operator==(const DecodedEntry&) const = default;
};
using DecodedSequence = std::vector<DecodedEntry>;

/// Most likely tiling of the frames with (class, duration) segments, scoring
/// each segment by its grid probability raised to its duration.
DecodedSequence decode_sequence(const ProbabilityGrid& grid);

/// Sum of d * log p over the segments; -inf when a segment is invalid.
double segmentation_log_score(const ProbabilityGrid& grid, const DecodedSequence& seq);

/// Splits composite "A<sep>B" entries at ceil(d/2).
DecodedSequence expand_biphones(const DecodedSequence& seq, char separator = '+');

/// Converts frames to milliseconds at the given frame rate.
Transcript to_transcript(const DecodedSequence& seq, double fps);

}  // namespace vsr
