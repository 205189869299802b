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

// Stage orchestration shared by the command-line tool and the test suites.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vsr/decoder.hpp"
#include "vsr/eval.hpp"
#include "vsr/features.hpp"
#include "vsr/fixtures.hpp"
#include "vsr/segmentation.hpp"
#include "vsr/svm.hpp"

namespace vsr {

struct DurationBounds {
  int min = 1;
  int max = 25;
};

struct PipelineConfig {
  FeatureConfig features;             // red, 30 ms, l = 10, s = 3
  DurationBounds unit_durations{1, 25};
  DurationBounds pair_durations{2, 37};
  TrainConfig train;
  int roi_width = 64;
  int roi_height = 48;
  double fps = 25.0;
  int threads = 1;

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
  DurationBounds bounds_for(UnitKind kind) const {
    return is_pair_kind(kind) ? pair_durations : unit_durations;
  }
};

/// JSON object with the keys written by config_to_json; absent keys keep
/// their defaults, unknown keys are rejected.
PipelineConfig config_from_json(const std::string& text, const PipelineConfig& base = {});
PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base = {});
std::string config_to_json(const PipelineConfig& config);

SegmentationOptions segmentation_options(const PipelineConfig& config);

struct AnnotatedRoi {
  RoiVolume roi;
  Transcript transcript;
};

/// Labeled feature vectors of every annotated ROI, in input order.
LabeledFeatures collect_samples(const std::vector<AnnotatedRoi>& data, UnitKind kind, const PipelineConfig& config);

/// Trains on the samples and echoes the pipeline configuration into the model.
MultiClassModel train_units(const LabeledFeatures& samples, const PipelineConfig& config,
                            TrainReport* report = nullptr);

struct DecodeOptions {
  const MultiClassModel* pair_model = nullptr;  // biphone / bi-viseme classes
  bool visemes = false;                         // map output labels to visemes
};

ProbabilityGrid build_grid(const RoiVolume& roi, const MultiClassModel& unit_model, const PipelineConfig& config,
                           const MultiClassModel* pair_model = nullptr);

/// Grid, Viterbi, pair expansion and optional viseme mapping.
DecodedSequence decode_roi(const RoiVolume& roi, const MultiClassModel& unit_model, const PipelineConfig& config,
                           const DecodeOptions& options = {});

DecodedSequence map_decoded_to_visemes(const DecodedSequence& seq);

/// Labels of a transcript, optionally mapped to visemes, with internal
/// silences removed.
LabelSequence scoring_labels(const Transcript& transcript, bool visemes);

Alignment score_transcripts(const Transcript& ref, const Transcript& hyp, bool visemes);

struct LearningCurvePoint {
  double fraction = 0.0;
  std::size_t samples = 0;
  double train_accuracy = 0.0;
  double cv_accuracy = 0.0;
};

/// Trains on growing prefixes of every class (after the fixed CV split) at the
/// configured grid and reports training and cross-validation accuracy.
std::vector<LearningCurvePoint> learning_curve(const LabeledFeatures& data, std::span<const double> fractions,
                                               const PipelineConfig& config);

/// Segments every rendered sentence and trains a unit model on its transcript.
MultiClassModel train_synthetic_model(const SynthConfig& synth, int sentences, const PipelineConfig& config);

struct BenchRow {
  int frames = 0;
  double segmentation_s = 0.0;
  double grid_s = 0.0;  // featurization and classification of every subsequence
  double decode_s = 0.0;

  double total_s() const { return segmentation_s + grid_s + decode_s; }
  double ms_per_frame() const { return frames > 0 ? 1000.0 * total_s() / frames : 0.0; }
};

/// Wall time of each stage on synthetic sentences of the requested lengths.
std::vector<BenchRow> run_benchmark(std::span<const int> frame_counts, const SynthConfig& synth,
                                    const MultiClassModel& model, const PipelineConfig& config);

}  // namespace vsr
