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

#include "vsr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vsr/io.hpp"

namespace vsr {

void PipelineConfig::validate() const {
  const auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (features.delta_t_ms < 0.0 || features.delta_t_ms > 1000.0) fail("deltaTms must be in [0, 1000]");
  if (features.uniform_length < 2 || features.uniform_length > 100) fail("uniformLength must be in 2..100");
  if (features.mask_size < 1 || features.mask_size > 16) fail("maskSize must be in 1..16");
  for (const auto& [name, b] : {std::pair{"unit", unit_durations}, std::pair{"pair", pair_durations}}) {
    if (b.min < 1 || b.max < b.min || b.max > 1000) fail(std::string(name) + " duration bounds must satisfy 1 <= min <= max <= 1000");
  }
  if (train.c_grid.empty() || train.gamma_grid.empty()) fail("SVM grids must not be empty");
  for (double c : train.c_grid) {
    if (!(c > 0.0)) fail("cGrid values must be positive");
  }
  for (double g : train.gamma_grid) {
    if (!(g > 0.0)) fail("gammaGrid values must be positive");
  }
  if (!(train.tolerance > 0.0)) fail("smoTolerance must be positive");
  if (train.cv_fraction < 0.0 || train.cv_fraction >= 1.0) fail("cvFraction must be in [0, 1)");
  if (train.platt_folds < 2) fail("plattFolds must be >= 2");
  if (roi_width < 4 || roi_height < 4) fail("ROI must be at least 4x4");
  if (!(fps > 0.0)) fail("fps must be positive");
  if (threads < 1) fail("threads must be >= 1");
}

namespace {

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "channel",         "deltaTms",        "uniformLength", "maskSize",   "unitMinDuration", "unitMaxDuration",
      "pairMinDuration", "pairMaxDuration", "cGrid",         "gammaGrid",  "smoTolerance",    "cvFraction",
      "plattFolds",      "roiWidth",        "roiHeight",     "fps",        "threads"};
  return keys;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num_list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

}  // namespace

PipelineConfig config_from_json(const std::string& text, const PipelineConfig& base) {
  PipelineConfig c = base;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw DataError("malformed config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!config_keys().contains(key)) throw DataError("config: unknown key '" + key + "'");
  }
  try {
    if (j.contains("channel")) c.features.channel = parse_channel(j["channel"].get<std::string>());
    if (j.contains("deltaTms")) c.features.delta_t_ms = j["deltaTms"].get<double>();
    if (j.contains("uniformLength")) c.features.uniform_length = j["uniformLength"].get<int>();
    if (j.contains("maskSize")) c.features.mask_size = j["maskSize"].get<int>();
    if (j.contains("unitMinDuration")) c.unit_durations.min = j["unitMinDuration"].get<int>();
    if (j.contains("unitMaxDuration")) c.unit_durations.max = j["unitMaxDuration"].get<int>();
    if (j.contains("pairMinDuration")) c.pair_durations.min = j["pairMinDuration"].get<int>();
    if (j.contains("pairMaxDuration")) c.pair_durations.max = j["pairMaxDuration"].get<int>();
    if (j.contains("cGrid")) c.train.c_grid = j["cGrid"].get<std::vector<double>>();
    if (j.contains("gammaGrid")) c.train.gamma_grid = j["gammaGrid"].get<std::vector<double>>();
    if (j.contains("smoTolerance")) c.train.tolerance = j["smoTolerance"].get<double>();
    if (j.contains("cvFraction")) c.train.cv_fraction = j["cvFraction"].get<double>();
    if (j.contains("plattFolds")) c.train.platt_folds = j["plattFolds"].get<int>();
    if (j.contains("roiWidth")) c.roi_width = j["roiWidth"].get<int>();
    if (j.contains("roiHeight")) c.roi_height = j["roiHeight"].get<int>();
    if (j.contains("fps")) c.fps = j["fps"].get<double>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("config: wrong value type: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, const PipelineConfig& base) {
  try {
    return config_from_json(io::read_text(path), base);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string config_to_json(const PipelineConfig& c) {
  // Thread count is deliberately absent: it never changes results.
  std::ostringstream o;
  o << "{\"channel\": \"" << channel_name(c.features.channel) << "\", \"deltaTms\": " << num(c.features.delta_t_ms)
    << ", \"uniformLength\": " << c.features.uniform_length << ", \"maskSize\": " << c.features.mask_size
    << ", \"unitMinDuration\": " << c.unit_durations.min << ", \"unitMaxDuration\": " << c.unit_durations.max
    << ", \"pairMinDuration\": " << c.pair_durations.min << ", \"pairMaxDuration\": " << c.pair_durations.max
    << ", \"cGrid\": " << num_list(c.train.c_grid) << ", \"gammaGrid\": " << num_list(c.train.gamma_grid)
    << ", \"smoTolerance\": " << num(c.train.tolerance) << ", \"cvFraction\": " << num(c.train.cv_fraction)
    << ", \"plattFolds\": " << c.train.platt_folds << ", \"roiWidth\": " << c.roi_width
    << ", \"roiHeight\": " << c.roi_height << ", \"fps\": " << num(c.fps) << "}";
  return o.str();
}

SegmentationOptions segmentation_options(const PipelineConfig& config) {
  SegmentationOptions o;
  o.roi.width = config.roi_width;
  o.roi.height = config.roi_height;
  return o;
}

LabeledFeatures collect_samples(const std::vector<AnnotatedRoi>& data, UnitKind kind, const PipelineConfig& config) {
  LabeledFeatures out;
  for (const auto& item : data) {
    for (auto& s : extract_labeled_samples(item.roi, item.transcript, kind, config.features)) {
      out.labels.push_back(std::move(s.label));
      out.x.push_back(std::move(s.features));
    }
  }
  return out;
}

MultiClassModel train_units(const LabeledFeatures& samples, const PipelineConfig& config, TrainReport* report) {
  MultiClassModel m = train_multiclass(samples, config.train, config.features, report);
  m.pipeline_json = config_to_json(config);
  return m;
}

ProbabilityGrid build_grid(const RoiVolume& roi, const MultiClassModel& unit_model, const PipelineConfig& config,
                           const MultiClassModel* pair_model) {
  std::vector<GridSource> sources{{&unit_model, config.unit_durations.min, config.unit_durations.max}};
  if (pair_model) sources.push_back({pair_model, config.pair_durations.min, config.pair_durations.max});
  return build_probability_grid(sources, roi);
}

DecodedSequence map_decoded_to_visemes(const DecodedSequence& seq) {
  DecodedSequence out;
  for (const auto& e : seq) {
    if (auto v = viseme_of(e.label)) out.push_back({*v, e.start, e.duration});
  }
  return out;
}

DecodedSequence decode_roi(const RoiVolume& roi, const MultiClassModel& unit_model, const PipelineConfig& config,
                           const DecodeOptions& options) {
  DecodedSequence seq = decode_sequence(build_grid(roi, unit_model, config, options.pair_model));
  seq = expand_biphones(seq, kPairSeparator);
  return options.visemes ? map_decoded_to_visemes(seq) : seq;
}

LabelSequence scoring_labels(const Transcript& transcript, bool visemes) {
  LabelSequence labels;
  for (const auto& e : transcript) labels.push_back(e.label);
  labels = strip_internal_silence(labels);
  return visemes ? map_to_visemes(labels) : labels;
}

Alignment score_transcripts(const Transcript& ref, const Transcript& hyp, bool visemes) {
  return align_nw(scoring_labels(ref, visemes), scoring_labels(hyp, visemes));
}

std::vector<LearningCurvePoint> learning_curve(const LabeledFeatures& data, std::span<const double> fractions,
                                               const PipelineConfig& config) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.labels.size(); ++i) by_class[data.labels[i]].push_back(i);
  if (by_class.size() < 2) throw std::invalid_argument("learning curve: need at least 2 classes");
  std::vector<std::string> classes;
  LabeledFeatures cv;
  std::map<std::string, std::vector<std::size_t>> train_idx;
  for (const auto& [label, idx] : by_class) {
    if (idx.size() < 3) throw std::invalid_argument("learning curve: class '" + label + "' has fewer than 3 samples");
    classes.push_back(label);
    const auto n_cv = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(config.train.cv_fraction * idx.size() + 1e-9)));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k < n_cv) {
        cv.x.push_back(data.x[idx[k]]);
        cv.labels.push_back(label);
      } else {
        train_idx[label].push_back(idx[k]);
      }
    }
  }
  std::vector<LearningCurvePoint> out;
  for (double f : fractions) {
    if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("learning curve: fractions must be in (0, 1]");
    LabeledFeatures train;
    for (const auto& [label, idx] : train_idx) {
      const auto n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(f * idx.size() - 1e-9)));
      for (std::size_t k = 0; k < std::min(n, idx.size()); ++k) {
        train.x.push_back(data.x[idx[k]]);
        train.labels.push_back(label);
      }
    }
    const auto stats = fit_standardization(train.x);
    LearningCurvePoint best{f, train.x.size(), 0.0, -1.0};
    for (double c : config.train.c_grid) {
      for (double g : config.train.gamma_grid) {
        const auto m = train_one_vs_rest(train, classes, stats, c, g, config.train);
        const double acc = top1_accuracy(m, cv);
        if (acc > best.cv_accuracy) {
          best.cv_accuracy = acc;
          best.train_accuracy = top1_accuracy(m, train);
        }
      }
    }
    out.push_back(best);
  }
  return out;
}

MultiClassModel train_synthetic_model(const SynthConfig& synth, int sentences, const PipelineConfig& config) {
  const FaceTexture texture = make_face_texture(synth);
  const auto seg = segmentation_options(config);
  std::vector<AnnotatedRoi> data;
  for (int i = 0; i < sentences; ++i) {
    SynthSentence s = synth_sentence(synth, texture, i);
    data.push_back({segment_video(s.video, seg).roi, std::move(s.transcript)});
  }
  return train_units(collect_samples(data, UnitKind::Phoneme, config), config);
}

std::vector<BenchRow> run_benchmark(std::span<const int> frame_counts, const SynthConfig& synth,
                                    const MultiClassModel& model, const PipelineConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  const FaceTexture texture = make_face_texture(synth);
  std::vector<BenchRow> rows;
  for (int n : frame_counts) {
    const SynthSentence s = synth_sentence_frames(synth, texture, 9000, n);
    BenchRow row;
    row.frames = n;
    const auto t0 = Clock::now();
    const RoiVolume roi = segment_video(s.video, segmentation_options(config)).roi;
    const auto t1 = Clock::now();
    const ProbabilityGrid grid = build_grid(roi, model, config);
    const auto t2 = Clock::now();
    const DecodedSequence seq = decode_sequence(grid);
    const auto t3 = Clock::now();
    if (seq.empty()) throw DataError("benchmark: empty decode");
    row.segmentation_s = seconds(t0, t1);
    row.grid_s = seconds(t1, t2);
    row.decode_s = seconds(t2, t3);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vsr
