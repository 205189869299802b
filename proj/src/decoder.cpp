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

#include "vsr/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vsr/svm.hpp"

namespace vsr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_specs(std::span<const ClassDurationSpec> classes) {
  for (const auto& c : classes) {
    if (c.min_duration < 1 || c.max_duration < c.min_duration) {
      throw std::invalid_argument("class '" + c.label + "': need 1 <= dmin <= dmax, got " +
                                  std::to_string(c.min_duration) + ".." + std::to_string(c.max_duration));
    }
  }
}

}  // namespace

ProbabilityGrid::ProbabilityGrid(std::vector<ClassDurationSpec> classes, int frame_count)
    : classes_(std::move(classes)), frame_count_(frame_count) {
  if (frame_count < 0) throw std::invalid_argument("grid: negative frame count");
  check_specs(classes_);
  probs_.reserve(classes_.size());
  for (const auto& c : classes_) {
    probs_.emplace_back(static_cast<std::size_t>(frame_count) * (c.max_duration - c.min_duration + 1), -1.0);
  }
}

int ProbabilityGrid::max_duration() const {
  int m = 0;
  for (const auto& c : classes_) m = std::max(m, c.max_duration);
  return m;
}

bool ProbabilityGrid::valid(std::size_t cls, int start, int duration) const {
  if (cls >= classes_.size()) return false;
  const auto& c = classes_[cls];
  return duration >= c.min_duration && duration <= c.max_duration && start >= 0 &&
         start + duration <= frame_count_;
}

std::size_t ProbabilityGrid::offset(std::size_t cls, int start, int duration) const {
  const auto& c = classes_[cls];
  return static_cast<std::size_t>(start) * (c.max_duration - c.min_duration + 1) + (duration - c.min_duration);
}

double ProbabilityGrid::at(std::size_t cls, int start, int duration) const {
  return valid(cls, start, duration) ? probs_[cls][offset(cls, start, duration)] : -1.0;
}

void ProbabilityGrid::set(std::size_t cls, int start, int duration, double p) {
  if (!valid(cls, start, duration)) {
    throw std::out_of_range("grid cell (" + std::to_string(cls) + ", " + std::to_string(start) + ", " +
                            std::to_string(duration) + ") is invalid");
  }
  if (std::isnan(p)) throw std::invalid_argument("grid: probability is NaN");
  probs_[cls][offset(cls, start, duration)] = std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
}

namespace {

bool same_features(const FeatureConfig& a, const FeatureConfig& b) {
  return a.channel == b.channel && a.delta_t_ms == b.delta_t_ms && a.uniform_length == b.uniform_length &&
         a.mask_size == b.mask_size;
}

}  // namespace

ProbabilityGrid build_probability_grid(std::span<const GridSource> sources, const RoiVolume& roi) {
  if (sources.empty()) throw std::invalid_argument("grid: no classifiers given");
  std::vector<ClassDurationSpec> classes;
  std::vector<std::size_t> first_class;  // per source
  for (const auto& src : sources) {
    if (src.model == nullptr) throw std::invalid_argument("grid: null model");
    first_class.push_back(classes.size());
    for (const auto& label : src.model->class_labels) classes.push_back({label, src.min_duration, src.max_duration});
  }
  ProbabilityGrid grid(classes, roi.frames);

  std::vector<bool> done(sources.size(), false);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (done[i]) continue;
    const FeatureConfig cfg = sources[i].model->features;
    std::vector<std::size_t> group;
    int dmin = std::numeric_limits<int>::max(), dmax = 0;
    for (std::size_t j = i; j < sources.size(); ++j) {
      if (!done[j] && same_features(sources[j].model->features, cfg)) {
        done[j] = true;
        group.push_back(j);
        dmin = std::min(dmin, sources[j].min_duration);
        dmax = std::max(dmax, sources[j].max_duration);
      }
    }
    const FeatureExtractor extractor(roi, cfg);
    const auto specs = enumerate_subsequences(roi.frames, dmin, dmax);
    const auto features = extractor.extract(specs);
    parallel_for(specs.size(), [&](std::size_t n) {
      const auto& sp = specs[n];
      for (std::size_t j : group) {
        const auto& src = sources[j];
        if (sp.duration < src.min_duration || sp.duration > src.max_duration) continue;
        const auto p = predict_probabilities(*src.model, features[n]);
        for (std::size_t k = 0; k < p.size(); ++k) grid.set(first_class[j] + k, sp.start, sp.duration, p[k]);
      }
    });
  }
  return grid;
}

DurationHmm build_duration_hmm(std::span<const ClassDurationSpec> classes) {
  if (classes.empty()) throw std::invalid_argument("duration HMM: no classes");
  check_specs(classes);
  DurationHmm hmm;
  hmm.classes.assign(classes.begin(), classes.end());
  int dmax = 0;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (int d = classes[c].min_duration; d <= classes[c].max_duration; ++d) hmm.states.push_back({false, c, d});
    dmax = std::max(dmax, classes[c].max_duration);
  }
  hmm.start_state_count = hmm.states.size();
  for (int k = 1; k < dmax; ++k) hmm.states.push_back({true, 0, k});

  Transitions tr(hmm.states.size());
  const auto to_all_starts = [&](std::size_t from) {
    for (std::size_t s = 0; s < hmm.start_state_count; ++s) tr.add(from, s, 1.0);
  };
  for (std::size_t s = 0; s < hmm.states.size(); ++s) {
    const auto& st = hmm.states[s];
    if (st.duration == 1) {
      to_all_starts(s);
    } else {
      tr.add(s, hmm.dummy_index(st.duration - 1), 1.0);
    }
  }
  tr.finalize();
  hmm.transitions = std::move(tr);
  return hmm;
}

DecodedSequence decode_sequence(const ProbabilityGrid& grid) {
  const int frames = grid.frame_count();
  if (frames < 1) throw DataError("decode: empty sequence");
  const DurationHmm hmm = build_duration_hmm(grid.classes());
  const std::size_t n = hmm.states.size();

  std::vector<double> priors(n, kNegInf);
  std::fill(priors.begin(), priors.begin() + static_cast<std::ptrdiff_t>(hmm.start_state_count), 0.0);

  // Dummy states observe weight 1; start states observe p^d, i.e. d log p.
  LogObservations obs(static_cast<std::size_t>(frames), n, 0.0);
  for (int t = 0; t < frames; ++t) {
    for (std::size_t s = 0; s < hmm.start_state_count; ++s) {
      const auto& st = hmm.states[s];
      const double p = grid.at(st.cls, t, st.duration);
      obs.at(t, s) = p > 0.0 ? st.duration * std::log(p) : kNegInf;
    }
  }

  ViterbiPath path;
  try {
    path = viterbi_log(priors, hmm.transitions, obs);
  } catch (const DataError&) {
    throw DataError("decode: no feasible segmentation of " + std::to_string(frames) +
                    " frames under the duration bounds");
  }

  DecodedSequence out;
  for (int t = 0; t < frames; ++t) {
    const auto& st = hmm.states[path.states[t]];
    if (!st.dummy) out.push_back({hmm.classes[st.cls].label, t, st.duration});
  }
  return out;
}

double segmentation_log_score(const ProbabilityGrid& grid, const DecodedSequence& seq) {
  double score = 0.0;
  for (const auto& e : seq) {
    double p = -1.0;
    for (std::size_t c = 0; c < grid.classes().size(); ++c) {
      if (grid.classes()[c].label == e.label && grid.valid(c, e.start, e.duration)) {
        p = grid.at(c, e.start, e.duration);
        break;
      }
    }
    if (!(p > 0.0)) return kNegInf;
    score += e.duration * std::log(p);
  }
  return score;
}

DecodedSequence expand_biphones(const DecodedSequence& seq, char separator) {
  DecodedSequence out;
  for (const auto& e : seq) {
    const auto pos = e.label.find(separator);
    if (pos == std::string::npos) {
      out.push_back(e);
      continue;
    }
    const std::string a = e.label.substr(0, pos), b = e.label.substr(pos + 1);
    if (a.empty() || b.empty() || b.find(separator) != std::string::npos) {
      throw std::invalid_argument("malformed composite label '" + e.label + "'");
    }
    if (e.duration < 2) {
      throw std::invalid_argument("composite label '" + e.label + "' spans fewer than 2 frames");
    }
    const int first = (e.duration + 1) / 2;
    out.push_back({a, e.start, first});
    out.push_back({b, e.start + first, e.duration - first});
  }
  return out;
}

Transcript to_transcript(const DecodedSequence& seq, double fps) {
  if (!(fps > 0.0)) throw std::invalid_argument("to_transcript: fps must be positive");
  Transcript out;
  for (const auto& e : seq) {
    out.push_back({e.label, static_cast<int>(std::lround(e.start * 1000.0 / fps)),
                   static_cast<int>(std::lround((e.start + e.duration) * 1000.0 / fps))});
  }
  return out;
}

}  // namespace vsr
