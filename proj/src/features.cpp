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

#include "vsr/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "vsr/eval.hpp"

namespace vsr {

namespace {

// Row k of the orthonormal DCT-II matrix of size n, for all k < n.
const std::vector<double>& dct_basis(int n) {
  thread_local std::map<int, std::vector<double>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> b(static_cast<std::size_t>(n) * n);
  const double a0 = std::sqrt(1.0 / n), ak = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      b[static_cast<std::size_t>(k) * n + i] =
          (k == 0 ? a0 : ak) * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
    }
  }
  return cache.emplace(n, std::move(b)).first->second;
}

void check_dims(const Volume& v, const char* what) {
  if (v.width < 1 || v.height < 1 || v.frames < 1) {
    throw std::invalid_argument(std::string(what) + ": all dimensions must be >= 1");
  }
}

}  // namespace

Volume time_shift(const Volume& volume, double delta_t_ms, double fps) {
  if (delta_t_ms < 0.0) throw std::invalid_argument("time_shift: deltaTms must be >= 0");
  if (!(fps > 0.0)) throw std::invalid_argument("time_shift: fps must be positive");
  const double shift = delta_t_ms * fps / 1000.0;
  if (shift == 0.0) return volume;
  Volume out(volume.width, volume.height, volume.frames);
  const std::size_t fs = volume.frame_size();
  for (int t = 0; t < volume.frames; ++t) {
    const double tau = std::clamp(t - shift, 0.0, static_cast<double>(volume.frames - 1));
    const int i0 = static_cast<int>(std::floor(tau));
    const int i1 = std::min(i0 + 1, volume.frames - 1);
    const double f = tau - i0;
    const double* a = &volume.data[i0 * fs];
    const double* b = &volume.data[i1 * fs];
    double* o = &out.data[t * fs];
    for (std::size_t p = 0; p < fs; ++p) o[p] = f == 0.0 ? a[p] : (1.0 - f) * a[p] + f * b[p];
  }
  return out;
}

Volume subtract_sequence_mean(const Volume& volume) {
  if (volume.frames < 1) throw std::invalid_argument("subtract_sequence_mean: empty volume");
  const std::size_t fs = volume.frame_size();
  std::vector<double> mean(fs, 0.0);
  for (int t = 0; t < volume.frames; ++t) {
    for (std::size_t p = 0; p < fs; ++p) mean[p] += volume.data[t * fs + p];
  }
  for (auto& m : mean) m /= volume.frames;
  Volume out = volume;
  for (int t = 0; t < volume.frames; ++t) {
    for (std::size_t p = 0; p < fs; ++p) out.data[t * fs + p] -= mean[p];
  }
  return out;
}

std::vector<SubSequenceSpec> enumerate_subsequences(int frame_count, int min_duration, int max_duration) {
  if (min_duration < 1 || max_duration < min_duration) {
    throw std::invalid_argument("enumerate_subsequences: need 1 <= minDur <= maxDur");
  }
  std::vector<SubSequenceSpec> specs;
  const int dmax = std::min(max_duration, frame_count);
  for (int start = 0; start < frame_count; ++start) {
    for (int d = min_duration; d <= dmax && start + d <= frame_count; ++d) specs.push_back({start, d});
  }
  return specs;
}

Volume slice_frames(const Volume& volume, const SubSequenceSpec& spec) {
  if (spec.start < 0 || spec.duration < 1 || spec.start + spec.duration > volume.frames) {
    throw std::invalid_argument("subsequence (" + std::to_string(spec.start) + ", " +
                                std::to_string(spec.duration) + ") does not fit " +
                                std::to_string(volume.frames) + " frames");
  }
  Volume out(volume.width, volume.height, spec.duration);
  const std::size_t fs = volume.frame_size();
  std::copy_n(volume.data.begin() + static_cast<std::ptrdiff_t>(spec.start * fs), spec.duration * fs,
              out.data.begin());
  return out;
}

Volume resample_to_length(const Volume& volume, int length) {
  if (volume.frames < 1 || length < 2) throw std::invalid_argument("resample_to_length: need d >= 1 and l >= 2");
  const int d = volume.frames;
  if (d == length) return volume;
  Volume out(volume.width, volume.height, length);
  const std::size_t fs = volume.frame_size();
  for (int j = 0; j < length; ++j) {
    const double tau = d == 1 ? 0.0 : static_cast<double>(j) * (d - 1) / (length - 1);
    const int i0 = std::min(static_cast<int>(std::floor(tau)), d - 1);
    const int i1 = std::min(i0 + 1, d - 1);
    const double f = tau - i0;
    const double* a = &volume.data[i0 * fs];
    const double* b = &volume.data[i1 * fs];
    double* o = &out.data[j * fs];
    for (std::size_t p = 0; p < fs; ++p) o[p] = f == 0.0 ? a[p] : (1.0 - f) * a[p] + f * b[p];
  }
  return out;
}

Volume dct3_leading(const Volume& v, int keep_x, int keep_y, int keep_t) {
  check_dims(v, "dct3");
  if (keep_x < 1 || keep_y < 1 || keep_t < 1 || keep_x > v.width || keep_y > v.height || keep_t > v.frames) {
    throw std::invalid_argument("dct3_leading: kept block exceeds the volume");
  }
  const int W = v.width, H = v.height, T = v.frames;
  const auto& bx = dct_basis(W);
  const auto& by = dct_basis(H);
  const auto& bt = dct_basis(T);

  Volume a(keep_x, H, T);
  for (int t = 0; t < T; ++t) {
    for (int y = 0; y < H; ++y) {
      const double* row = &v.data[v.index(0, y, t)];
      for (int i = 0; i < keep_x; ++i) {
        const double* basis = &bx[static_cast<std::size_t>(i) * W];
        double acc = 0.0;
        for (int x = 0; x < W; ++x) acc += basis[x] * row[x];
        a.at(i, y, t) = acc;
      }
    }
  }
  Volume b(keep_x, keep_y, T);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < keep_y; ++j) {
      const double* basis = &by[static_cast<std::size_t>(j) * H];
      for (int i = 0; i < keep_x; ++i) {
        double acc = 0.0;
        for (int y = 0; y < H; ++y) acc += basis[y] * a.at(i, y, t);
        b.at(i, j, t) = acc;
      }
    }
  }
  Volume c(keep_x, keep_y, keep_t);
  for (int k = 0; k < keep_t; ++k) {
    const double* basis = &bt[static_cast<std::size_t>(k) * T];
    for (int j = 0; j < keep_y; ++j) {
      for (int i = 0; i < keep_x; ++i) {
        double acc = 0.0;
        for (int t = 0; t < T; ++t) acc += basis[t] * b.at(i, j, t);
        c.at(i, j, k) = acc;
      }
    }
  }
  return c;
}

Volume dct3(const Volume& volume) {
  check_dims(volume, "dct3");
  return dct3_leading(volume, volume.width, volume.height, volume.frames);
}

Volume idct3(const Volume& c) {
  check_dims(c, "idct3");
  const int W = c.width, H = c.height, T = c.frames;
  const auto& bx = dct_basis(W);
  const auto& by = dct_basis(H);
  const auto& bt = dct_basis(T);
  Volume a(W, H, T), b(W, H, T), out(W, H, T);
  for (int t = 0; t < T; ++t) {
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double acc = 0.0;
        for (int k = 0; k < T; ++k) acc += bt[static_cast<std::size_t>(k) * T + t] * c.at(x, y, k);
        a.at(x, y, t) = acc;
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double acc = 0.0;
        for (int j = 0; j < H; ++j) acc += by[static_cast<std::size_t>(j) * H + y] * a.at(x, j, t);
        b.at(x, y, t) = acc;
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        double acc = 0.0;
        for (int i = 0; i < W; ++i) acc += bx[static_cast<std::size_t>(i) * W + x] * b.at(i, y, t);
        out.at(x, y, t) = acc;
      }
    }
  }
  return out;
}

std::vector<double> pyramid_extract(const Volume& coeffs, int s) {
  if (s < 1) throw std::invalid_argument("pyramid_extract: s must be >= 1");
  if (s > coeffs.width || s > coeffs.height || s > coeffs.frames) {
    throw std::invalid_argument("pyramid_extract: mask size " + std::to_string(s) +
                                " exceeds a coefficient dimension");
  }
  std::vector<double> out;
  out.reserve(pyramid_feature_count(s));
  for (int i = 0; i < s; ++i) {
    for (int j = 0; i + j < s; ++j) {
      for (int k = 0; i + j + k < s; ++k) out.push_back(coeffs.at(i, j, k));
    }
  }
  return out;
}

// --- extractor -----------------------------------------------------------

FeatureExtractor::FeatureExtractor(const RoiVolume& roi, const FeatureConfig& config) : config_(config) {
  if (config.uniform_length < 2) throw std::invalid_argument("uniform length must be >= 2");
  if (config.mask_size < 1 || config.mask_size > config.uniform_length) {
    throw std::invalid_argument("mask size must be in [1, uniform length]");
  }
  prepared_ = subtract_sequence_mean(time_shift(roi.channel(config.channel), config.delta_t_ms, roi.fps));
}

FeatureVector FeatureExtractor::operator()(const SubSequenceSpec& spec) const {
  const int s = config_.mask_size;
  const Volume resampled = resample_to_length(slice_frames(prepared_, spec), config_.uniform_length);
  FeatureVector v = pyramid_extract(dct3_leading(resampled, s, s, s), s);
  v.push_back(static_cast<double>(spec.duration));
  return v;
}

std::vector<FeatureVector> FeatureExtractor::extract(std::span<const SubSequenceSpec> specs) const {
  std::vector<FeatureVector> out(specs.size());
  parallel_for(specs.size(), [&](std::size_t i) { out[i] = (*this)(specs[i]); });
  return out;
}

FeatureVector featurize(const RoiVolume& roi, const FeatureConfig& config, const SubSequenceSpec& spec) {
  return FeatureExtractor(roi, config)(spec);
}

// --- standardization -----------------------------------------------------

StandardizationStats fit_standardization(std::span<const FeatureVector> rows) {
  if (rows.size() < 2) throw std::invalid_argument("fit_standardization: need at least 2 vectors");
  const std::size_t dim = rows[0].size();
  StandardizationStats st{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};
  for (const auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("fit_standardization: ragged feature matrix");
    for (std::size_t d = 0; d < dim; ++d) st.mean[d] += r[d];
  }
  const double n = static_cast<double>(rows.size());
  for (auto& m : st.mean) m /= n;
  for (const auto& r : rows) {
    for (std::size_t d = 0; d < dim; ++d) {
      const double e = r[d] - st.mean[d];
      st.stddev[d] += e * e;
    }
  }
  for (auto& s : st.stddev) {
    s = std::sqrt(s / n);
    if (!(s > 0.0)) s = 1.0;
  }
  return st;
}

FeatureVector standardize(std::span<const double> v, const StandardizationStats& stats) {
  if (v.size() != stats.mean.size()) {
    throw std::invalid_argument("standardize: dimension " + std::to_string(v.size()) + " != " +
                                std::to_string(stats.mean.size()));
  }
  FeatureVector out(v.size());
  for (std::size_t d = 0; d < v.size(); ++d) out[d] = (v[d] - stats.mean[d]) / stats.stddev[d];
  return out;
}

// --- transcripts ---------------------------------------------------------

void validate_transcript(const Transcript& transcript) {
  int prev_end = std::numeric_limits<int>::min();
  for (std::size_t i = 0; i < transcript.size(); ++i) {
    const auto& e = transcript[i];
    if (e.label.empty()) throw std::invalid_argument("transcript entry " + std::to_string(i) + " has no label");
    if (e.start_ms >= e.end_ms) {
      throw std::invalid_argument("transcript entry " + std::to_string(i) + " has start >= end");
    }
    if (e.start_ms < prev_end) {
      throw std::invalid_argument("transcript entry " + std::to_string(i) + " overlaps its predecessor");
    }
    prev_end = e.end_ms;
  }
}

UnitKind parse_unit_kind(std::string_view name) {
  if (name == "phoneme") return UnitKind::Phoneme;
  if (name == "viseme") return UnitKind::Viseme;
  if (name == "biphone") return UnitKind::Biphone;
  if (name == "biviseme" || name == "bi-viseme") return UnitKind::BiViseme;
  throw std::invalid_argument("unknown unit kind '" + std::string(name) + "'");
}

std::string_view unit_kind_name(UnitKind kind) {
  switch (kind) {
    case UnitKind::Phoneme: return "phoneme";
    case UnitKind::Viseme: return "viseme";
    case UnitKind::Biphone: return "biphone";
    case UnitKind::BiViseme: return "biviseme";
  }
  return "?";
}

SubSequenceSpec transcript_span(int start_ms, int end_ms, double fps, int frame_count) {
  // The epsilon keeps exact frame boundaries (e.g. 360 ms at 25 fps) from
  // drifting across an integer through rounding.
  int start = static_cast<int>(std::floor(start_ms * fps / 1000.0 + 1e-9));
  int end = static_cast<int>(std::ceil(end_ms * fps / 1000.0 - 1e-9));
  start = std::clamp(start, 0, std::max(0, frame_count - 1));
  end = std::min(end, frame_count);
  return {start, std::max(1, end - start)};
}

std::vector<LabeledSample> extract_labeled_samples(const RoiVolume& roi, const Transcript& transcript,
                                                   UnitKind kind, const FeatureConfig& config) {
  if (transcript.empty()) return {};
  validate_transcript(transcript);

  const bool visemes = kind == UnitKind::Viseme || kind == UnitKind::BiViseme;
  std::vector<std::optional<std::string>> labels;
  for (const auto& e : transcript) {
    labels.push_back(visemes ? viseme_of(e.label) : std::optional<std::string>(e.label));
  }

  std::vector<LabeledSample> samples;
  const int n = roi.frames;
  if (!is_pair_kind(kind)) {
    for (std::size_t i = 0; i < transcript.size(); ++i) {
      if (!labels[i]) continue;  // HH has no viseme
      samples.push_back({*labels[i], transcript_span(transcript[i].start_ms, transcript[i].end_ms, roi.fps, n), {}});
    }
  } else {
    for (std::size_t i = 0; i + 1 < transcript.size(); ++i) {
      if (!labels[i] || !labels[i + 1]) continue;
      samples.push_back({*labels[i] + kPairSeparator + *labels[i + 1],
                         transcript_span(transcript[i].start_ms, transcript[i + 1].end_ms, roi.fps, n), {}});
    }
  }
  if (samples.empty()) return samples;

  const FeatureExtractor extractor(roi, config);
  std::vector<SubSequenceSpec> spans;
  for (const auto& s : samples) spans.push_back(s.span);
  auto features = extractor.extract(spans);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].features = std::move(features[i]);
  return samples;
}

}  // namespace vsr
