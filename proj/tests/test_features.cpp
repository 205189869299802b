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


#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vsr/features.hpp"

using namespace vsr;

namespace {

double max_abs_diff(const Volume& a, const Volume& b) {
  REQUIRE(a.data.size() == b.data.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

double norm2(const Volume& v) {
  double s = 0.0;
  for (double x : v.data) s += x * x;
  return std::sqrt(s);
}

RoiVolume random_roi(std::mt19937_64& rng, int frames, int w = 12, int h = 9) {
  RoiVolume roi;
  roi.width = w;
  roi.height = h;
  roi.frames = frames;
  roi.channels = {Channel::Red, Channel::Lum};
  roi.data = {oracle::random_volume(rng, w, h, frames), oracle::random_volume(rng, w, h, frames)};
  return roi;
}

}  // namespace

TEST_CASE("dct3 matches the triple-sum definition") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int x = 1 + static_cast<int>(rng() % 8), y = 1 + static_cast<int>(rng() % 8), t = 1 + static_cast<int>(rng() % 8);
    const Volume v = oracle::random_volume(rng, x, y, t);
    CHECK(max_abs_diff(dct3(v), oracle::naive_dct3(v)) < 1e-9);
  }
  std::mt19937_64 rng2(2);
  const Volume v = oracle::random_volume(rng2, 6, 5, 4);
  CHECK(max_abs_diff(dct3(v), oracle::naive_dct3(v)) < 1e-9);
}

TEST_CASE("dct3 round trip, Parseval and DC") {
  std::mt19937_64 rng(3);
  const Volume v = oracle::random_volume(rng, 16, 16, 16);
  const Volume c = dct3(v);
  CHECK(max_abs_diff(idct3(c), v) < 1e-9);
  CHECK(std::fabs(norm2(c) - norm2(v)) < 1e-9);

  const Volume k(3, 4, 5, 2.5);
  const Volume kc = dct3(k);
  CHECK(kc.at(0, 0, 0) == doctest::Approx(2.5 * std::sqrt(60.0)));
  for (std::size_t i = 1; i < kc.data.size(); ++i) CHECK(std::fabs(kc.data[i]) < 1e-9);
}

TEST_CASE("leading dct block equals the full transform bit for bit") {
  std::mt19937_64 rng(4);
  const Volume v = oracle::random_volume(rng, 7, 6, 10);
  const Volume full = dct3(v);
  const Volume lead = dct3_leading(v, 3, 3, 3);
  for (int k = 0; k < 3; ++k) {
    for (int j = 0; j < 3; ++j) {
      for (int i = 0; i < 3; ++i) CHECK(lead.at(i, j, k) == full.at(i, j, k));
    }
  }
  CHECK_THROWS_AS(dct3_leading(v, 8, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(dct3(Volume()), std::invalid_argument);
}

TEST_CASE("pyramid mask counts and order") {
  const int expected[] = {1, 4, 10, 20, 35};
  Volume c(6, 6, 6);
  for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = static_cast<double>(i);
  for (int s = 1; s <= 5; ++s) {
    CHECK(pyramid_feature_count(s) == expected[s - 1]);
    CHECK(pyramid_extract(c, s).size() == static_cast<std::size_t>(expected[s - 1]));
  }
  CHECK(pyramid_extract(c, 1) == std::vector<double>{c.at(0, 0, 0)});
  CHECK(pyramid_extract(c, 2) == std::vector<double>{c.at(0, 0, 0), c.at(0, 0, 1), c.at(0, 1, 0), c.at(1, 0, 0)});
  CHECK_THROWS_AS(pyramid_extract(Volume(2, 6, 6), 3), std::invalid_argument);
  CHECK_THROWS_AS(pyramid_extract(c, 0), std::invalid_argument);
}

TEST_CASE("time shift") {
  std::mt19937_64 rng(5);
  const Volume v = oracle::random_volume(rng, 3, 2, 6);
  CHECK(time_shift(v, 0.0, 25.0).data == v.data);
  const Volume one = time_shift(v, 40.0, 25.0);
  for (int t = 0; t < 6; ++t) {
    for (int y = 0; y < 2; ++y) {
      for (int x = 0; x < 3; ++x) {
        CHECK(one.at(x, y, t) == doctest::Approx(v.at(x, y, std::max(t - 1, 0))));
        const double half = t == 0 ? v.at(x, y, 0) : 0.5 * (v.at(x, y, t) + v.at(x, y, t - 1));
        CHECK(time_shift(v, 20.0, 25.0).at(x, y, t) == doctest::Approx(half));
      }
    }
  }
  CHECK_THROWS_AS(time_shift(v, -1.0, 25.0), std::invalid_argument);
}

TEST_CASE("sequence mean subtraction") {
  CHECK(subtract_sequence_mean(Volume(2, 2, 3, 4.0)).data == std::vector<double>(12, 0.0));
  Volume two(1, 1, 2);
  two.data = {3.0, 5.0};
  CHECK(subtract_sequence_mean(two).data == std::vector<double>{-1.0, 1.0});
  std::mt19937_64 rng(6);
  const Volume z = subtract_sequence_mean(oracle::random_volume(rng, 4, 3, 7));
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 4; ++x) {
      double m = 0.0;
      for (int t = 0; t < 7; ++t) m += z.at(x, y, t);
      CHECK(std::fabs(m / 7.0) < 1e-9);
    }
  }
}

TEST_CASE("subsequence enumeration") {
  CHECK(enumerate_subsequences(5, 1, 3).size() == 12);
  CHECK(enumerate_subsequences(3, 4, 6).empty());
  CHECK(enumerate_subsequences(100, 1, 25).size() == 2200);
  const auto specs = enumerate_subsequences(4, 2, 3);
  CHECK(specs == std::vector<SubSequenceSpec>{{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 2}});
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = static_cast<int>(rng() % 40);
    const int dmin = 1 + static_cast<int>(rng() % 10);
    const int dmax = dmin + static_cast<int>(rng() % 10);
    std::size_t expect = 0;
    for (int d = dmin; d <= std::min(dmax, n); ++d) expect += static_cast<std::size_t>(std::max(0, n - d + 1));
    CHECK(enumerate_subsequences(n, dmin, dmax).size() == expect);
  }
  CHECK_THROWS_AS(enumerate_subsequences(5, 3, 2), std::invalid_argument);
}

TEST_CASE("temporal resampling") {
  std::mt19937_64 rng(8);
  const Volume v = oracle::random_volume(rng, 3, 3, 10);
  CHECK(resample_to_length(v, 10).data == v.data);
  Volume two(1, 1, 2);
  two.data = {0.0, 1.0};
  const Volume three = resample_to_length(two, 3);
  CHECK(three.data[0] == 0.0);
  CHECK(three.data[1] == doctest::Approx(0.5));
  CHECK(three.data[2] == 1.0);
  Volume single(2, 1, 1);
  single.data = {0.25, -1.0};
  const Volume rep = resample_to_length(single, 4);
  for (int t = 0; t < 4; ++t) {
    CHECK(rep.at(0, 0, t) == 0.25);
    CHECK(rep.at(1, 0, t) == -1.0);
  }
  for (int d : {2, 3, 7, 13, 25}) {
    const Volume in = oracle::random_volume(rng, 2, 2, d);
    const Volume out = resample_to_length(in, 10);
    for (int p = 0; p < 4; ++p) {
      double lo = 1e9, hi = -1e9;
      for (int t = 0; t < d; ++t) {
        lo = std::min(lo, in.data[t * 4 + p]);
        hi = std::max(hi, in.data[t * 4 + p]);
      }
      for (int t = 0; t < 10; ++t) {
        CHECK(out.data[t * 4 + p] >= lo - 1e-12);
        CHECK(out.data[t * 4 + p] <= hi + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(resample_to_length(v, 1), std::invalid_argument);
}

TEST_CASE("featurize equals composing the stages by hand") {
  std::mt19937_64 rng(9);
  const RoiVolume roi = random_roi(rng, 30);
  FeatureConfig cfg;  // red, 30 ms, l = 10, s = 3
  for (const SubSequenceSpec spec : {SubSequenceSpec{0, 1}, SubSequenceSpec{4, 7}, SubSequenceSpec{5, 25}, SubSequenceSpec{29, 1}}) {
    const Volume shifted = time_shift(roi.channel(Channel::Red), 30.0, 25.0);
    const Volume centred = subtract_sequence_mean(shifted);
    const Volume coeffs = oracle::naive_dct3(resample_to_length(slice_frames(centred, spec), 10));
    std::vector<double> expect;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          if (i + j + k <= 2) expect.push_back(coeffs.at(i, j, k));
        }
      }
    }
    expect.push_back(spec.duration);
    const auto got = featurize(roi, cfg, spec);
    REQUIRE(got.size() == 11);
    for (std::size_t n = 0; n < got.size(); ++n) CHECK(std::fabs(got[n] - expect[n]) < 1e-9);
    CHECK(got.back() == spec.duration);
  }
}

TEST_CASE("featurize of a constant video and offset invariance") {
  RoiVolume roi;
  roi.width = 8;
  roi.height = 6;
  roi.frames = 12;
  roi.channels = {Channel::Red};
  roi.data = {Volume(8, 6, 12, 0.7)};
  const auto v = featurize(roi, {}, {2, 5});
  for (std::size_t i = 0; i + 1 < v.size(); ++i) CHECK(std::fabs(v[i]) < 1e-12);
  CHECK(v.back() == 5.0);

  std::mt19937_64 rng(10);
  RoiVolume a = random_roi(rng, 20);
  RoiVolume b = a;
  const Volume offset = oracle::random_volume(rng, a.width, a.height, 1);
  for (int t = 0; t < b.frames; ++t) {
    for (int y = 0; y < b.height; ++y) {
      for (int x = 0; x < b.width; ++x) b.data[0].at(x, y, t) += offset.at(x, y, 0);
    }
  }
  const auto fa = featurize(a, {}, {3, 9});
  const auto fb = featurize(b, {}, {3, 9});
  for (std::size_t i = 0; i < fa.size(); ++i) CHECK(std::fabs(fa[i] - fb[i]) < 1e-9);
}

TEST_CASE("extractor output order follows the subsequence list for any thread count") {
  std::mt19937_64 rng(11);
  const RoiVolume roi = random_roi(rng, 20);
  const auto specs = enumerate_subsequences(20, 1, 6);
  set_worker_threads(1);
  const auto serial = FeatureExtractor(roi, {}).extract(specs);
  set_worker_threads(4);
  const auto parallel = FeatureExtractor(roi, {}).extract(specs);
  set_worker_threads(1);
  CHECK(serial == parallel);
  CHECK(serial[7] == featurize(roi, {}, specs[7]));
  CHECK(FeatureExtractor(roi, {}).dimension() == 11);
}

TEST_CASE("feature configuration errors") {
  std::mt19937_64 rng(12);
  const RoiVolume roi = random_roi(rng, 10);
  FeatureConfig bad;
  bad.mask_size = 11;
  CHECK_THROWS_AS(FeatureExtractor(roi, bad), std::invalid_argument);
  FeatureConfig missing;
  missing.channel = Channel::Blue;
  CHECK_THROWS_AS(FeatureExtractor(roi, missing), std::invalid_argument);
  CHECK_THROWS_AS(featurize(roi, {}, {8, 5}), std::invalid_argument);
}

TEST_CASE("standardization") {
  const std::vector<FeatureVector> rows{{1.0, 5.0}, {3.0, 5.0}};
  const auto st = fit_standardization(rows);
  CHECK(st.mean == std::vector<double>{2.0, 5.0});
  CHECK(st.stddev == std::vector<double>{1.0, 1.0});
  CHECK(standardize(rows[0], st) == FeatureVector{-1.0, 0.0});
  CHECK(standardize(rows[1], st) == FeatureVector{1.0, 0.0});

  std::mt19937_64 rng(13);
  std::normal_distribution<double> n(3.0, 2.0);
  std::vector<FeatureVector> m(50, FeatureVector(4));
  for (auto& r : m) {
    for (auto& x : r) x = n(rng);
  }
  const auto s2 = fit_standardization(m);
  for (std::size_t d = 0; d < 4; ++d) {
    double mean = 0.0, var = 0.0;
    for (const auto& r : m) mean += standardize(r, s2)[d];
    mean /= 50.0;
    for (const auto& r : m) var += std::pow(standardize(r, s2)[d] - mean, 2);
    CHECK(std::fabs(mean) < 1e-9);
    CHECK(std::fabs(std::sqrt(var / 50.0) - 1.0) < 1e-6);
  }
  CHECK_THROWS_AS(fit_standardization(std::vector<FeatureVector>{{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(standardize(FeatureVector{1.0}, st), std::invalid_argument);
}

TEST_CASE("transcript spans and labeled samples") {
  CHECK(transcript_span(200, 360, 25.0, 100) == SubSequenceSpec{5, 4});
  CHECK(transcript_span(0, 10, 25.0, 100) == SubSequenceSpec{0, 1});
  CHECK(transcript_span(3900, 4100, 25.0, 100) == SubSequenceSpec{97, 3});

  std::mt19937_64 rng(14);
  const RoiVolume roi = random_roi(rng, 30);
  const Transcript tr{{"F", 0, 200}, {"V", 200, 480}, {"AE", 480, 1000}};
  const auto ph = extract_labeled_samples(roi, tr, UnitKind::Phoneme, {});
  REQUIRE(ph.size() == 3);
  CHECK(ph[1].span == SubSequenceSpec{5, 7});
  CHECK(ph[1].features == featurize(roi, {}, {5, 7}));
  const auto bi = extract_labeled_samples(roi, tr, UnitKind::Biphone, {});
  REQUIRE(bi.size() == 2);
  CHECK(bi[0].label == "F+V");
  CHECK(bi[0].span == SubSequenceSpec{0, 12});
  const auto vis = extract_labeled_samples(roi, tr, UnitKind::Viseme, {});
  CHECK(vis[0].label == "/A");
  CHECK(vis[1].label == "/A");
  const auto bv = extract_labeled_samples(roi, tr, UnitKind::BiViseme, {});
  CHECK(bv[0].label == "/A+/A");
  CHECK(extract_labeled_samples(roi, {}, UnitKind::Phoneme, {}).empty());

  const Transcript hh{{"HH", 0, 200}, {"AE", 200, 400}};
  CHECK(extract_labeled_samples(roi, hh, UnitKind::Viseme, {}).size() == 1);
  CHECK(extract_labeled_samples(roi, hh, UnitKind::BiViseme, {}).empty());
  CHECK_THROWS_AS(extract_labeled_samples(roi, Transcript{{"A", 100, 50}}, UnitKind::Phoneme, {}),
                  std::invalid_argument);
}

TEST_CASE("unit kind names round trip") {
  for (auto k : {UnitKind::Phoneme, UnitKind::Viseme, UnitKind::Biphone, UnitKind::BiViseme}) {
    CHECK(parse_unit_kind(unit_kind_name(k)) == k);
  }
  CHECK(parse_unit_kind("bi-viseme") == UnitKind::BiViseme);
  CHECK_THROWS_AS(parse_unit_kind("triphone"), std::invalid_argument);
}
