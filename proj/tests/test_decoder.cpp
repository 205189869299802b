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


#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vsr/decoder.hpp"
#include "vsr/pipeline.hpp"

using namespace vsr;

namespace {

void check_tiles(const DecodedSequence& seq, const ProbabilityGrid& g) {
  int t = 0;
  for (const auto& e : seq) {
    CHECK(e.start == t);
    const auto it = std::find_if(g.classes().begin(), g.classes().end(),
                                 [&](const ClassDurationSpec& c) { return c.label == e.label; });
    REQUIRE(it != g.classes().end());
    CHECK(e.duration >= it->min_duration);
    CHECK(e.duration <= it->max_duration);
    t += e.duration;
  }
  CHECK(t == g.frame_count());
}

DecodedSequence as_sequence(const ProbabilityGrid& g, const std::vector<oracle::Segment>& segs) {
  DecodedSequence out;
  for (const auto& s : segs) out.push_back({g.classes()[s.cls].label, s.start, s.duration});
  return out;
}

ProbabilityGrid transformed(const ProbabilityGrid& g, double power, double factor) {
  ProbabilityGrid out(g.classes(), g.frame_count());
  for (std::size_t c = 0; c < g.classes().size(); ++c) {
    for (int t = 0; t < g.frame_count(); ++t) {
      for (int d = g.classes()[c].min_duration; d <= g.classes()[c].max_duration; ++d) {
        if (g.valid(c, t, d)) out.set(c, t, d, factor * std::pow(g.at(c, t, d), power));
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("decoding matches exhaustive segmentation and the chained construction") {
  std::mt19937_64 rng(31);
  int compared = 0, infeasible = 0;
  while (compared < 100) {
    const int classes = 1 + static_cast<int>(rng() % 3);
    const int frames = 1 + static_cast<int>(rng() % 8);
    const int dmin = 1 + static_cast<int>(rng() % 3);
    const int dmax = dmin + static_cast<int>(rng() % (4 - dmin));
    const auto g = oracle::random_grid(rng, classes, frames, dmin, dmax);
    const auto best = oracle::brute_force_segmentation(g);
    if (best.segments.empty()) {
      CHECK_THROWS_AS(decode_sequence(g), DataError);
      CHECK(std::isinf(oracle::chained_log_score(g)));
      ++infeasible;
      continue;
    }
    ++compared;
    const auto seq = decode_sequence(g);
    check_tiles(seq, g);
    const double score = segmentation_log_score(g, seq);
    CHECK(std::fabs(score - best.log_score) < 1e-9);
    CHECK(std::fabs(oracle::chained_log_score(g) - best.log_score) < 1e-9);
    if (best.ties == 1) CHECK(seq == as_sequence(g, best.segments));
  }
  CHECK(infeasible > 0);
}

TEST_CASE("power and scale transforms keep the best segmentation") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = oracle::random_grid(rng, 3, 7, 1, 3);
    const auto base = decode_sequence(g);
    CHECK(decode_sequence(transformed(g, 2.5, 1.0)) == base);
    CHECK(decode_sequence(transformed(g, 0.5, 1.0)) == base);
    const auto scaled = transformed(g, 1.0, 0.5);
    const auto best = oracle::brute_force_segmentation(scaled);
    CHECK(decode_sequence(scaled) == as_sequence(scaled, best.segments));
  }
}

TEST_CASE("a single duration per class reduces to blockwise argmax") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = oracle::random_grid(rng, 3, 12, 3, 3);
    const auto seq = decode_sequence(g);
    REQUIRE(seq.size() == 4);
    for (int b = 0; b < 4; ++b) {
      std::size_t arg = 0;
      for (std::size_t c = 1; c < 3; ++c) {
        if (g.at(c, 3 * b, 3) > g.at(arg, 3 * b, 3)) arg = c;
      }
      CHECK(seq[b] == DecodedEntry{g.classes()[arg].label, 3 * b, 3});
    }
  }
}

TEST_CASE("single class with fixed duration") {
  ProbabilityGrid g({{"c", 5, 5}}, 10);
  for (int t = 0; t <= 5; ++t) g.set(0, t, 5, 0.3);
  CHECK(decode_sequence(g) == DecodedSequence{{"c", 0, 5}, {"c", 5, 5}});
  ProbabilityGrid short_grid({{"a", 4, 6}, {"b", 5, 5}}, 3);
  CHECK_THROWS_AS(decode_sequence(short_grid), DataError);
}

TEST_CASE("duration hmm topology") {
  const std::vector<ClassDurationSpec> three{{"a", 1, 20}, {"b", 1, 20}, {"c", 1, 20}};
  const auto hmm = build_duration_hmm(three);
  CHECK(hmm.states.size() == 79);
  CHECK(hmm.start_state_count == 60);
  for (std::size_t s = 0; s < hmm.states.size(); ++s) {
    const auto& st = hmm.states[s];
    const auto out = hmm.transitions.outgoing(s);
    if (!st.dummy && st.duration > 1) {
      REQUIRE(out.size() == 1);
      CHECK(out[0] == hmm.dummy_index(st.duration - 1));
    } else if (st.dummy && st.duration > 1) {
      REQUIRE(out.size() == 1);
      CHECK(out[0] == hmm.dummy_index(st.duration - 1));
    } else {
      CHECK(out.size() == hmm.start_state_count);
    }
  }

  const std::vector<ClassDurationSpec> mixed{{"a", 2, 4}, {"b", 3, 7}};
  const auto m = build_duration_hmm(mixed);
  CHECK(m.states.size() == 3 + 5 + 6);
  CHECK(m.states[0].duration == 2);
  CHECK(m.states[3].cls == 1);
  CHECK(m.states[3].duration == 3);
  CHECK(m.states[m.dummy_index(1)].dummy);

  const std::vector<ClassDurationSpec> one{{"x", 1, 1}};
  const auto h1 = build_duration_hmm(one);
  CHECK(h1.states.size() == 1);
  REQUIRE(h1.transitions.outgoing(0).size() == 1);
  CHECK(h1.transitions.outgoing(0)[0] == 0);

  CHECK_THROWS_AS(build_duration_hmm(std::vector<ClassDurationSpec>{}), std::invalid_argument);
  CHECK_THROWS_AS(build_duration_hmm(std::vector<ClassDurationSpec>{{"x", 3, 2}}), std::invalid_argument);
}

TEST_CASE("grid cells are clamped and invalid cells flagged") {
  ProbabilityGrid g({{"a", 1, 3}}, 4);
  g.set(0, 0, 1, 0.0);
  g.set(0, 1, 1, 1.0);
  CHECK(g.at(0, 0, 1) == kProbabilityFloor);
  CHECK(g.at(0, 1, 1) == 1.0 - kProbabilityFloor);
  CHECK_FALSE(g.valid(0, 2, 3));
  CHECK(g.at(0, 2, 3) == -1.0);
  CHECK_THROWS(g.set(0, 2, 3, 0.5));
  CHECK_THROWS_AS(g.set(0, 0, 2, std::nan("")), std::invalid_argument);
  CHECK(g.max_duration() == 3);
}

TEST_CASE("biphone expansion") {
  CHECK(expand_biphones({{"AE+T", 0, 5}}) == DecodedSequence{{"AE", 0, 3}, {"T", 3, 2}});
  CHECK(expand_biphones({{"AE+T", 4, 2}}) == DecodedSequence{{"AE", 4, 1}, {"T", 5, 1}});
  const DecodedSequence singles{{"A", 0, 2}, {"B", 2, 7}};
  CHECK(expand_biphones(singles) == singles);
  const DecodedSequence mixed{{"A", 0, 2}, {"B+C", 2, 7}, {"D+E", 9, 4}};
  const auto out = expand_biphones(mixed);
  int total = 0, t = 0;
  for (const auto& e : out) {
    CHECK(e.start == t);
    t += e.duration;
    total += e.duration;
  }
  CHECK(total == 13);
  CHECK(out.size() == 5);
  CHECK_THROWS_AS(expand_biphones({{"A+", 0, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(expand_biphones({{"+B", 0, 4}}), std::invalid_argument);
  CHECK_THROWS_AS(expand_biphones({{"A+B", 0, 1}}), std::invalid_argument);
}

TEST_CASE("decoded sequences convert to milliseconds") {
  const auto tr = to_transcript({{"A", 0, 5}, {"B", 5, 3}}, 25.0);
  CHECK(tr == Transcript{{"A", 0, 200}, {"B", 200, 320}});
  CHECK_THROWS_AS(to_transcript({}, 0.0), std::invalid_argument);
}

TEST_CASE("grid on a fixture video ranks the true unit cell highly") {
  SynthConfig synth;
  synth.seed = 11;
  PipelineConfig cfg;
  cfg.train.c_grid = {4.0, 64.0};
  cfg.train.gamma_grid = {1.0 / 128, 1.0 / 32};
  const auto model = train_synthetic_model(synth, 12, cfg);

  SynthConfig test = synth;
  test.seed = 12;
  test.sentence_length = 4;
  test.min_unit_frames = test.max_unit_frames = 10;
  const auto s = synth_sentence(test, make_face_texture(test), 0);
  const std::string label = s.transcript[1].label;
  REQUIRE(s.transcript[1].start_ms == 400);
  const RoiVolume roi = segment_video(s.video, segmentation_options(cfg)).roi;
  const auto grid = build_grid(roi, model, cfg);
  std::size_t k = 0;
  while (grid.classes()[k].label != label) ++k;
  // Sub-spans of a unit resemble their class, so the true cell is ranked
  // against cells lying mostly outside every unit of it.
  std::vector<int> own(grid.frame_count(), 0);
  for (const auto& e : s.transcript) {
    if (e.label != label) continue;
    const auto span = transcript_span(e.start_ms, e.end_ms, 25.0, roi.frames);
    for (int x = span.start; x < span.start + span.duration; ++x) own[x] = 1;
  }
  const double p = grid.at(k, 10, 10);
  int foreign = 0, above = 0;
  for (int t = 0; t < grid.frame_count(); ++t) {
    for (int d = 1; d <= 25; ++d) {
      if (!grid.valid(k, t, d)) continue;
      CHECK(grid.at(k, t, d) > 0.0);
      CHECK(grid.at(k, t, d) < 1.0);
      int overlap = 0;
      for (int x = t; x < t + d; ++x) overlap += own[x];
      if (2 * overlap >= d) continue;
      ++foreign;
      above += grid.at(k, t, d) > p;
    }
  }
  REQUIRE(foreign > 100);
  CHECK(above <= 0.05 * foreign);

  set_worker_threads(3);
  const auto again = build_grid(roi, model, cfg);
  set_worker_threads(1);
  for (std::size_t c = 0; c < grid.classes().size(); ++c) {
    for (int t = 0; t < grid.frame_count(); ++t) {
      for (int d = 1; d <= 25; ++d) REQUIRE(again.at(c, t, d) == grid.at(c, t, d));
    }
  }
}
