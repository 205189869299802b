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
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "vsr/fixtures.hpp"
#include "vsr/pipeline.hpp"

using namespace vsr;
namespace fs = std::filesystem;

TEST_CASE("splitmix64 reference outputs") {
  SplitMix64 g(1234567);
  CHECK(g.next() == 6457827717110365317ULL);
  CHECK(g.next() == 3203168211198807973ULL);
  CHECK(g.next() == 9817491932198370423ULL);
  SplitMix64 u(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    const int k = u.uniform_int(3, 12);
    CHECK(k >= 3);
    CHECK(k <= 12);
  }
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
}

TEST_CASE("noise-free frames are mirror symmetric about the axis") {
  SynthConfig cfg;
  cfg.noise_sigma = 0.0;
  const auto tex = make_face_texture(cfg);
  FacePose pose;
  pose.line = {121.0, 0.0};
  pose.mouth = {25.0, 6.0};
  const auto img = synth_face_frame(cfg, tex, pose, 5);
  for (int y = 0; y < cfg.height; ++y) {
    for (int k = 1; k <= 121; ++k) {
      if (121 + k >= cfg.width) break;
      for (int ch = 0; ch < 3; ++ch) REQUIRE(img.pixel(121 - k, y)[ch] == img.pixel(121 + k, y)[ch]);
    }
  }
}

TEST_CASE("frames are deterministic and noise depends on the seed") {
  SynthConfig cfg;
  const auto tex = make_face_texture(cfg);
  FacePose pose;
  pose.line = {128.0, 1.0};
  CHECK(synth_face_frame(cfg, tex, pose, 3).data == synth_face_frame(cfg, tex, pose, 3).data);
  CHECK(synth_face_frame(cfg, tex, pose, 3).data != synth_face_frame(cfg, tex, pose, 4).data);
}

TEST_CASE("ground truth corners match the rendered opening") {
  SynthConfig cfg;
  cfg.noise_sigma = 0.0;
  const auto tex = make_face_texture(cfg);
  for (double hw : {18.0, 22.0, 27.5}) {
    FacePose pose;
    pose.line = {126.0, 0.0};
    pose.mouth = {hw, 4.0};
    const auto img = synth_face_frame(cfg, tex, pose, 0);
    const auto gt = pose_ground_truth(cfg, pose);
    const int row = static_cast<int>(std::floor(gt.left_corner.row));
    int first = -1, last = -1;
    for (int x = static_cast<int>(126 - hw - 8); x <= static_cast<int>(126 + hw + 8); ++x) {
      if (img.pixel(x, row)[0] < 0.45 * 255) {
        if (first < 0) first = x;
        last = x;
      }
    }
    CHECK(std::fabs(first - gt.left_corner.col) <= 1.0);
    CHECK(std::fabs(last - gt.right_corner.col) <= 1.0);
    CHECK(gt.left_corner.col == doctest::Approx(126.0 - hw));
    CHECK(gt.lip_row > gt.left_corner.row);
  }
}

TEST_CASE("sentences tile their videos") {
  SynthConfig cfg;
  cfg.seed = 4;
  const auto tex = make_face_texture(cfg);
  for (int i = 0; i < 5; ++i) {
    const auto s = synth_sentence(cfg, tex, i);
    REQUIRE(s.transcript.size() == 8);
    CHECK(s.transcript.front().start_ms == 0);
    for (std::size_t k = 1; k < s.transcript.size(); ++k) {
      CHECK(s.transcript[k].start_ms == s.transcript[k - 1].end_ms);
      CHECK(s.transcript[k].label != s.transcript[k - 1].label);
    }
    for (const auto& e : s.transcript) {
      CHECK(e.end_ms - e.start_ms >= 3 * 40);
      CHECK(e.end_ms - e.start_ms <= 12 * 40);
    }
    CHECK(s.transcript.back().end_ms == static_cast<int>(s.video.frames.size()) * 40);
    CHECK(s.truth.size() == s.video.frames.size());
  }
  const auto cut = synth_sentence_frames(cfg, tex, 0, 37);
  CHECK(cut.video.frames.size() == 37);
  CHECK(cut.transcript.back().end_ms == 37 * 40);
}

TEST_CASE("corpora on disk are parseable and byte identical across runs") {
  const auto root = oracle::scratch_dir("fixtures_corpus");
  SynthConfig cfg;
  cfg.seed = 77;
  cfg.sentence_length = 3;
  const auto a = synth_corpus(cfg, 4, root / "a");
  set_worker_threads(4);
  synth_corpus(cfg, 4, root / "b");
  set_worker_threads(1);
  REQUIRE(a.size() == 4);
  const auto dirs = list_sentence_dirs(root / "a");
  REQUIRE(dirs.size() == 4);
  CHECK(dirs[0].filename() == "s000");
  std::set<std::string> seen;
  for (const auto& p : fs::recursive_directory_iterator(root / "a")) {
    if (!p.is_regular_file()) continue;
    const auto rel = fs::relative(p.path(), root / "a");
    seen.insert(rel.string());
    REQUIRE(io::read_text(p.path()) == io::read_text(root / "b" / rel));
  }
  CHECK(seen.count("s002/groundtruth.csv") == 1);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto video = io::read_video_dir(dirs[i]);
    const auto tr = io::read_transcript(dirs[i] / "transcript.txt");
    CHECK(tr == a[i].transcript);
    CHECK(tr.back().end_ms == static_cast<int>(video.frames.size()) * 40);
    CHECK(io::read_groundtruth_csv(dirs[i] / "groundtruth.csv").size() == video.frames.size());
  }
  CHECK_THROWS_AS(list_sentence_dirs(root / "missing"), DataError);
}

TEST_CASE("configuration checks") {
  SynthConfig cfg;
  cfg.class_count = 1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.class_count = 9;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.min_unit_frames = 5;
  cfg.max_unit_frames = 4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  const auto& motions = default_class_motions();
  for (std::size_t i = 0; i < motions.size(); ++i) {
    for (std::size_t j = i + 1; j < motions.size(); ++j) {
      CHECK((motions[i].open_amplitude != motions[j].open_amplitude ||
             motions[i].width_amplitude != motions[j].width_amplitude || motions[i].period != motions[j].period));
      CHECK(viseme_of(motions[i].label) != viseme_of(motions[j].label));
    }
  }
}

TEST_CASE("classes are separable at their true intervals") {
  SynthConfig cfg;
  cfg.seed = 5;
  const auto tex = make_face_texture(cfg);
  PipelineConfig pc;
  std::vector<AnnotatedRoi> data;
  for (int i = 0; i < 8; ++i) {
    auto s = synth_sentence(cfg, tex, i);
    data.push_back({segment_video(s.video, segmentation_options(pc)).roi, s.transcript});
  }
  const auto samples = collect_samples(data, UnitKind::Phoneme, pc);
  TrainReport rep;
  TrainConfig tc;
  tc.c_grid = {64.0, 256.0};
  tc.gamma_grid = {1.0 / 128, 1.0 / 32};
  const auto model = train_multiclass(samples, tc, pc.features, &rep);
  CHECK(rep.train_accuracy == 1.0);
  CHECK(model.class_labels.size() == 3);
}
