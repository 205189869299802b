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

#include "vsr/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <stdexcept>

namespace vsr {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int SplitMix64::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next() % span);
}

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  SplitMix64 g(seed ^ (tag * 0xD1B54A32D192ED03ULL));
  g.next();
  return g.next();
}

const std::vector<ClassMotion>& default_class_motions() {
  static const std::vector<ClassMotion> motions = {
      {"AA", 9.0, 3.0, 10.0},  {"M", 0.0, -3.0, 6.0},  {"UW", 4.0, -7.0, 8.0}, {"F", 2.0, 1.5, 3.0},
      {"S", 1.0, 5.0, 5.0},    {"T", 5.0, 0.0, 4.0},   {"K", 6.5, 5.0, 12.0},  {"SH", 3.0, -4.5, 4.0},
  };
  return motions;
}

void SynthConfig::validate() const {
  const auto fail = [](const std::string& m) { throw std::invalid_argument("synth config: " + m); };
  if (motions.empty() && (class_count < 2 || class_count > 8)) fail("classCount must be in 2..8");
  if (!motions.empty() && motions.size() < 2) fail("at least 2 class motions required");
  if (sentence_length < 1) fail("sentenceLength must be >= 1");
  if (!(fps > 0.0)) fail("fps must be positive");
  if (width < 64 || height < 64) fail("frame must be at least 64x64");
  if (noise_sigma < 0.0) fail("noiseSigma must be >= 0");
  if (min_unit_frames < 1 || max_unit_frames < min_unit_frames) fail("unit frame bounds invalid");
  if (mouth_half_width < 4.0 || mouth_open_half_height <= 0.0) fail("mouth geometry invalid");
  std::set<std::tuple<double, double, double>> seen;
  std::set<std::string> labels;
  for (const auto& m : class_motions()) {
    if (!(m.period > 0.0)) fail("motion period must be positive");
    if (!seen.insert({m.open_amplitude, m.width_amplitude, m.period}).second) fail("motion triples must be distinct");
    if (!labels.insert(m.label).second) fail("duplicate class label " + m.label);
  }
}

std::vector<ClassMotion> SynthConfig::class_motions() const {
  if (!motions.empty()) return motions;
  const auto& d = default_class_motions();
  return {d.begin(), d.begin() + std::clamp(class_count, 0, static_cast<int>(d.size()))};
}

// --- texture -------------------------------------------------------------

double FaceTexture::sample(double u, double v) const { return values.bilinear(std::fabs(u), v + half_height); }

FaceTexture make_face_texture(const SynthConfig& cfg) {
  FaceTexture tex;
  tex.half_width = cfg.width;
  tex.half_height = cfg.height;
  const int w = tex.half_width + 1, h = 2 * tex.half_height + 1;
  tex.values = Image(w, h, 0.0);
  SplitMix64 rng(mix_seed(cfg.seed, 0x7e7));
  // Value noise, four octaves with decaying amplitude.
  const double spacing[] = {24.0, 12.0, 6.0, 3.0};
  const double amp[] = {1.0, 0.6, 0.36, 0.2};
  double amp_sum = 0.0;
  for (int o = 0; o < 4; ++o) {
    amp_sum += amp[o];
    const int lw = static_cast<int>(std::ceil(w / spacing[o])) + 2;
    const int lh = static_cast<int>(std::ceil(h / spacing[o])) + 2;
    Image lattice(lw, lh);
    for (double& x : lattice.px) x = 2.0 * rng.uniform() - 1.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double fx = x / spacing[o], fy = y / spacing[o];
        const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
        double tx = fx - ix, ty = fy - iy;
        tx = tx * tx * (3.0 - 2.0 * tx);
        ty = ty * ty * (3.0 - 2.0 * ty);
        const double top = lattice.at(ix, iy) * (1 - tx) + lattice.at(ix + 1, iy) * tx;
        const double bot = lattice.at(ix, iy + 1) * (1 - tx) + lattice.at(ix + 1, iy + 1) * tx;
        tex.values.at(x, y) += amp[o] * (top * (1 - ty) + bot * ty);
      }
    }
  }
  for (double& x : tex.values.px) x /= amp_sum;
  return tex;
}

// --- rendering -----------------------------------------------------------

namespace {

struct Rgb {
  double r, g, b;
};

Rgb mix(const Rgb& a, const Rgb& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

double coverage(double signed_distance) { return std::clamp(0.5 - signed_distance, 0.0, 1.0); }

// Approximate signed distance to an axis-aligned ellipse boundary.
double ellipse_sd(double x, double y, double ax, double ay) {
  const double r = std::hypot(x / ax, y / ay);
  return (r - 1.0) * std::min(ax, ay);
}

constexpr Rgb kBackground{0.34, 0.34, 0.36};
constexpr Rgb kSkin{0.86, 0.66, 0.56};
constexpr Rgb kEye{0.18, 0.14, 0.14};
constexpr Rgb kBrow{0.36, 0.26, 0.21};
constexpr Rgb kNostril{0.45, 0.30, 0.27};
constexpr Rgb kLip{0.80, 0.30, 0.36};
constexpr Rgb kOpening{0.10, 0.04, 0.05};
constexpr double kLipThickness = 5.0;
constexpr double kSeamHalfHeight = 0.8;

struct FaceGeometry {
  double au, av;          // face oval semi-axes
  double eye_u, eye_v;
  double mouth_v;
};

FaceGeometry face_geometry(const SynthConfig& cfg) {
  FaceGeometry g;
  g.au = std::min(0.38 * cfg.width, 0.52 * cfg.height);
  g.av = 0.62 * cfg.height;
  g.eye_u = 0.42 * g.au;
  g.eye_v = -0.22 * cfg.height;
  g.mouth_v = cfg.mouth_offset * cfg.height;
  return g;
}

// Half-height of the mouth opening at horizontal offset x from the centre.
double opening_half_height(const MouthShape& m, double x) {
  const double q = 1.0 - (x / m.half_width) * (x / m.half_width);
  return std::max(m.open_half_height * std::sqrt(std::max(q, 0.0)), kSeamHalfHeight);
}

Rgb face_color(const FaceGeometry& g, const FaceTexture& tex, const MouthShape& m, double u,
               double v) {
  Rgb c = kBackground;
  const double face = coverage(ellipse_sd(u, v, g.au, g.av));
  if (face > 0.0) {
    const double t = 1.0 + 0.10 * tex.sample(u, v);
    c = mix(c, {kSkin.r * t, kSkin.g * t, kSkin.b * t}, face);
  }
  const double au = std::fabs(u);
  c = mix(c, kBrow, coverage(ellipse_sd(au - g.eye_u, v - (g.eye_v - 10.0), 12.0, 2.0)));
  c = mix(c, kEye, coverage(ellipse_sd(au - g.eye_u, v - g.eye_v, 9.0, 4.0)));
  c = mix(c, kNostril, coverage(ellipse_sd(au - 6.0, v - 0.5 * g.mouth_v, 2.5, 2.0)));

  const double mv = v - g.mouth_v;
  const double lips = coverage(ellipse_sd(u, mv, m.half_width + 2.0, m.open_half_height + kLipThickness));
  c = mix(c, kLip, lips);
  const double open_sd = std::max(au - m.half_width, std::fabs(mv) - opening_half_height(m, u));
  c = mix(c, kOpening, coverage(open_sd));
  return c;
}

std::uint8_t quantize(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L)); }

}  // namespace

RgbImage synth_face_frame(const SynthConfig& cfg, const FaceTexture& texture, const FacePose& pose,
                          std::uint64_t noise_seed) {
  const FaceGeometry g = face_geometry(cfg);
  const double th = pose.line.angle * std::numbers::pi / 180.0;
  const double s = std::sin(th), c = std::cos(th);
  const double cy = 0.5 * (cfg.height - 1);
  SplitMix64 rng(noise_seed);
  RgbImage img(cfg.width, cfg.height);
  for (int y = 0; y < cfg.height; ++y) {
    for (int x = 0; x < cfg.width; ++x) {
      const double dx = x - pose.line.column, dy = y - cy;
      const double u = dx * c + dy * s;
      const double v = -dx * s + dy * c;
      Rgb col = face_color(g, texture, pose.mouth, u, v);
      if (cfg.noise_sigma > 0.0) {
        col.r += cfg.noise_sigma * rng.normal();
        col.g += cfg.noise_sigma * rng.normal();
        col.b += cfg.noise_sigma * rng.normal();
      }
      auto* px = img.pixel(x, y);
      px[0] = quantize(col.r);
      px[1] = quantize(col.g);
      px[2] = quantize(col.b);
    }
  }
  return img;
}

io::GroundTruthFrame pose_ground_truth(const SynthConfig& cfg, const FacePose& pose) {
  const FaceGeometry g = face_geometry(cfg);
  const double th = pose.line.angle * std::numbers::pi / 180.0;
  const double s = std::sin(th), c = std::cos(th);
  const double cy = 0.5 * (cfg.height - 1);
  const auto to_image = [&](double u, double v) {
    return Point{cy + u * s + v * c, pose.line.column + u * c - v * s};
  };
  io::GroundTruthFrame gt;
  gt.line = pose.line;
  gt.lip_row = to_image(0.0, g.mouth_v + opening_half_height(pose.mouth, 0.0)).row;
  gt.left_corner = to_image(-pose.mouth.half_width, g.mouth_v);
  gt.right_corner = to_image(pose.mouth.half_width, g.mouth_v);
  return gt;
}

// --- sentences -----------------------------------------------------------

namespace {

struct Unit {
  std::size_t cls;
  int start;
  int duration;
};

std::vector<Unit> draw_units(SplitMix64& rng, const SynthConfig& cfg, std::size_t classes, int min_frames,
                             int unit_count) {
  std::vector<Unit> units;
  int t = 0;
  std::size_t prev = classes;
  while (static_cast<int>(units.size()) < unit_count || t < min_frames) {
    std::size_t cls;
    if (prev == classes) {
      cls = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(classes) - 1));
    } else {
      // Never repeat the previous class.
      cls = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(classes) - 2));
      if (cls >= prev) ++cls;
    }
    const int d = rng.uniform_int(cfg.min_unit_frames, cfg.max_unit_frames);
    units.push_back({cls, t, d});
    t += d;
    prev = cls;
  }
  return units;
}

// Every unit is one articulation: the mouth leaves the neutral seam, reaches
// the class posture mid-unit and returns, so a unit looks the same whatever
// came before it. The opening carries a small class-specific oscillation.
MouthShape mouth_at(const SynthConfig& cfg, const ClassMotion& m, int tau, int duration) {
  const double env = std::sin(std::numbers::pi * (tau + 0.5) / duration);
  const double osc = std::sin(2.0 * std::numbers::pi * tau / m.period);
  MouthShape shape;
  shape.half_width = cfg.mouth_half_width + env * m.width_amplitude;
  shape.open_half_height = cfg.mouth_open_half_height + std::max(0.0, env * m.open_amplitude * (1.0 + 0.3 * osc));
  return shape;
}

SynthSentence render_sentence(const SynthConfig& cfg, const FaceTexture& texture, int index, int frame_count,
                              int unit_count) {
  cfg.validate();
  const auto motions = cfg.class_motions();
  const std::uint64_t sentence_seed = mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(index));
  SplitMix64 rng(sentence_seed);
  auto units = draw_units(rng, cfg, motions.size(), frame_count, unit_count);
  const double phase_col = 2.0 * std::numbers::pi * rng.uniform();
  const double phase_ang = 2.0 * std::numbers::pi * rng.uniform();

  int total = units.back().start + units.back().duration;
  if (frame_count > 0) {
    while (!units.empty() && units.back().start >= frame_count) units.pop_back();
    units.back().duration = frame_count - units.back().start;
    total = frame_count;
  }

  SynthSentence out;
  out.video.width = cfg.width;
  out.video.height = cfg.height;
  out.video.fps = cfg.fps;
  out.video.frames.resize(static_cast<std::size_t>(total));
  out.truth.resize(static_cast<std::size_t>(total));
  std::vector<FacePose> poses(static_cast<std::size_t>(total));
  for (const auto& u : units) {
    out.unit_classes.push_back(u.cls);
    out.transcript.push_back({motions[u.cls].label, static_cast<int>(std::lround(u.start * 1000.0 / cfg.fps)),
                              static_cast<int>(std::lround((u.start + u.duration) * 1000.0 / cfg.fps))});
    for (int tau = 0; tau < u.duration; ++tau) {
      const int t = u.start + tau;
      FacePose& p = poses[static_cast<std::size_t>(t)];
      p.line.column = cfg.axis() + cfg.column_jitter * std::sin(2.0 * std::numbers::pi * t / 57.0 + phase_col);
      p.line.angle = cfg.angle_jitter * std::sin(2.0 * std::numbers::pi * t / 73.0 + phase_ang);
      p.mouth = mouth_at(cfg, motions[u.cls], tau, u.duration);
    }
  }
  parallel_for(poses.size(), [&](std::size_t t) {
    out.video.frames[t] = synth_face_frame(cfg, texture, poses[t], mix_seed(sentence_seed, t));
    out.truth[t] = pose_ground_truth(cfg, poses[t]);
  });
  return out;
}

}  // namespace

SynthSentence synth_sentence(const SynthConfig& cfg, const FaceTexture& texture, int index) {
  return render_sentence(cfg, texture, index, 0, cfg.sentence_length);
}

SynthSentence synth_sentence_frames(const SynthConfig& cfg, const FaceTexture& texture, int index, int frames) {
  if (frames < 1) throw std::invalid_argument("synth_sentence_frames: frames must be >= 1");
  return render_sentence(cfg, texture, index, frames, 1);
}

std::vector<CorpusEntry> synth_corpus(const SynthConfig& cfg, int sentences, const std::filesystem::path& out) {
  if (sentences < 1) throw std::invalid_argument("synth_corpus: sentences must be >= 1");
  cfg.validate();
  const FaceTexture texture = make_face_texture(cfg);
  std::vector<CorpusEntry> entries;
  for (int i = 0; i < sentences; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "s%03d", i);
    const auto dir = out / name;
    SynthSentence s = synth_sentence(cfg, texture, i);
    io::write_video_dir(dir, s.video);
    io::write_transcript(dir / "transcript.txt", s.transcript);
    io::write_groundtruth_csv(dir / "groundtruth.csv", s.truth);
    entries.push_back({dir, std::move(s.truth), std::move(s.transcript)});
  }
  return entries;
}

std::vector<std::filesystem::path> list_sentence_dirs(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) throw DataError("not a directory: " + root.string());
  std::vector<std::filesystem::path> dirs;
  for (const auto& e : std::filesystem::directory_iterator(root)) {
    if (e.is_directory() && io::is_video_dir(e.path())) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace vsr
