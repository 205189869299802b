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

#include "vsr/segmentation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "vsr/viterbi.hpp"

namespace vsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

// Area-averaging 1-D resampling weights: output i covers [i*r, (i+1)*r).
struct AreaTap {
  int index;
  double weight;
};

std::vector<std::vector<AreaTap>> area_taps(int n_in, int n_out) {
  std::vector<std::vector<AreaTap>> taps(n_out);
  const double r = static_cast<double>(n_in) / n_out;
  for (int i = 0; i < n_out; ++i) {
    const double lo = i * r;
    const double hi = (i + 1) * r;
    for (int k = static_cast<int>(std::floor(lo)); k < n_in && k < hi; ++k) {
      const double overlap = std::min(hi, k + 1.0) - std::max(lo, static_cast<double>(k));
      if (overlap > 0.0) taps[i].push_back({k, overlap / r});
    }
  }
  return taps;
}

Image area_resize(const Image& src, int w, int h) {
  const auto tx = area_taps(src.width, w);
  const auto ty = area_taps(src.height, h);
  Image horiz(w, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (const auto& t : tx[x]) acc += t.weight * src.at(t.index, y);
      horiz.at(x, y) = acc;
    }
  }
  Image out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (const auto& t : ty[y]) acc += t.weight * horiz.at(x, t.index);
      out.at(x, y) = acc;
    }
  }
  return out;
}

double gaussian_density(double delta, double sigma) {
  return std::exp(-0.5 * delta * delta / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

// Min-max normalization to [0,1]; nullopt when the input is constant.
std::optional<std::vector<double>> normalize01(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return std::nullopt;
  std::vector<double> out(v.size());
  const double mn = *lo;
  std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return (x - mn) / range; });
  return out;
}

std::vector<double> central_gradient(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> g(n, 0.0);
  if (n < 2) return g;
  g[0] = v[1] - v[0];
  g[n - 1] = v[n - 1] - v[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = 0.5 * (v[i + 1] - v[i - 1]);
  return g;
}

// Chain HMM over `states` positions with Gaussian transitions between
// neighbouring positions and uniform (or forced) priors.
std::vector<std::size_t> track_positions(const std::vector<std::vector<double>>& obs, double sigma,
                                         std::optional<std::size_t> forced_first = std::nullopt) {
  const std::size_t n_states = obs.front().size();
  Transitions trans(n_states);
  for (std::size_t to = 0; to < n_states; ++to) {
    for (std::size_t from = 0; from < n_states; ++from) {
      trans.add(from, to, gaussian_density(static_cast<double>(to) - static_cast<double>(from), sigma));
    }
  }
  trans.finalize();
  std::vector<double> priors(n_states, 1.0);
  if (forced_first) {
    std::fill(priors.begin(), priors.end(), 0.0);
    priors.at(*forced_first) = 1.0;
  }
  return viterbi_generic(priors, trans, obs).states;
}

}  // namespace

// --- channels ------------------------------------------------------------

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::Lum: return "lum";
    case Channel::U: return "u";
    case Channel::ULum: return "ulum";
    case Channel::PseudoHue: return "pseudohue";
    case Channel::Red: return "red";
    case Channel::Green: return "green";
    case Channel::Blue: return "blue";
  }
  return "?";
}

Channel parse_channel(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "grey" || lower == "gray") return Channel::Lum;
  for (Channel c : kAllChannels) {
    if (channel_name(c) == lower) return c;
  }
  throw std::invalid_argument("unknown channel '" + std::string(name) + "'");
}

const Image& ChannelSet::get(Channel c) const {
  return const_cast<ChannelSet*>(this)->get(c);
}

Image& ChannelSet::get(Channel c) {
  switch (c) {
    case Channel::Lum: return lum;
    case Channel::U: return u;
    case Channel::ULum: return ulum;
    case Channel::PseudoHue: return pseudo_hue;
    case Channel::Red: return red;
    case Channel::Green: return green;
    case Channel::Blue: return blue;
  }
  throw std::invalid_argument("bad channel");
}

const Volume& RoiVolume::channel(Channel c) const {
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] == c) return data[i];
  }
  throw std::invalid_argument("ROI volume does not retain channel '" + std::string(channel_name(c)) + "'");
}

bool RoiVolume::has(Channel c) const {
  return std::find(channels.begin(), channels.end(), c) != channels.end();
}

namespace {

double srgb_to_linear(double c) {
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

// sRGB primaries, D65 white.
constexpr double kM[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                             {0.2126729, 0.7151522, 0.0721750},
                             {0.0193339, 0.1191920, 0.9503041}};

double cie_u_star(double r, double g, double b) {
  const double rl = srgb_to_linear(r), gl = srgb_to_linear(g), bl = srgb_to_linear(b);
  const double X = kM[0][0] * rl + kM[0][1] * gl + kM[0][2] * bl;
  const double Y = kM[1][0] * rl + kM[1][1] * gl + kM[1][2] * bl;
  const double Z = kM[2][0] * rl + kM[2][1] * gl + kM[2][2] * bl;
  const double denom = X + 15.0 * Y + 3.0 * Z;
  if (denom <= 0.0) return 0.0;
  // White point from the same matrix so neutral colours give u* = 0.
  const double Xn = kM[0][0] + kM[0][1] + kM[0][2];
  const double Yn = kM[1][0] + kM[1][1] + kM[1][2];
  const double Zn = kM[2][0] + kM[2][1] + kM[2][2];
  const double un = 4.0 * Xn / (Xn + 15.0 * Yn + 3.0 * Zn);
  const double up = 4.0 * X / denom;
  const double yr = Y / Yn;
  const double L = yr > 216.0 / 24389.0 ? 116.0 * std::cbrt(yr) - 16.0 : (24389.0 / 27.0) * yr;
  return 13.0 * L * (up - un);
}

ChannelSet channels_from_planes(Image r, Image g, Image b) {
  ChannelSet cs;
  const int w = r.width, h = r.height;
  cs.lum = Image(w, h);
  cs.u = Image(w, h);
  cs.ulum = Image(w, h);
  cs.pseudo_hue = Image(w, h);
  for (std::size_t i = 0; i < r.px.size(); ++i) {
    const double R = r.px[i], G = g.px[i], B = b.px[i];
    cs.lum.px[i] = 0.299 * R + 0.587 * G + 0.114 * B;
    cs.u.px[i] = cie_u_star(R, G, B);
    cs.pseudo_hue.px[i] = (R + G) > 0.0 ? R / (R + G) : 0.5;
  }
  const auto [lo, hi] = std::minmax_element(cs.lum.px.begin(), cs.lum.px.end());
  const double mn = *lo, range = *hi - *lo;
  for (std::size_t i = 0; i < cs.lum.px.size(); ++i) {
    cs.lum.px[i] = range > 0.0 ? (cs.lum.px[i] - mn) / range : 0.0;
    cs.ulum.px[i] = cs.u.px[i] * cs.lum.px[i];
  }
  cs.red = std::move(r);
  cs.green = std::move(g);
  cs.blue = std::move(b);
  return cs;
}

}  // namespace

ChannelSet compute_channels(const RgbImage& frame) {
  Image r(frame.width, frame.height), g(frame.width, frame.height), b(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const auto* p = frame.pixel(x, y);
      r.at(x, y) = p[0] / 255.0;
      g.at(x, y) = p[1] / 255.0;
      b.at(x, y) = p[2] / 255.0;
    }
  }
  return channels_from_planes(std::move(r), std::move(g), std::move(b));
}

Image luminance(const RgbImage& frame) {
  Image out(frame.width, frame.height);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const auto* p = frame.pixel(x, y);
      out.at(x, y) = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
  }
  return out;
}

// --- symmetry line -------------------------------------------------------

std::vector<Image> build_image_pyramid(const Image& image) {
  if (image.width < kMinPyramidWidth) {
    throw DataError("image is " + std::to_string(image.width) + " px wide; the pyramid needs at least " +
                    std::to_string(kMinPyramidWidth));
  }
  std::vector<Image> levels{image};
  for (;;) {
    const Image& last = levels.back();
    const int w = round_half_up(kPyramidRatio * last.width);
    if (w < kMinPyramidWidth) break;
    const int h = std::max(1, round_half_up(kPyramidRatio * last.height));
    levels.push_back(area_resize(last, w, h));
  }
  return levels;
}

double symmetry_cost(const Image& image, const SymmetryLine& line, int band) {
  const double th = deg2rad(line.angle);
  const double s = std::sin(th), c = std::cos(th);
  const double cy = 0.5 * (image.height - 1);
  const double reach = band - 0.5;
  double sum = 0.0;
  int valid = 0;
  for (int row = 0; row < image.height; ++row) {
    const double v = row - cy;
    const double px = line.column - v * s;
    const double py = cy + v * c;
    // A row counts only when both ends of its band are inside the image.
    if (!image.contains(px - reach * c, py - reach * s) || !image.contains(px + reach * c, py + reach * s)) continue;
    for (int k = 1; k <= band; ++k) {
      const double o = k - 0.5;
      const double d = image.bilinear(px - o * c, py - o * s) - image.bilinear(px + o * c, py + o * s);
      sum += d * d;
    }
    ++valid;
  }
  if (valid == 0 || 4 * valid < image.height) return kInf;
  return valid == image.height ? sum : sum * image.height / valid;
}

namespace {

SymmetryLine refine_line(const Image& image, const SymmetryLine& start, const SymmetrySearchOptions& o) {
  SymmetryLine best = start;
  double best_cost = kInf;
  // Candidates lie on the fixed step grid inside the window, so an integer
  // translation of the image moves the optimum by exactly that offset.
  const auto grid = [](double centre, double window, double step) {
    constexpr double eps = 1e-9;
    return std::pair<int, int>{static_cast<int>(std::ceil((centre - window) / step - eps)),
                               static_cast<int>(std::floor((centre + window) / step + eps))};
  };
  const auto [a0, a1] = grid(start.angle, o.angle_window, o.angle_step);
  const auto [c0, c1] = grid(start.column, o.column_window, o.column_step);
  for (int ia = a0; ia <= a1; ++ia) {
    const double angle = std::clamp(ia * o.angle_step, -45.0, 45.0);
    for (int ic = c0; ic <= c1; ++ic) {
      const double col = ic * o.column_step;
      if (col < 0.0 || col > image.width - 1) continue;
      const double cost = symmetry_cost(image, {col, angle}, o.band);
      if (cost < best_cost) {
        best_cost = cost;
        best = {col, angle};
      }
    }
  }
  return best;
}

}  // namespace

SymmetryLine search_symmetry_line(const Image& image, const SymmetrySearchOptions& o) {
  const auto pyramid = build_image_pyramid(image);
  const Image& top = pyramid.back();

  // Exhaustive search at the coarsest level; ties keep the line closest to
  // the central column and zero angle because those are visited first.
  SymmetryLine best{0.5 * (top.width - 1), 0.0};
  double best_cost = symmetry_cost(top, best, o.band);
  const int n_a = static_cast<int>(std::round(o.coarse_angle_range));
  std::vector<int> angle_order{0};
  for (int a = 1; a <= n_a; ++a) {
    angle_order.push_back(-a);
    angle_order.push_back(a);
  }
  for (int a : angle_order) {
    for (int col = 0; col < top.width; ++col) {
      const double cost = symmetry_cost(top, {static_cast<double>(col), static_cast<double>(a)}, o.band);
      if (cost < best_cost) {
        best_cost = cost;
        best = {static_cast<double>(col), static_cast<double>(a)};
      }
    }
  }

  for (std::size_t lvl = pyramid.size() - 1; lvl-- > 0;) {
    const double ratio = static_cast<double>(pyramid[lvl].width) / pyramid[lvl + 1].width;
    SymmetryLine start{(best.column + 0.5) * ratio - 0.5, best.angle};
    best = refine_line(pyramid[lvl], start, o);
  }
  return best;
}

std::vector<SymmetryLine> find_symmetry_lines(const VideoSequence& video, const SymmetrySearchOptions& o) {
  video.validate();
  std::vector<SymmetryLine> lines;
  lines.reserve(video.frames.size());
  lines.push_back(search_symmetry_line(luminance(video.frames[0]), o));
  for (std::size_t t = 1; t < video.frames.size(); ++t) {
    lines.push_back(refine_line(luminance(video.frames[t]), lines.back(), o));
  }
  return lines;
}

// --- frame preparation ---------------------------------------------------

Point crop_to_image(const Point& p, const SymmetryLine& line, int image_height) {
  const double th = deg2rad(line.angle);
  const double s = std::sin(th), c = std::cos(th);
  const double cy = 0.5 * (image_height - 1);
  const double u = p.col - kCropHalfWidth;
  const double v = p.row - cy;
  return {cy + u * s + v * c, line.column + u * c - v * s};
}

PreparedFrames prepare_frames(const VideoSequence& video, std::span<const SymmetryLine> lines) {
  video.validate();
  if (lines.size() != video.frames.size()) {
    throw std::invalid_argument("prepare_frames: one symmetry line per frame required");
  }
  const int out_w = 2 * kCropHalfWidth + 1;
  const int h = video.height;
  PreparedFrames out;
  out.cropped.width = out_w;
  out.cropped.height = h;
  out.cropped.fps = video.fps;
  out.cropped.frames.resize(video.frames.size());
  out.channels.resize(video.frames.size());

  parallel_for(video.frames.size(), [&](std::size_t t) {
    const RgbImage& frame = video.frames[t];
    Image planes[3];
    for (int ch = 0; ch < 3; ++ch) {
      planes[ch] = Image(frame.width, frame.height);
      for (std::size_t i = 0; i < planes[ch].px.size(); ++i) planes[ch].px[i] = frame.data[i * 3 + ch] / 255.0;
    }
    Image r(out_w, h), g(out_w, h), b(out_w, h);
    RgbImage crop(out_w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        const Point src = crop_to_image({static_cast<double>(y), static_cast<double>(x)}, lines[t], h);
        const double vals[3] = {planes[0].bilinear(src.col, src.row), planes[1].bilinear(src.col, src.row),
                                planes[2].bilinear(src.col, src.row)};
        r.at(x, y) = vals[0];
        g.at(x, y) = vals[1];
        b.at(x, y) = vals[2];
        auto* px = crop.pixel(x, y);
        for (int ch = 0; ch < 3; ++ch) {
          px[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(vals[ch] * 255.0), 0L, 255L));
        }
      }
    }
    out.cropped.frames[t] = std::move(crop);
    out.channels[t] = channels_from_planes(std::move(r), std::move(g), std::move(b));
  });
  return out;
}

// --- keypoints -----------------------------------------------------------

std::vector<double> detect_inner_lower_lip(std::span<const ChannelSet> channels,
                                           const LipDetectionOptions& options) {
  if (channels.empty()) throw std::invalid_argument("detect_inner_lower_lip: no frames");
  const int h = channels[0].height();
  const int col = (channels[0].width() - 1) / 2;
  std::vector<std::vector<double>> obs(channels.size());
  for (std::size_t t = 0; t < channels.size(); ++t) {
    if (channels[t].height() != h) throw std::invalid_argument("frames differ in height");
    std::vector<double> column(h);
    for (int y = 0; y < h; ++y) column[y] = channels[t].ulum.at(col, y);
    auto normalized = normalize01(central_gradient(column));
    if (!normalized) {
      throw DataError("inner lower lip undetectable: U*lum gradient is constant in frame " + std::to_string(t));
    }
    obs[t] = std::move(*normalized);
  }
  std::optional<std::size_t> forced;
  if (options.forced_first_row) {
    if (*options.forced_first_row < 0 || *options.forced_first_row >= h) {
      throw std::invalid_argument("forced lip row outside the frame");
    }
    forced = static_cast<std::size_t>(*options.forced_first_row);
    // A forced row must be feasible even if its gradient weight is zero.
    obs[0][*forced] = std::max(obs[0][*forced], 1e-12);
  }
  const auto path = track_positions(obs, options.transition_sigma, forced);
  return {path.begin(), path.end()};
}

Image box_smooth3(const Image& image) {
  Image out(image.width, image.height);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double acc = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) acc += image.clamped(x + dx, y + dy);
      }
      out.at(x, y) = acc / 9.0;
    }
  }
  return out;
}

std::vector<Point> build_min_luminance_line_smoothed(const Image& lum, double lip_row) {
  const int h = lum.height;
  const int center = (lum.width - 1) / 2;
  const int lip = std::clamp(static_cast<int>(std::lround(lip_row)), 0, h - 1);
  const int lo = std::clamp(lip - 8, 0, h - 1);
  const int hi = std::clamp(lip + 4, 0, h - 1);
  int seed = lo;
  for (int r = lo + 1; r <= hi; ++r) {
    if (lum.at(center, r) < lum.at(center, seed)) seed = r;
  }

  std::vector<Point> line(kLumLinePoints);
  const auto col_at = [&](int idx) {
    return std::clamp(center + idx - kLumLineHalfLength, 0, lum.width - 1);
  };
  line[kLumLineHalfLength] = {static_cast<double>(seed), static_cast<double>(col_at(kLumLineHalfLength))};

  for (int dir : {+1, -1}) {
    int row = seed;
    for (int step = 1; step <= kLumLineHalfLength; ++step) {
      const int idx = kLumLineHalfLength + dir * step;
      const int col = col_at(idx);
      // Candidates in preference order: same row, then up, then down.
      int best_row = row;
      double best = lum.at(col, row);
      for (int cand : {row - 1, row + 1}) {
        const int r = std::clamp(cand, 0, h - 1);
        if (lum.at(col, r) < best) {
          best = lum.at(col, r);
          best_row = r;
        }
      }
      row = best_row;
      line[idx] = {static_cast<double>(row), static_cast<double>(col)};
    }
  }
  return line;
}

std::vector<Point> build_min_luminance_line(const ChannelSet& channels, double lip_row) {
  return build_min_luminance_line_smoothed(box_smooth3(channels.lum), lip_row);
}

std::vector<std::pair<Point, Point>> detect_mouth_corners(std::span<const ChannelSet> channels,
                                                          std::span<const std::vector<Point>> lines,
                                                          const CornerDetectionOptions& options) {
  if (channels.empty() || channels.size() != lines.size()) {
    throw std::invalid_argument("detect_mouth_corners: one polyline per frame required");
  }
  constexpr int kHalf = kLumLineHalfLength;
  std::vector<std::vector<double>> left_obs(channels.size()), right_obs(channels.size());
  parallel_for(channels.size(), [&](std::size_t t) {
    if (static_cast<int>(lines[t].size()) != kLumLinePoints) {
      throw std::invalid_argument("minimal luminance line must have 81 points");
    }
    const Image smooth = box_smooth3(channels[t].lum);
    std::vector<double> values(kLumLinePoints);
    for (int i = 0; i < kLumLinePoints; ++i) {
      values[i] = smooth.bilinear(lines[t][i].col, lines[t][i].row);
    }
    const auto grad = central_gradient(values);
    // Left corner: luminance drops into the mouth (indices 0..39). Right
    // corner: it rises back out (41..80). The shared seed index is excluded
    // so the halves are disjoint.
    std::vector<double> left(grad.begin(), grad.begin() + kHalf);
    for (auto& g : left) g = -g;
    std::vector<double> right(grad.begin() + kHalf + 1, grad.end());
    auto ln = normalize01(left), rn = normalize01(right);
    if (!ln || !rn) {
      throw DataError("mouth corners undetectable: flat luminance gradient in frame " + std::to_string(t));
    }
    left_obs[t] = std::move(*ln);
    right_obs[t] = std::move(*rn);
  });
  const auto left_path = track_positions(left_obs, options.transition_sigma);
  const auto right_path = track_positions(right_obs, options.transition_sigma);
  std::vector<std::pair<Point, Point>> out(channels.size());
  for (std::size_t t = 0; t < channels.size(); ++t) {
    out[t] = {lines[t][left_path[t]], lines[t][kHalf + 1 + right_path[t]]};
  }
  return out;
}

// --- ROI -----------------------------------------------------------------

namespace {

struct CornerFrame {
  Point mid;
  double cos_a, sin_a;
  double dist;
};

CornerFrame corner_frame(const MouthKeypoints& kp) {
  const double dr = kp.right_corner.row - kp.left_corner.row;
  const double dc = kp.right_corner.col - kp.left_corner.col;
  const double dist = std::hypot(dr, dc);
  const double a = std::atan2(dr, dc);
  return {{0.5 * (kp.left_corner.row + kp.right_corner.row), 0.5 * (kp.left_corner.col + kp.right_corner.col)},
          std::cos(a), std::sin(a), dist};
}

}  // namespace

Point crop_to_roi(const Point& p, const MouthKeypoints& kp, double scale, const RoiOptions& options) {
  const CornerFrame f = corner_frame(kp);
  const double dc = p.col - f.mid.col, dr = p.row - f.mid.row;
  const double dx = dc * f.cos_a + dr * f.sin_a;
  const double dy = -dc * f.sin_a + dr * f.cos_a;
  return {dy * scale + 0.5 * (options.height - 1), dx * scale + 0.5 * (options.width - 1)};
}

RoiVolume extract_roi(std::span<const ChannelSet> channels, std::span<const MouthKeypoints> keypoints,
                      double fps, const RoiOptions& options) {
  if (channels.size() != keypoints.size() || channels.empty()) {
    throw std::invalid_argument("extract_roi: keypoints required for every frame");
  }
  if (options.width < 1 || options.height < 1 || options.channels.empty()) {
    throw std::invalid_argument("extract_roi: invalid ROI options");
  }
  std::vector<CornerFrame> frames;
  double max_dist = 0.0;
  for (const auto& kp : keypoints) {
    frames.push_back(corner_frame(kp));
    max_dist = std::max(max_dist, frames.back().dist);
  }
  if (!(max_dist > 0.0)) throw DataError("extract_roi: mouth corners coincide in every frame");

  RoiVolume roi;
  roi.width = options.width;
  roi.height = options.height;
  roi.frames = static_cast<int>(channels.size());
  roi.fps = fps;
  roi.scale = options.width_fraction * options.width / max_dist;
  roi.channels = options.channels;
  for (std::size_t i = 0; i < options.channels.size(); ++i) {
    roi.data.emplace_back(options.width, options.height, roi.frames);
  }
  const double cx = 0.5 * (options.width - 1), cy = 0.5 * (options.height - 1);
  parallel_for(channels.size(), [&](std::size_t t) {
    const CornerFrame& f = frames[t];
    for (int y = 0; y < options.height; ++y) {
      for (int x = 0; x < options.width; ++x) {
        const double dx = (x - cx) / roi.scale;
        const double dy = (y - cy) / roi.scale;
        const double col = f.mid.col + dx * f.cos_a - dy * f.sin_a;
        const double row = f.mid.row + dx * f.sin_a + dy * f.cos_a;
        for (std::size_t c = 0; c < options.channels.size(); ++c) {
          roi.data[c].at(x, y, static_cast<int>(t)) = channels[t].get(options.channels[c]).bilinear(col, row);
        }
      }
    }
  });
  return roi;
}

// --- whole stage ---------------------------------------------------------

SegmentationResult segment_video(const VideoSequence& video, const SegmentationOptions& options) {
  SegmentationResult result;
  result.lines = find_symmetry_lines(video, options.symmetry);
  const PreparedFrames prepared = prepare_frames(video, result.lines);
  const auto lip_rows = detect_inner_lower_lip(prepared.channels, options.lip);

  const std::size_t n = video.frames.size();
  std::vector<std::vector<Point>> lum_lines(n);
  parallel_for(n, [&](std::size_t t) { lum_lines[t] = build_min_luminance_line(prepared.channels[t], lip_rows[t]); });
  const auto corners = detect_mouth_corners(prepared.channels, lum_lines, options.corners);

  result.keypoints.resize(n);
  result.image_keypoints.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto& kp = result.keypoints[t];
    kp.lip_row = lip_rows[t];
    kp.left_corner = corners[t].first;
    kp.right_corner = corners[t].second;
    kp.lum_line = std::move(lum_lines[t]);

    auto& ik = result.image_keypoints[t];
    ik.lip_row = crop_to_image({lip_rows[t], static_cast<double>(kCropHalfWidth)}, result.lines[t], video.height).row;
    ik.left_corner = crop_to_image(kp.left_corner, result.lines[t], video.height);
    ik.right_corner = crop_to_image(kp.right_corner, result.lines[t], video.height);
  }
  result.roi = extract_roi(prepared.channels, result.keypoints, video.fps, options.roi);
  return result;
}

}  // namespace vsr
