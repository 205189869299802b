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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vsr {

/// Input data that cannot be processed (unreadable file, undetectable lip,
/// infeasible decode). Precondition violations by the caller raise
/// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grayscale (or single-channel) image, row-major, real-valued.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> px;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), px(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int x, int y) { return px[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return px[static_cast<std::size_t>(y) * width + x]; }

  /// Pixel with coordinates clamped to the image (edge replication).
  double clamped(int x, int y) const {
    return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
  }

  /// Bilinear interpolation with edge replication outside the image.
  double bilinear(double x, double y) const;

  bool contains(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x <= width - 1 && y <= height - 1;
  }
};

/// 8-bit interleaved RGB frame.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* pixel(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* pixel(int x, int y) const {
    return &data[(static_cast<std::size_t>(y) * width + x) * 3];
  }
};

struct VideoSequence {
  int width = 0;
  int height = 0;
  double fps = 25.0;
  std::vector<RgbImage> frames;

  /// Throws std::invalid_argument when frames are missing, mis-sized or fps <= 0.
  void validate() const;
};

/// Real-valued volume X x Y x T stored frame-major, then row-major.
struct Volume {
  int width = 0;
  int height = 0;
  int frames = 0;
  std::vector<double> data;

  Volume() = default;
  Volume(int w, int h, int t, double fill = 0.0)
      : width(w), height(h), frames(t), data(static_cast<std::size_t>(w) * h * t, fill) {}

  std::size_t frame_size() const { return static_cast<std::size_t>(width) * height; }
  std::size_t index(int x, int y, int t) const {
    return (static_cast<std::size_t>(t) * height + y) * width + x;
  }
  double& at(int x, int y, int t) { return data[index(x, y, t)]; }
  double at(int x, int y, int t) const { return data[index(x, y, t)]; }
};

/// Number of workers used by the library's parallel maps. 1 = sequential.
void set_worker_threads(int n);
int worker_threads();

/// Runs body(i) for i in [0, n). Each index is processed exactly once; callers
/// write results into index-addressed slots so output order never depends on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace vsr
