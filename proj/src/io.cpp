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

#include "vsr/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace vsr::io {

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw DataError("failed writing " + path.string());
}

// --- little-endian binary helpers ---

class BinWriter {
 public:
  explicit BinWriter(std::ofstream& out) : out_(out) {}
  void u32(std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out_.write(b, 4);
  }
  void f32(double v) { u32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void bytes(const std::string& s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }

 private:
  std::ofstream& out_;
};

class BinReader {
 public:
  BinReader(std::ifstream& in, const fs::path& path) : in_(in), path_(path) {}
  std::uint32_t u32() {
    unsigned char b[4];
    read(b, 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  double f32() { return std::bit_cast<float>(u32()); }
  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  void expect_end() {
    if (in_.peek() != std::char_traits<char>::eof()) throw DataError(path_.string() + ": trailing bytes");
  }

 private:
  void read(void* dst, std::size_t n) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (in_.gcount() != static_cast<std::streamsize>(n)) throw DataError(path_.string() + ": truncated file");
  }
  std::ifstream& in_;
  const fs::path& path_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const fs::path& path, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s, const fs::path& path, std::size_t line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": not an integer: '" + s + "'");
  }
}

std::vector<std::string> read_lines(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::string frame_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.ppm", i);
  return buf;
}

// Reads one whitespace-delimited PNM header token, skipping comments.
std::string pnm_token(std::ifstream& in, const fs::path& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok += static_cast<char>(c);
  }
  if (tok.empty()) throw DataError(path.string() + ": truncated PPM header");
  return tok;
}

}  // namespace

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

// --- video ---------------------------------------------------------------

void write_ppm(const fs::path& path, const RgbImage& image) {
  auto out = open_out(path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data.data()), static_cast<std::streamsize>(image.data.size()));
  finish(out, path);
}

RgbImage read_ppm(const fs::path& path) {
  auto in = open_in(path);
  if (pnm_token(in, path) != "P6") throw DataError(path.string() + ": not a binary PPM (P6)");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(in, path));
    h = std::stoi(pnm_token(in, path));
    maxval = std::stoi(pnm_token(in, path));
  } catch (const std::logic_error&) {
    throw DataError(path.string() + ": malformed PPM header");
  }
  if (w <= 0 || h <= 0 || maxval != 255) throw DataError(path.string() + ": unsupported PPM geometry or depth");
  RgbImage img(w, h);
  in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.data.size())) {
    throw DataError(path.string() + ": truncated pixel data");
  }
  return img;
}

void write_video_dir(const fs::path& dir, const VideoSequence& video) {
  video.validate();
  fs::create_directories(dir);
  for (std::size_t i = 0; i < video.frames.size(); ++i) write_ppm(dir / frame_name(i), video.frames[i]);
  std::ostringstream m;
  m << "fps=" << video.fps << "\nframes=" << video.frames.size() << "\n";
  write_text(dir / "manifest.txt", m.str());
}

bool is_video_dir(const fs::path& dir) { return fs::is_regular_file(dir / "manifest.txt"); }

VideoSequence read_video_dir(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.txt";
  if (!fs::is_regular_file(manifest)) throw DataError("missing manifest: " + manifest.string());
  double fps = 25.0;
  int frames = -1;
  const auto lines = read_lines(manifest);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto eq = lines[i].find('=');
    if (eq == std::string::npos) throw DataError(manifest.string() + ":" + std::to_string(i + 1) + ": expected key=value");
    const std::string key = lines[i].substr(0, eq), value = lines[i].substr(eq + 1);
    if (key == "fps") {
      fps = parse_double(value, manifest, i + 1);
    } else if (key == "frames") {
      frames = parse_int(value, manifest, i + 1);
    }
  }
  if (frames < 1) throw DataError(manifest.string() + ": frames must be >= 1");
  if (!(fps > 0.0)) throw DataError(manifest.string() + ": fps must be positive");
  VideoSequence v;
  v.fps = fps;
  v.frames.resize(static_cast<std::size_t>(frames));
  for (int i = 0; i < frames; ++i) v.frames[i] = read_ppm(dir / frame_name(static_cast<std::size_t>(i)));
  v.width = v.frames[0].width;
  v.height = v.frames[0].height;
  try {
    v.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(dir.string() + ": " + e.what());
  }
  return v;
}

// --- transcripts ---------------------------------------------------------

void write_transcript(const fs::path& path, const Transcript& transcript) {
  std::ostringstream o;
  for (const auto& e : transcript) o << e.label << " " << e.start_ms << " " << e.end_ms << "\n";
  write_text(path, o.str());
}

Transcript read_transcript(const fs::path& path) {
  Transcript t;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::istringstream ls(lines[i]);
    std::string label;
    if (!(ls >> label) || label[0] == '#') continue;
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected 'LABEL START_MS END_MS'");
    }
    t.push_back({label, parse_int(a, path, i + 1), parse_int(b, path, i + 1)});
  }
  try {
    validate_transcript(t);
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return t;
}

// --- keypoints -----------------------------------------------------------

void write_keypoints_csv(const fs::path& path, const std::vector<MouthKeypoints>& keypoints) {
  std::ostringstream o;
  o << "frame,lipRow,leftRow,leftCol,rightRow,rightCol\n";
  for (std::size_t i = 0; i < keypoints.size(); ++i) {
    const auto& k = keypoints[i];
    o << i << "," << fixed(k.lip_row, 4) << "," << fixed(k.left_corner.row, 4) << "," << fixed(k.left_corner.col, 4)
      << "," << fixed(k.right_corner.row, 4) << "," << fixed(k.right_corner.col, 4) << "\n";
  }
  write_text(path, o.str());
}

std::vector<MouthKeypoints> read_keypoints_csv(const fs::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "frame,lipRow,leftRow,leftCol,rightRow,rightCol") {
    throw DataError(path.string() + ": unexpected keypoints header");
  }
  std::vector<MouthKeypoints> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    if (f.size() != 6) throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected 6 fields");
    MouthKeypoints k;
    k.lip_row = parse_double(f[1], path, i + 1);
    k.left_corner = {parse_double(f[2], path, i + 1), parse_double(f[3], path, i + 1)};
    k.right_corner = {parse_double(f[4], path, i + 1), parse_double(f[5], path, i + 1)};
    out.push_back(std::move(k));
  }
  return out;
}

// --- ROI -----------------------------------------------------------------

void write_roi(const fs::path& path, const RoiVolume& roi) {
  for (Channel c : kAllChannels) {
    if (!roi.has(c)) {
      throw std::invalid_argument("ROI file needs every channel; missing " + std::string(channel_name(c)));
    }
  }
  auto out = open_out(path);
  BinWriter w(out);
  w.bytes("VSR1");
  w.u32(static_cast<std::uint32_t>(roi.width));
  w.u32(static_cast<std::uint32_t>(roi.height));
  w.u32(static_cast<std::uint32_t>(roi.frames));
  w.u32(static_cast<std::uint32_t>(kAllChannels.size()));
  for (Channel c : kAllChannels) {
    for (double v : roi.channel(c).data) w.f32(v);
  }
  finish(out, path);
}

RoiVolume read_roi(const fs::path& path, double fps) {
  auto in = open_in(path);
  BinReader r(in, path);
  if (r.bytes(4) != "VSR1") throw DataError(path.string() + ": not a VSR1 ROI file");
  RoiVolume roi;
  roi.width = static_cast<int>(r.u32());
  roi.height = static_cast<int>(r.u32());
  roi.frames = static_cast<int>(r.u32());
  const std::uint32_t channels = r.u32();
  if (roi.width < 1 || roi.height < 1 || roi.frames < 1 || roi.width > 4096 || roi.height > 4096) {
    throw DataError(path.string() + ": implausible ROI dimensions");
  }
  if (channels != kAllChannels.size()) throw DataError(path.string() + ": expected 7 channels");
  roi.fps = fps;
  for (Channel c : kAllChannels) {
    Volume v(roi.width, roi.height, roi.frames);
    for (double& x : v.data) x = r.f32();
    roi.channels.push_back(c);
    roi.data.push_back(std::move(v));
  }
  r.expect_end();
  return roi;
}

// --- grid ----------------------------------------------------------------

void write_grid(const fs::path& path, const ProbabilityGrid& grid) {
  auto out = open_out(path);
  BinWriter w(out);
  const int dmax = grid.max_duration();
  w.bytes("GRD1");
  w.u32(static_cast<std::uint32_t>(grid.classes().size()));
  w.u32(static_cast<std::uint32_t>(grid.frame_count()));
  w.u32(static_cast<std::uint32_t>(dmax));
  for (const auto& c : grid.classes()) {
    w.u32(static_cast<std::uint32_t>(c.label.size()));
    w.bytes(c.label);
    w.u32(static_cast<std::uint32_t>(c.min_duration));
    w.u32(static_cast<std::uint32_t>(c.max_duration));
  }
  for (std::size_t c = 0; c < grid.classes().size(); ++c) {
    for (int t = 0; t < grid.frame_count(); ++t) {
      for (int d = 1; d <= dmax; ++d) w.f32(grid.valid(c, t, d) ? grid.at(c, t, d) : -1.0);
    }
  }
  finish(out, path);
}

ProbabilityGrid read_grid(const fs::path& path) {
  auto in = open_in(path);
  BinReader r(in, path);
  if (r.bytes(4) != "GRD1") throw DataError(path.string() + ": not a GRD1 grid file");
  const std::uint32_t n_classes = r.u32();
  const std::uint32_t frames = r.u32();
  const std::uint32_t dmax = r.u32();
  if (n_classes > 100000 || frames > 10000000 || dmax > 100000) throw DataError(path.string() + ": implausible header");
  std::vector<ClassDurationSpec> classes;
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    const std::uint32_t len = r.u32();
    if (len > 4096) throw DataError(path.string() + ": implausible label length");
    ClassDurationSpec spec;
    spec.label = r.bytes(len);
    spec.min_duration = static_cast<int>(r.u32());
    spec.max_duration = static_cast<int>(r.u32());
    if (spec.min_duration < 1 || spec.max_duration < spec.min_duration ||
        spec.max_duration > static_cast<int>(dmax)) {
      throw DataError(path.string() + ": invalid duration bounds for class '" + spec.label + "'");
    }
    classes.push_back(std::move(spec));
  }
  ProbabilityGrid grid(classes, static_cast<int>(frames));
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (int t = 0; t < static_cast<int>(frames); ++t) {
      for (int d = 1; d <= static_cast<int>(dmax); ++d) {
        const double p = r.f32();
        if (grid.valid(c, t, d) && p >= 0.0) grid.set(c, t, d, p);
      }
    }
  }
  r.expect_end();
  return grid;
}

// --- features ------------------------------------------------------------

void write_features_csv(const fs::path& path, const std::vector<FeatureRow>& rows) {
  const std::size_t k = rows.empty() ? 0 : rows[0].features.size();
  const bool labeled = !rows.empty() && rows[0].label.has_value();
  std::ostringstream o;
  o << "start,duration";
  for (std::size_t i = 0; i < k; ++i) o << ",f" << i;
  if (labeled) o << ",label";
  o << "\n";
  char buf[40];
  for (const auto& row : rows) {
    if (row.features.size() != k || row.label.has_value() != labeled) {
      throw std::invalid_argument("feature rows must share dimension and labeling");
    }
    o << row.span.start << "," << row.span.duration;
    for (double v : row.features) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      o << "," << buf;
    }
    if (labeled) o << "," << *row.label;
    o << "\n";
  }
  write_text(path, o.str());
}

std::vector<FeatureRow> read_features_csv(const fs::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw DataError(path.string() + ": empty feature file");
  const auto header = split(lines[0], ',');
  if (header.size() < 2 || header[0] != "start" || header[1] != "duration") {
    throw DataError(path.string() + ": header must start with start,duration");
  }
  const bool labeled = header.back() == "label";
  const std::size_t k = header.size() - 2 - (labeled ? 1 : 0);
  std::vector<FeatureRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    if (f.size() != header.size()) {
      throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected " + std::to_string(header.size()) +
                      " fields");
    }
    FeatureRow row;
    row.span = {parse_int(f[0], path, i + 1), parse_int(f[1], path, i + 1)};
    for (std::size_t j = 0; j < k; ++j) row.features.push_back(parse_double(f[2 + j], path, i + 1));
    if (labeled) row.label = f.back();
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_pgm(const fs::path& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
  if (width < 1 || height < 1 || pixels.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("write_pgm: pixel count does not match geometry");
  }
  auto out = open_out(path);
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  finish(out, path);
}

// --- ground truth --------------------------------------------------------

void write_groundtruth_csv(const fs::path& path, const std::vector<GroundTruthFrame>& frames) {
  std::ostringstream o;
  o << "frame,symCol,symAngle,lipRow,leftRow,leftCol,rightRow,rightCol\n";
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& g = frames[i];
    o << i << "," << fixed(g.line.column, 4) << "," << fixed(g.line.angle, 4) << "," << fixed(g.lip_row, 4) << ","
      << fixed(g.left_corner.row, 4) << "," << fixed(g.left_corner.col, 4) << "," << fixed(g.right_corner.row, 4)
      << "," << fixed(g.right_corner.col, 4) << "\n";
  }
  write_text(path, o.str());
}

std::vector<GroundTruthFrame> read_groundtruth_csv(const fs::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "frame,symCol,symAngle,lipRow,leftRow,leftCol,rightRow,rightCol") {
    throw DataError(path.string() + ": unexpected ground truth header");
  }
  std::vector<GroundTruthFrame> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    if (f.size() != 8) throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected 8 fields");
    std::vector<double> v;
    for (std::size_t j = 1; j < 8; ++j) v.push_back(parse_double(f[j], path, i + 1));
    out.push_back({{v[0], v[1]}, v[2], {v[3], v[4]}, {v[5], v[6]}});
  }
  return out;
}

// --- evaluation ----------------------------------------------------------

void write_eval_report(const fs::path& path, const std::vector<EvalRow>& rows) {
  std::ostringstream o;
  o << "id,T,C,S,D,I,acc\n";
  AlignmentCounts pooled;
  double mean = 0.0;
  for (const auto& r : rows) {
    const auto& c = r.counts;
    o << r.id << "," << c.total << "," << c.correct << "," << c.substitutions << "," << c.deletions << ","
      << c.insertions << "," << fixed(accuracy(c), 6) << "\n";
    pooled += c;
    mean += accuracy(c);
  }
  if (!rows.empty()) {
    mean /= static_cast<double>(rows.size());
    o << "# summary: sequences=" << rows.size() << " T=" << pooled.total << " C=" << pooled.correct
      << " S=" << pooled.substitutions << " D=" << pooled.deletions << " I=" << pooled.insertions
      << " pooled_acc=" << fixed(accuracy(pooled), 6) << " mean_acc=" << fixed(mean, 6) << "\n";
  }
  write_text(path, o.str());
}

void write_confusion_csv(const fs::path& path, const ConfusionMatrix& cm) {
  std::ostringstream o;
  o << "ref\\hyp";
  for (const auto& l : cm.labels) o << "," << l;
  o << ",DEL\n";
  for (std::size_t i = 0; i < cm.cells.size(); ++i) {
    o << (i < cm.labels.size() ? cm.labels[i] : std::string("INS"));
    for (long v : cm.cells[i]) o << "," << v;
    o << "\n";
  }
  write_text(path, o.str());
}

}  // namespace vsr::io
