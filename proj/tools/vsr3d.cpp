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

// vsr3d: command-line front end for the visual speech recognition pipeline.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vsr/decoder.hpp"
#include "vsr/eval.hpp"
#include "vsr/features.hpp"
#include "vsr/fixtures.hpp"
#include "vsr/io.hpp"
#include "vsr/pipeline.hpp"
#include "vsr/segmentation.hpp"
#include "vsr/svm.hpp"

#ifndef VSR3D_VERSION
#define VSR3D_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace vsr;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by every subcommand.
struct Common {
  std::string config_path;
  int threads = 0;  // 0: config value
};

void add_common(CLI::App* sub, Common& common) {
  sub->set_version_flag("--version", VSR3D_VERSION);
  sub->add_option("--config", common.config_path, "JSON pipeline configuration")->check(CLI::ExistingFile);
  sub->add_option("--threads", common.threads, "worker threads (results do not depend on it)")
      ->check(CLI::Range(1, 256));
}

PipelineConfig resolve_config(const Common& common) {
  PipelineConfig cfg = common.config_path.empty() ? PipelineConfig{} : load_config(common.config_path);
  if (common.threads > 0) cfg.threads = common.threads;
  set_worker_threads(cfg.threads);
  return cfg;
}

UnitKind kind_arg(const std::string& s) {
  try {
    return parse_unit_kind(s);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

bool units_are_visemes(const std::string& units) {
  if (units == "phoneme") return false;
  if (units == "viseme") return true;
  throw UsageError("--units must be phoneme or viseme");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(tok, &pos);
      if (pos != tok.size() || v < 1) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated list of positive integers, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError("expected a comma-separated list of numbers, got '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

fs::path roi_path_in(const fs::path& dir) { return dir / "roi.vsr"; }

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  std::uint64_t seed = 1;
  int classes = 3;
  int sentences = 0;
  int units = 8;
  int width = 256;
  int height = 192;
  double noise = 4.0;
  double fps = 25.0;
  int min_frames = 3;
  int max_frames = 12;
  double column_jitter = 3.0;
  double angle_jitter = 2.0;
  std::string out;
};

void run_synth(const SynthArgs& a, const Common& common) {
  resolve_config(common);
  SynthConfig cfg;
  cfg.seed = a.seed;
  cfg.class_count = a.classes;
  cfg.sentence_length = a.units;
  cfg.width = a.width;
  cfg.height = a.height;
  cfg.noise_sigma = a.noise / 255.0;
  cfg.fps = a.fps;
  cfg.min_unit_frames = a.min_frames;
  cfg.max_unit_frames = a.max_frames;
  cfg.column_jitter = a.column_jitter;
  cfg.angle_jitter = a.angle_jitter;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto entries = synth_corpus(cfg, a.sentences, a.out);
  long frames = 0;
  for (const auto& e : entries) frames += static_cast<long>(e.truth.size());
  std::cout << "wrote " << entries.size() << " sentences (" << frames << " frames) to " << a.out << "\n";
}

// --- segment -------------------------------------------------------------

struct SegmentArgs {
  std::string video, corpus, keypoints, roi;
  int lip_row = -1;
};

void segment_one(const fs::path& dir, const fs::path& kp_out, const fs::path& roi_out, const PipelineConfig& cfg,
                 int lip_row) {
  const VideoSequence video = io::read_video_dir(dir);
  SegmentationOptions opt = segmentation_options(cfg);
  if (lip_row >= 0) opt.lip.forced_first_row = lip_row;
  const SegmentationResult r = segment_video(video, opt);
  io::write_keypoints_csv(kp_out, r.image_keypoints);
  io::write_roi(roi_out, r.roi);
  std::cout << dir.string() << ": " << video.frames.size() << " frames, ROI scale " << io::fixed(r.roi.scale, 4)
            << "\n";
}

void run_segment(const SegmentArgs& a, const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  if (a.video.empty() == a.corpus.empty()) throw UsageError("give exactly one of --video or --corpus");
  if (!a.video.empty()) {
    const fs::path dir(a.video);
    segment_one(dir, a.keypoints.empty() ? dir / "keypoints.csv" : fs::path(a.keypoints),
                a.roi.empty() ? roi_path_in(dir) : fs::path(a.roi), cfg, a.lip_row);
    return;
  }
  if (!a.keypoints.empty() || !a.roi.empty()) throw UsageError("--keypoints/--roi apply to --video only");
  for (const auto& dir : list_sentence_dirs(a.corpus)) {
    segment_one(dir, dir / "keypoints.csv", roi_path_in(dir), cfg, a.lip_row);
  }
}

// --- featurize -----------------------------------------------------------

struct FeaturizeArgs {
  std::string roi, transcript, kind = "phoneme", out;
  int min_dur = 0, max_dur = 0;
};

void run_featurize(const FeaturizeArgs& a, const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  const UnitKind kind = kind_arg(a.kind);
  const RoiVolume roi = io::read_roi(a.roi, cfg.fps);
  std::vector<io::FeatureRow> rows;
  if (!a.transcript.empty()) {
    for (auto& s : extract_labeled_samples(roi, io::read_transcript(a.transcript), kind, cfg.features)) {
      rows.push_back({s.span, std::move(s.features), std::move(s.label)});
    }
  } else {
    const DurationBounds b = cfg.bounds_for(kind);
    const int lo = a.min_dur > 0 ? a.min_dur : b.min;
    const int hi = a.max_dur > 0 ? a.max_dur : b.max;
    if (hi < lo) throw UsageError("--max-dur must be >= --min-dur");
    const auto specs = enumerate_subsequences(roi.frames, lo, hi);
    const FeatureExtractor fx(roi, cfg.features);
    auto features = fx.extract(specs);
    for (std::size_t i = 0; i < specs.size(); ++i) rows.push_back({specs[i], std::move(features[i]), std::nullopt});
  }
  io::write_features_csv(a.out, rows);
  std::cout << "wrote " << rows.size() << " feature vectors to " << a.out << "\n";
}

// --- train ---------------------------------------------------------------

struct TrainArgs {
  std::string corpus, kind = "phoneme", out, report, curve, curve_out;
  std::vector<std::string> features;
};

std::vector<AnnotatedRoi> load_annotated_corpus(const fs::path& root, const PipelineConfig& cfg) {
  std::vector<AnnotatedRoi> data;
  for (const auto& dir : list_sentence_dirs(root)) {
    if (!fs::exists(roi_path_in(dir))) {
      throw DataError(dir.string() + ": no roi.vsr (run 'vsr3d segment --corpus' first)");
    }
    data.push_back({io::read_roi(roi_path_in(dir), cfg.fps), io::read_transcript(dir / "transcript.txt")});
  }
  if (data.empty()) throw DataError(root.string() + ": no sentence directories");
  return data;
}

void run_train(const TrainArgs& a, const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  const UnitKind kind = kind_arg(a.kind);
  if (a.corpus.empty() == a.features.empty()) throw UsageError("give exactly one of --corpus or --features");
  LabeledFeatures samples;
  if (!a.corpus.empty()) {
    samples = collect_samples(load_annotated_corpus(a.corpus, cfg), kind, cfg);
  } else {
    for (const auto& f : a.features) {
      for (auto& row : io::read_features_csv(f)) {
        if (!row.label) throw DataError(f + ": feature file has no label column");
        samples.x.push_back(std::move(row.features));
        samples.labels.push_back(std::move(*row.label));
      }
    }
  }
  TrainReport report;
  MultiClassModel model;
  try {
    model = train_units(samples, cfg, &report);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  save_model(model, a.out);

  std::ostringstream o;
  o << "C,gamma,cvAccuracy\n";
  for (const auto& g : report.grid) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.6f\n", g.c, g.gamma, g.cv_accuracy);
    o << buf;
  }
  char summary[200];
  std::snprintf(summary, sizeof summary,
                "# best C=%.17g gamma=%.17g cvAccuracy=%.6f trainAccuracy=%.6f train=%zu cv=%zu\n", report.best_c,
                report.best_gamma, report.cv_accuracy, report.train_accuracy, report.train_count, report.cv_count);
  o << summary;
  if (!a.report.empty()) io::write_text(a.report, o.str());
  std::cout << model.class_labels.size() << " classes, " << samples.x.size() << " samples; " << summary + 2;

  if (!a.curve.empty()) {
    if (a.curve_out.empty()) throw UsageError("--learning-curve needs --curve-out");
    const auto fractions = parse_double_list(a.curve);
    std::ostringstream c;
    c << "trainingFraction,samples,accTrain,accCv\n";
    for (const auto& p : learning_curve(samples, fractions, cfg)) {
      c << io::fixed(p.fraction, 4) << "," << p.samples << "," << io::fixed(p.train_accuracy, 6) << ","
        << io::fixed(p.cv_accuracy, 6) << "\n";
    }
    io::write_text(a.curve_out, c.str());
  }
}

// --- decode --------------------------------------------------------------

struct DecodeArgs {
  std::string roi, corpus, model, pair_model, out, out_dir, grid, units = "phoneme";
  bool use_biphones = false;
};

void run_decode(const DecodeArgs& a, const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  if (a.roi.empty() == a.corpus.empty()) throw UsageError("give exactly one of --roi or --corpus");
  if (a.use_biphones && a.pair_model.empty()) throw UsageError("--use-biphones needs --biphone-model");
  const MultiClassModel unit_model = load_model(a.model);
  std::optional<MultiClassModel> pair_model;
  if (a.use_biphones) pair_model = load_model(a.pair_model);
  DecodeOptions opt;
  opt.pair_model = pair_model ? &*pair_model : nullptr;
  opt.visemes = units_are_visemes(a.units);

  const auto decode_file = [&](const fs::path& roi_path, const fs::path& out, const fs::path& grid_out) {
    const RoiVolume roi = io::read_roi(roi_path, cfg.fps);
    const ProbabilityGrid grid = build_grid(roi, unit_model, cfg, opt.pair_model);
    if (!grid_out.empty()) io::write_grid(grid_out, grid);
    DecodedSequence seq = expand_biphones(decode_sequence(grid), kPairSeparator);
    if (opt.visemes) seq = map_decoded_to_visemes(seq);
    io::write_transcript(out, to_transcript(seq, cfg.fps));
    return seq.size();
  };

  if (!a.roi.empty()) {
    if (a.out.empty()) throw UsageError("--out is required with --roi");
    const auto n = decode_file(a.roi, a.out, a.grid);
    std::cout << "decoded " << n << " units to " << a.out << "\n";
    return;
  }
  if (a.out_dir.empty()) throw UsageError("--out-dir is required with --corpus");
  if (!a.grid.empty()) throw UsageError("--grid applies to --roi only");
  fs::create_directories(a.out_dir);
  std::size_t total = 0, count = 0;
  for (const auto& dir : list_sentence_dirs(a.corpus)) {
    total += decode_file(roi_path_in(dir), fs::path(a.out_dir) / (dir.filename().string() + ".txt"), {});
    ++count;
  }
  std::cout << "decoded " << count << " sequences (" << total << " units) to " << a.out_dir << "\n";
}

// --- eval ----------------------------------------------------------------

struct EvalArgs {
  std::vector<std::string> refs, hyps;
  std::string ref_dir, hyp_dir, baseline_dir, report, confusion, units = "phoneme";
};

struct EvalInput {
  std::string id;
  Transcript ref, hyp;
};

void run_eval(const EvalArgs& a, const Common& common) {
  resolve_config(common);
  const bool visemes = units_are_visemes(a.units);
  std::vector<EvalInput> inputs;
  std::vector<Transcript> baseline;
  if (!a.refs.empty() || !a.hyps.empty()) {
    if (!a.ref_dir.empty() || !a.hyp_dir.empty()) throw UsageError("mix of --ref/--hyp and --ref-dir/--hyp-dir");
    if (a.refs.size() != a.hyps.size()) throw UsageError("--ref and --hyp must be given the same number of times");
    for (std::size_t i = 0; i < a.refs.size(); ++i) {
      inputs.push_back({fs::path(a.refs[i]).stem().string(), io::read_transcript(a.refs[i]),
                        io::read_transcript(a.hyps[i])});
    }
  } else {
    if (a.ref_dir.empty() || a.hyp_dir.empty()) throw UsageError("give --ref/--hyp files or --ref-dir and --hyp-dir");
    for (const auto& dir : list_sentence_dirs(a.ref_dir)) {
      const std::string id = dir.filename().string();
      inputs.push_back({id, io::read_transcript(dir / "transcript.txt"),
                        io::read_transcript(fs::path(a.hyp_dir) / (id + ".txt"))});
      if (!a.baseline_dir.empty()) baseline.push_back(io::read_transcript(fs::path(a.baseline_dir) / (id + ".txt")));
    }
  }
  if (inputs.empty()) throw DataError("nothing to evaluate");

  std::vector<io::EvalRow> rows;
  std::vector<std::vector<AlignedPair>> pairs;
  std::vector<double> acc, base_acc;
  std::set<std::string> label_set;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Alignment al;
    try {
      al = score_transcripts(inputs[i].ref, inputs[i].hyp, visemes);
      if (al.counts.total == 0) throw std::invalid_argument("empty reference");
    } catch (const std::invalid_argument& e) {
      throw DataError(inputs[i].id + ": " + e.what());
    }
    rows.push_back({inputs[i].id, al.counts});
    acc.push_back(accuracy(al.counts));
    for (const auto& p : al.pairs) {
      if (p.ref) label_set.insert(*p.ref);
      if (p.hyp) label_set.insert(*p.hyp);
    }
    pairs.push_back(std::move(al.pairs));
    if (!baseline.empty()) {
      try {
        base_acc.push_back(accuracy(score_transcripts(inputs[i].ref, baseline[i], visemes).counts));
      } catch (const std::invalid_argument& e) {
        throw DataError(inputs[i].id + " (baseline): " + e.what());
      }
    }
  }
  AlignmentCounts pooled;
  double mean = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pooled += rows[i].counts;
    mean += acc[i];
  }
  mean /= static_cast<double>(rows.size());

  if (!a.report.empty()) io::write_eval_report(a.report, rows);
  if (!a.confusion.empty()) {
    const std::vector<std::string> labels(label_set.begin(), label_set.end());
    io::write_confusion_csv(a.confusion, confusion_matrix(pairs, labels));
  }
  std::cout << "sequences=" << rows.size() << " T=" << pooled.total << " C=" << pooled.correct
            << " S=" << pooled.substitutions << " D=" << pooled.deletions << " I=" << pooled.insertions
            << " accuracy=" << io::fixed(accuracy(pooled), 6) << " mean_accuracy=" << io::fixed(mean, 6) << "\n";
  if (!base_acc.empty()) {
    try {
      const TTestResult t = paired_t_test_one_tailed(acc, base_acc);
      std::cout << "paired t-test vs baseline: t=" << io::fixed(t.t, 4) << " df=" << t.df
                << " p=" << io::fixed(t.p, 6) << "\n";
    } catch (const std::invalid_argument& e) {
      std::cout << "paired t-test vs baseline: " << e.what() << "\n";
    }
  }
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  std::string frames = "50,100,200", model, out;
  std::uint64_t seed = 7;
  int train_sentences = 6;
};

void run_bench(const BenchArgs& a, const Common& common) {
  PipelineConfig cfg = resolve_config(common);
  const auto frames = parse_int_list(a.frames);
  SynthConfig synth;
  synth.seed = a.seed;
  MultiClassModel model;
  if (!a.model.empty()) {
    model = load_model(a.model);
  } else {
    PipelineConfig quick = cfg;
    quick.train.c_grid = {64.0};
    quick.train.gamma_grid = {1.0 / 128};
    model = train_synthetic_model(synth, a.train_sentences, quick);
  }
  std::ostringstream o;
  o << "frames,segmentation_s,grid_s,decode_s,total_s,ms_per_frame\n";
  for (const auto& r : run_benchmark(frames, synth, model, cfg)) {
    o << r.frames << "," << io::fixed(r.segmentation_s, 4) << "," << io::fixed(r.grid_s, 4) << ","
      << io::fixed(r.decode_s, 4) << "," << io::fixed(r.total_s(), 4) << "," << io::fixed(r.ms_per_frame(), 3)
      << "\n";
  }
  if (!a.out.empty()) io::write_text(a.out, o.str());
  std::cout << o.str();
}

// --- grid-heatmap --------------------------------------------------------

struct HeatmapArgs {
  std::string grid, roi, model, label, out;
};

void run_heatmap(const HeatmapArgs& a, const Common& common) {
  const PipelineConfig cfg = resolve_config(common);
  ProbabilityGrid grid;
  if (!a.grid.empty()) {
    if (!a.roi.empty() || !a.model.empty()) throw UsageError("give either --grid or --roi with --model");
    grid = io::read_grid(a.grid);
  } else {
    if (a.roi.empty() || a.model.empty()) throw UsageError("give either --grid or --roi with --model");
    const MultiClassModel model = load_model(a.model);
    grid = build_grid(io::read_roi(a.roi, cfg.fps), model, cfg);
  }
  std::size_t cls = grid.classes().size();
  for (std::size_t c = 0; c < grid.classes().size(); ++c) {
    if (grid.classes()[c].label == a.label) {
      cls = c;
      break;
    }
  }
  if (cls == grid.classes().size()) throw DataError("class '" + a.label + "' is not in the grid");
  const int w = grid.frame_count(), h = grid.max_duration();
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h, 0);
  for (int d = 1; d <= h; ++d) {
    for (int t = 0; t < w; ++t) {
      if (grid.valid(cls, t, d)) {
        px[static_cast<std::size_t>(d - 1) * w + t] =
            static_cast<std::uint8_t>(std::lround(255.0 * grid.at(cls, t, d)));
      }
    }
  }
  io::write_pgm(a.out, w, h, px);
  std::cout << "wrote " << w << "x" << h << " heatmap of class " << a.label << " to " << a.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vsr3d: visual speech recognition from mouth-region video"};
  app.set_version_flag("--version", VSR3D_VERSION);
  app.require_subcommand(1);

  Common common;

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "generate a deterministic synthetic corpus");
  add_common(s, common);
  s->add_option("--seed", synth.seed, "random seed");
  s->add_option("--classes", synth.classes, "number of synthetic classes")->check(CLI::Range(2, 8));
  s->add_option("--sentences", synth.sentences, "number of sentences")->required()->check(CLI::PositiveNumber);
  s->add_option("--units", synth.units, "units per sentence")->check(CLI::PositiveNumber);
  s->add_option("--width", synth.width, "frame width");
  s->add_option("--height", synth.height, "frame height");
  s->add_option("--noise", synth.noise, "pixel noise sigma in 8-bit levels")->check(CLI::NonNegativeNumber);
  s->add_option("--fps", synth.fps, "frame rate");
  s->add_option("--min-frames", synth.min_frames, "shortest unit in frames");
  s->add_option("--max-frames", synth.max_frames, "longest unit in frames");
  s->add_option("--column-jitter", synth.column_jitter, "head sway amplitude in pixels");
  s->add_option("--angle-jitter", synth.angle_jitter, "head roll amplitude in degrees");
  s->add_option("--out", synth.out, "output corpus directory")->required();
  s->callback([&] { run_synth(synth, common); });

  SegmentArgs seg;
  auto* g = app.add_subcommand("segment", "locate mouth keypoints and extract ROI volumes");
  add_common(g, common);
  g->add_option("--video", seg.video, "frame directory with manifest.txt");
  g->add_option("--corpus", seg.corpus, "corpus root; every sentence directory is processed");
  g->add_option("--keypoints", seg.keypoints, "keypoints CSV (default <video>/keypoints.csv)");
  g->add_option("--roi", seg.roi, "ROI volume file (default <video>/roi.vsr)");
  g->add_option("--lip-row", seg.lip_row, "force the lip row of the first frame (cropped coordinates)");
  g->callback([&] { run_segment(seg, common); });

  FeaturizeArgs feat;
  auto* f = app.add_subcommand("featurize", "compute DCT feature vectors of ROI subsequences");
  add_common(f, common);
  f->add_option("--roi", feat.roi, "ROI volume file")->required()->check(CLI::ExistingFile);
  f->add_option("--transcript", feat.transcript, "label the transcript intervals instead of all subsequences")
      ->check(CLI::ExistingFile);
  f->add_option("--kind", feat.kind, "phoneme|viseme|biphone|biviseme");
  f->add_option("--min-dur", feat.min_dur, "shortest subsequence (unlabeled mode)");
  f->add_option("--max-dur", feat.max_dur, "longest subsequence (unlabeled mode)");
  f->add_option("--out", feat.out, "feature CSV")->required();
  f->callback([&] { run_featurize(feat, common); });

  TrainArgs train;
  auto* t = app.add_subcommand("train", "train one-vs-rest SVMs with cross-validated C and gamma");
  add_common(t, common);
  t->add_option("--corpus", train.corpus, "segmented corpus root");
  t->add_option("--features", train.features, "labeled feature CSV (repeatable)");
  t->add_option("--kind", train.kind, "phoneme|viseme|biphone|biviseme");
  t->add_option("--out", train.out, "model JSON")->required();
  t->add_option("--report", train.report, "cross-validation report CSV");
  t->add_option("--learning-curve", train.curve, "comma-separated training fractions");
  t->add_option("--curve-out", train.curve_out, "learning-curve CSV");
  t->callback([&] { run_train(train, common); });

  DecodeArgs dec;
  auto* d = app.add_subcommand("decode", "decode the most likely unit sequence");
  add_common(d, common);
  d->add_option("--roi", dec.roi, "ROI volume file");
  d->add_option("--corpus", dec.corpus, "segmented corpus root");
  d->add_option("--model", dec.model, "unit model JSON")->required()->check(CLI::ExistingFile);
  d->add_option("--biphone-model", dec.pair_model, "pair model JSON")->check(CLI::ExistingFile);
  d->add_flag("--use-biphones", dec.use_biphones, "add the pair classes to the decoder");
  d->add_option("--units", dec.units, "phoneme|viseme output labels");
  d->add_option("--out", dec.out, "transcript output (with --roi)");
  d->add_option("--out-dir", dec.out_dir, "transcript directory (with --corpus)");
  d->add_option("--grid", dec.grid, "also write the probability grid (with --roi)");
  d->callback([&] { run_decode(dec, common); });

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "align hypotheses to references and report accuracy");
  add_common(e, common);
  e->add_option("--ref", ev.refs, "reference transcript (repeatable)");
  e->add_option("--hyp", ev.hyps, "hypothesis transcript (repeatable, paired with --ref)");
  e->add_option("--ref-dir", ev.ref_dir, "corpus root with transcript.txt per sentence");
  e->add_option("--hyp-dir", ev.hyp_dir, "directory of <sentence>.txt hypotheses");
  e->add_option("--baseline-dir", ev.baseline_dir, "second hypothesis directory for a paired t-test");
  e->add_option("--units", ev.units, "phoneme|viseme scoring");
  e->add_option("--report", ev.report, "per-sequence report CSV");
  e->add_option("--confusion", ev.confusion, "confusion matrix CSV");
  e->callback([&] { run_eval(ev, common); });

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "time each stage against sequence length");
  add_common(b, common);
  b->add_option("--frames", bench.frames, "comma-separated frame counts");
  b->add_option("--seed", bench.seed, "synthetic data seed");
  b->add_option("--model", bench.model, "model JSON (default: train a small synthetic model)")
      ->check(CLI::ExistingFile);
  b->add_option("--train-sentences", bench.train_sentences, "sentences for the default model")
      ->check(CLI::PositiveNumber);
  b->add_option("--out", bench.out, "table CSV");
  b->callback([&] { run_bench(bench, common); });

  HeatmapArgs heat;
  auto* h = app.add_subcommand("grid-heatmap", "render one class of a probability grid as PGM");
  add_common(h, common);
  h->add_option("--grid", heat.grid, "grid file")->check(CLI::ExistingFile);
  h->add_option("--roi", heat.roi, "ROI volume file")->check(CLI::ExistingFile);
  h->add_option("--model", heat.model, "model JSON")->check(CLI::ExistingFile);
  h->add_option("--class", heat.label, "class label")->required();
  h->add_option("--out", heat.out, "PGM output")->required();
  h->callback([&] { run_heatmap(heat, common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 1;
  } catch (const DataError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
