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

// RBF soft-margin SVMs trained with sequential minimal optimization, Platt
// probability calibration and one-vs-rest multi-class training.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vsr/features.hpp"

namespace vsr {

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

struct PlattParams {
  double a = 0.0;
  double b = 0.0;
};

struct BinarySvmModel {
  std::vector<FeatureVector> support_vectors;
  std::vector<double> alphas;  // alpha_i * y_i
  double bias = 0.0;
  double gamma = 1.0;
  double c = 1.0;
  PlattParams platt;
};

struct SmoOptions {
  double tolerance = 1e-3;
  int max_passes = 100000;  // outer sweeps over the training set
  /// When set, receives the dual objective after every successful step.
  std::vector<double>* objective_trace = nullptr;
};

/// Full dual solution, exposed for KKT verification.
struct SmoSolution {
  std::vector<double> alpha;  // unsigned, in [0, C]
  double bias = 0.0;
  int steps = 0;
  bool converged = false;
};

/// Platt's two-loop SMO. Examples are visited in index order and the second
/// choice heuristic falls back to index-ordered scans, so results are
/// reproducible. Throws std::invalid_argument when only one label is present.
SmoSolution solve_smo(std::span<const FeatureVector> x, std::span<const int> y, double c, double gamma,
                      const SmoOptions& options = {});

/// Keeps the non-zero alphas of solve_smo as support vectors. Platt
/// parameters are left at zero.
BinarySvmModel train_binary_smo(std::span<const FeatureVector> x, std::span<const int> y, double c,
                                double gamma, const SmoOptions& options = {});

double decision_value(const BinarySvmModel& model, std::span<const double> x);

/// Negative log-likelihood of the smoothed Platt targets under p(f) = 1 / (1 + exp(a f + b)).
double platt_nll(std::span<const double> scores, std::span<const int> labels, const PlattParams& params);

/// Newton iterations with backtracking line search (Lin, Lin and Weng).
PlattParams fit_platt(std::span<const double> scores, std::span<const int> labels);

double platt_probability(const PlattParams& params, double score);

struct TrainConfig {
  std::vector<double> c_grid{1.0, 4.0, 16.0, 64.0, 256.0};
  std::vector<double> gamma_grid{1.0 / 512, 1.0 / 128, 1.0 / 32, 1.0 / 8};
  double tolerance = 1e-3;
  int max_passes = 100000;
  double cv_fraction = 0.2;
  int platt_folds = 5;  // internal folds producing the scores Platt is fitted on
};

struct MultiClassModel {
  std::vector<std::string> class_labels;
  std::vector<BinarySvmModel> per_class;
  StandardizationStats stats;
  FeatureConfig features;
  double c = 0.0;
  double gamma = 0.0;
  std::string pipeline_json;  // optional JSON object echoed verbatim as "pipeline"
};

struct LabeledFeatures {
  std::vector<FeatureVector> x;
  std::vector<std::string> labels;
};

struct GridPointResult {
  double c = 0.0;
  double gamma = 0.0;
  double cv_accuracy = 0.0;
};

struct TrainReport {
  std::vector<GridPointResult> grid;
  double best_c = 0.0;
  double best_gamma = 0.0;
  double cv_accuracy = 0.0;
  double train_accuracy = 0.0;
  std::size_t train_count = 0;
  std::size_t cv_count = 0;
};

/// Trains one Platt-calibrated binary model per class on the fixed feature
/// scaling `stats` (raw feature vectors are standardized internally).
MultiClassModel train_one_vs_rest(const LabeledFeatures& train, const std::vector<std::string>& classes,
                                  const StandardizationStats& stats, double c, double gamma,
                                  const TrainConfig& config);

/// Stratified split (first cv_fraction of each class in input order go to
/// cross-validation), grid search on top-1 cross-validation accuracy, ties to
/// smaller C then smaller gamma, final models on the training portion.
MultiClassModel train_multiclass(const LabeledFeatures& data, const TrainConfig& config,
                                 const FeatureConfig& features = {}, TrainReport* report = nullptr);

/// Independent per-class calibrated probabilities for a raw feature vector.
std::vector<double> predict_probabilities(const MultiClassModel& model, std::span<const double> x);

/// Same for a vector already standardized with model.stats.
std::vector<double> predict_probabilities_standardized(const MultiClassModel& model, std::span<const double> z);

/// Fraction of samples whose true class has the highest probability.
double top1_accuracy(const MultiClassModel& model, const LabeledFeatures& data);

std::string model_to_json(const MultiClassModel& model);
MultiClassModel model_from_json(const std::string& text);
void save_model(const MultiClassModel& model, const std::filesystem::path& path);
MultiClassModel load_model(const std::filesystem::path& path);

}  // namespace vsr
