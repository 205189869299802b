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

#include "vsr/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace vsr {

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("rbf_kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

// --- SMO -----------------------------------------------------------------

namespace {

class KernelSource {
 public:
  KernelSource(std::span<const FeatureVector> x, double gamma) : x_(x), gamma_(gamma), n_(x.size()) {
    if (n_ <= kDenseLimit) {
      dense_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const double k = rbf_kernel(x_[i], x_[j], gamma_);
          dense_[i * n_ + j] = k;
          dense_[j * n_ + i] = k;
        }
      }
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    return dense_.empty() ? rbf_kernel(x_[i], x_[j], gamma_) : dense_[i * n_ + j];
  }

 private:
  static constexpr std::size_t kDenseLimit = 4000;
  std::span<const FeatureVector> x_;
  double gamma_;
  std::size_t n_;
  std::vector<double> dense_;
};

class SmoSolver {
 public:
  SmoSolver(std::span<const FeatureVector> x, std::span<const int> y, double c, double gamma,
            const SmoOptions& options)
      : y_(y), c_(c), options_(options), kernel_(x, gamma), n_(x.size()), alpha_(n_, 0.0), f_(n_, 0.0) {}

  SmoSolution run() {
    int changed = 0;
    bool examine_all = true;
    int passes = 0;
    bool converged = false;
    while (passes < options_.max_passes) {
      ++passes;
      changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (examine_all || non_bound(i)) changed += examine(i);
      }
      if (examine_all) {
        if (changed == 0) {
          converged = true;
          break;
        }
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return {alpha_, bias_, steps_, converged};
  }

 private:
  double error(std::size_t i) const { return f_[i] + bias_ - y_[i]; }
  bool non_bound(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }

  int examine(std::size_t i2) {
    const double e2 = error(i2);
    const double r2 = e2 * y_[i2];
    const double tol = options_.tolerance;
    if (!((r2 < -tol && alpha_[i2] < c_) || (r2 > tol && alpha_[i2] > 0.0))) return 0;

    // Second choice: largest |E1 - E2| among non-bound examples.
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!non_bound(i) || i == i2) continue;
      const double gap = std::fabs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && step(best, i2)) return 1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (non_bound(i) && step(i, i2)) return 1;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (!non_bound(i) && step(i, i2)) return 1;
    }
    return 0;
  }

  bool step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const int y1 = y_[i1], y2 = y_[i2];
    const double e1 = error(i1), e2 = error(i2);
    const double s = y1 * y2;
    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c_, c_ + a2 - a1);
    } else {
      lo = std::max(0.0, a2 + a1 - c_);
      hi = std::min(c_, a2 + a1);
    }
    if (lo >= hi) return false;
    const double k11 = kernel_(i1, i1), k12 = kernel_(i1, i2), k22 = kernel_(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2n;
    if (eta > 0.0) {
      a2n = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Degenerate curvature: take the better end point of the segment.
      const double f1 = y1 * (e1 - bias_) - a1 * k11 - s * a2 * k12;
      const double f2 = y2 * (e2 - bias_) - s * a1 * k12 - a2 * k22;
      const double l1 = a1 + s * (a2 - lo), h1 = a1 + s * (a2 - hi);
      const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (lobj < hobj - kEps) {
        a2n = lo;
      } else if (lobj > hobj + kEps) {
        a2n = hi;
      } else {
        a2n = a2;
      }
    }
    const double snap = 1e-12 * c_;
    if (a2n < snap) a2n = 0.0;
    if (a2n > c_ - snap) a2n = c_;
    if (std::fabs(a2n - a2) < kEps * (a2n + a2 + kEps)) return false;
    double a1n = a1 + s * (a2 - a2n);
    if (a1n < snap) a1n = 0.0;
    if (a1n > c_ - snap) a1n = c_;

    const double d1 = y1 * (a1n - a1), d2 = y2 * (a2n - a2);
    const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
    if (a1n > 0.0 && a1n < c_) {
      bias_ = b1;
    } else if (a2n > 0.0 && a2n < c_) {
      bias_ = b2;
    } else {
      bias_ = 0.5 * (b1 + b2);
    }
    for (std::size_t i = 0; i < n_; ++i) f_[i] += d1 * kernel_(i1, i) + d2 * kernel_(i2, i);
    alpha_[i1] = a1n;
    alpha_[i2] = a2n;
    ++steps_;
    if (options_.objective_trace) options_.objective_trace->push_back(dual_objective());
    return true;
  }

  double dual_objective() const {
    double sum = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      sum += alpha_[i];
      quad += alpha_[i] * y_[i] * f_[i];
    }
    return sum - 0.5 * quad;
  }

  static constexpr double kEps = 1e-10;

  std::span<const int> y_;
  double c_;
  SmoOptions options_;
  KernelSource kernel_;
  std::size_t n_;
  std::vector<double> alpha_;
  std::vector<double> f_;  // sum_j alpha_j y_j K(j, i), without bias
  double bias_ = 0.0;
  int steps_ = 0;
};

void check_training_set(std::span<const FeatureVector> x, std::span<const int> y, double c, double gamma) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("SMO: feature/label count mismatch");
  if (!(c > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("SMO: C and gamma must be positive");
  bool pos = false, neg = false;
  for (int label : y) {
    if (label == 1) {
      pos = true;
    } else if (label == -1) {
      neg = true;
    } else {
      throw std::invalid_argument("SMO: labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw std::invalid_argument("SMO: degenerate training set, only one label present");
  for (const auto& row : x) {
    if (row.size() != x[0].size()) throw std::invalid_argument("SMO: ragged feature matrix");
  }
}

}  // namespace

SmoSolution solve_smo(std::span<const FeatureVector> x, std::span<const int> y, double c, double gamma,
                      const SmoOptions& options) {
  check_training_set(x, y, c, gamma);
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("SMO: tolerance must be positive");
  return SmoSolver(x, y, c, gamma, options).run();
}

BinarySvmModel train_binary_smo(std::span<const FeatureVector> x, std::span<const int> y, double c,
                                double gamma, const SmoOptions& options) {
  const SmoSolution sol = solve_smo(x, y, c, gamma, options);
  BinarySvmModel model;
  model.gamma = gamma;
  model.c = c;
  model.bias = sol.bias;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (sol.alpha[i] > 0.0) {
      model.support_vectors.push_back(x[i]);
      model.alphas.push_back(sol.alpha[i] * y[i]);
    }
  }
  return model;
}

double decision_value(const BinarySvmModel& model, std::span<const double> x) {
  double f = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.alphas[i] * rbf_kernel(model.support_vectors[i], x, model.gamma);
  }
  return f;
}

// --- Platt scaling -------------------------------------------------------

namespace {

struct PlattTargets {
  std::vector<double> t;
  double prior_pos = 0.0, prior_neg = 0.0;
};

PlattTargets platt_targets(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("Platt: score/label count mismatch");
  PlattTargets pt;
  for (int l : labels) (l > 0 ? pt.prior_pos : pt.prior_neg) += 1.0;
  if (pt.prior_pos == 0.0 || pt.prior_neg == 0.0) {
    throw std::invalid_argument("Platt: degenerate input, both labels are required");
  }
  const double hi = (pt.prior_pos + 1.0) / (pt.prior_pos + 2.0);
  const double lo = 1.0 / (pt.prior_neg + 2.0);
  for (int l : labels) pt.t.push_back(l > 0 ? hi : lo);
  return pt;
}

// -log likelihood term for target t at z = a f + b, overflow-safe.
double nll_term(double t, double z) {
  return z >= 0.0 ? t * z + std::log1p(std::exp(-z)) : (t - 1.0) * z + std::log1p(std::exp(z));
}

double nll(std::span<const double> scores, const std::vector<double>& t, double a, double b) {
  double f = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) f += nll_term(t[i], a * scores[i] + b);
  return f;
}

}  // namespace

double platt_nll(std::span<const double> scores, std::span<const int> labels, const PlattParams& params) {
  const auto pt = platt_targets(scores, labels);
  return nll(scores, pt.t, params.a, params.b);
}

PlattParams fit_platt(std::span<const double> scores, std::span<const int> labels) {
  const auto pt = platt_targets(scores, labels);
  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;
  constexpr double kEps = 1e-5;

  double a = 0.0;
  double b = std::log((pt.prior_neg + 1.0) / (pt.prior_pos + 1.0));
  double fval = nll(scores, pt.t, a, b);
  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double z = a * scores[i] + b;
      double p, q;
      if (z >= 0.0) {
        p = std::exp(-z) / (1.0 + std::exp(-z));
        q = 1.0 / (1.0 + std::exp(-z));
      } else {
        p = 1.0 / (1.0 + std::exp(z));
        q = std::exp(z) / (1.0 + std::exp(z));
      }
      const double d2 = p * q;
      h11 += scores[i] * scores[i] * d2;
      h22 += d2;
      h21 += scores[i] * d2;
      const double d1 = pt.t[i] - p;
      g1 += scores[i] * d1;
      g2 += d1;
    }
    if (std::fabs(g1) < kEps && std::fabs(g2) < kEps) break;

    const double det = h11 * h22 - h21 * h21;
    const double da = -(h22 * g1 - h21 * g2) / det;
    const double db = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * da + g2 * db;
    double step = 1.0;
    while (step >= kMinStep) {
      const double na = a + step * da, nb = b + step * db;
      const double nf = nll(scores, pt.t, na, nb);
      if (nf < fval + 1e-4 * step * gd) {
        a = na;
        b = nb;
        fval = nf;
        break;
      }
      step *= 0.5;
    }
    if (step < kMinStep) break;  // line search failed
  }
  return {a, b};
}

double platt_probability(const PlattParams& params, double score) {
  const double z = params.a * score + params.b;
  return z >= 0.0 ? std::exp(-z) / (1.0 + std::exp(-z)) : 1.0 / (1.0 + std::exp(z));
}

// --- multi-class ---------------------------------------------------------

namespace {

std::vector<FeatureVector> standardize_all(const std::vector<FeatureVector>& x, const StandardizationStats& st) {
  std::vector<FeatureVector> out;
  out.reserve(x.size());
  for (const auto& v : x) out.push_back(standardize(v, st));
  return out;
}

// Decision values from k deterministic folds (example i belongs to fold i mod k).
std::vector<double> fold_scores(const std::vector<FeatureVector>& z, const std::vector<int>& y, double c,
                                double gamma, const SmoOptions& smo, int folds) {
  const std::size_t n = z.size();
  std::vector<double> scores(n, 0.0);
  const auto k = static_cast<std::size_t>(std::max(2, std::min<int>(folds, static_cast<int>(n))));
  for (std::size_t fold = 0; fold < k; ++fold) {
    std::vector<FeatureVector> tx;
    std::vector<int> ty;
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % k == fold) continue;
      tx.push_back(z[i]);
      ty.push_back(y[i]);
      (y[i] > 0 ? pos : neg) = true;
    }
    if (pos && neg) {
      const BinarySvmModel m = train_binary_smo(tx, ty, c, gamma, smo);
      for (std::size_t i = fold; i < n; i += k) scores[i] = decision_value(m, z[i]);
    } else {
      for (std::size_t i = fold; i < n; i += k) scores[i] = pos ? 1.0 : (neg ? -1.0 : 0.0);
    }
  }
  return scores;
}

}  // namespace

MultiClassModel train_one_vs_rest(const LabeledFeatures& train, const std::vector<std::string>& classes,
                                  const StandardizationStats& stats, double c, double gamma,
                                  const TrainConfig& config) {
  const auto z = standardize_all(train.x, stats);
  MultiClassModel model;
  model.class_labels = classes;
  model.per_class.resize(classes.size());
  model.stats = stats;
  model.c = c;
  model.gamma = gamma;
  const SmoOptions smo{config.tolerance, config.max_passes, nullptr};
  parallel_for(classes.size(), [&](std::size_t k) {
    std::vector<int> y(train.labels.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = train.labels[i] == classes[k] ? 1 : -1;
    BinarySvmModel m = train_binary_smo(z, y, c, gamma, smo);
    m.platt = fit_platt(fold_scores(z, y, c, gamma, smo, config.platt_folds), y);
    model.per_class[k] = std::move(m);
  });
  return model;
}

std::vector<double> predict_probabilities_standardized(const MultiClassModel& model, std::span<const double> z) {
  if (z.size() != model.stats.mean.size()) {
    throw std::invalid_argument("predict: feature dimension " + std::to_string(z.size()) + " != model dimension " +
                                std::to_string(model.stats.mean.size()));
  }
  std::vector<double> p(model.per_class.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = platt_probability(model.per_class[k].platt, decision_value(model.per_class[k], z));
  }
  return p;
}

std::vector<double> predict_probabilities(const MultiClassModel& model, std::span<const double> x) {
  return predict_probabilities_standardized(model, standardize(x, model.stats));
}

double top1_accuracy(const MultiClassModel& model, const LabeledFeatures& data) {
  if (data.x.empty()) return 0.0;
  std::vector<int> hit(data.x.size(), 0);
  parallel_for(data.x.size(), [&](std::size_t i) {
    const auto p = predict_probabilities(model, data.x[i]);
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    hit[i] = model.class_labels[best] == data.labels[i] ? 1 : 0;
  });
  long correct = 0;
  for (int h : hit) correct += h;
  return static_cast<double>(correct) / static_cast<double>(data.x.size());
}

MultiClassModel train_multiclass(const LabeledFeatures& data, const TrainConfig& config,
                                 const FeatureConfig& features, TrainReport* report) {
  if (data.x.size() != data.labels.size()) throw std::invalid_argument("train: feature/label count mismatch");
  if (config.c_grid.empty() || config.gamma_grid.empty()) throw std::invalid_argument("train: empty grid");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("train: tolerance must be positive");

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.labels.size(); ++i) by_class[data.labels[i]].push_back(i);
  if (by_class.size() < 2) throw std::invalid_argument("train: need at least 2 classes");
  std::vector<std::string> classes;
  for (const auto& [label, idx] : by_class) {
    if (idx.size() < 2) throw std::invalid_argument("train: class '" + label + "' has fewer than 2 samples");
    classes.push_back(label);
  }

  LabeledFeatures train, cv;
  std::vector<bool> is_cv(data.x.size(), false);
  if (config.cv_fraction > 0.0) {
    for (const auto& [label, idx] : by_class) {
      const auto n_cv = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(config.cv_fraction * idx.size() + 1e-9)));
      for (std::size_t k = 0; k < std::min(n_cv, idx.size() - 1); ++k) is_cv[idx[k]] = true;
    }
  }
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    auto& dst = is_cv[i] ? cv : train;
    dst.x.push_back(data.x[i]);
    dst.labels.push_back(data.labels[i]);
  }
  const StandardizationStats stats = fit_standardization(train.x);

  TrainReport local;
  MultiClassModel best;
  bool have_best = false;
  for (double c : config.c_grid) {
    for (double gamma : config.gamma_grid) {
      MultiClassModel m = train_one_vs_rest(train, classes, stats, c, gamma, config);
      const double acc = cv.x.empty() ? top1_accuracy(m, train) : top1_accuracy(m, cv);
      local.grid.push_back({c, gamma, acc});
      const bool better = !have_best || acc > local.cv_accuracy ||
                          (acc == local.cv_accuracy && (c < best.c || (c == best.c && gamma < best.gamma)));
      if (better) {
        best = std::move(m);
        local.cv_accuracy = acc;
        have_best = true;
      }
    }
  }
  best.features = features;
  local.best_c = best.c;
  local.best_gamma = best.gamma;
  local.train_count = train.x.size();
  local.cv_count = cv.x.size();
  local.train_accuracy = top1_accuracy(best, train);
  if (report) *report = std::move(local);
  return best;
}

// --- serialization -------------------------------------------------------

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num_array(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += num(v[i]);
  }
  return s + "]";
}

std::string str(const std::string& s) { return nlohmann::json(s).dump(); }

}  // namespace

std::string model_to_json(const MultiClassModel& m) {
  std::ostringstream o;
  o << "{\n  \"version\": 1,\n  \"classLabels\": [";
  for (std::size_t i = 0; i < m.class_labels.size(); ++i) o << (i ? ", " : "") << str(m.class_labels[i]);
  o << "],\n  \"config\": {\"channel\": " << str(std::string(channel_name(m.features.channel)))
    << ", \"deltaTms\": " << num(m.features.delta_t_ms) << ", \"l\": " << m.features.uniform_length
    << ", \"s\": " << m.features.mask_size << ", \"C\": " << num(m.c) << ", \"gamma\": " << num(m.gamma) << "},\n";
  o << "  \"stats\": {\"mean\": " << num_array(m.stats.mean) << ", \"std\": " << num_array(m.stats.stddev) << "},\n";
  if (!m.pipeline_json.empty()) o << "  \"pipeline\": " << m.pipeline_json << ",\n";
  o << "  \"models\": [";
  for (std::size_t k = 0; k < m.per_class.size(); ++k) {
    const auto& b = m.per_class[k];
    o << (k ? ",\n" : "\n") << "    {\"label\": " << str(m.class_labels[k]) << ", \"C\": " << num(b.c)
      << ", \"gamma\": " << num(b.gamma) << ", \"bias\": " << num(b.bias) << ", \"plattA\": " << num(b.platt.a)
      << ", \"plattB\": " << num(b.platt.b) << ",\n     \"alphas\": " << num_array(b.alphas)
      << ",\n     \"supportVectors\": [";
    for (std::size_t i = 0; i < b.support_vectors.size(); ++i) {
      o << (i ? ", " : "") << num_array(b.support_vectors[i]);
    }
    o << "]}";
  }
  o << "\n  ]\n}\n";
  return o.str();
}

MultiClassModel model_from_json(const std::string& text) {
  MultiClassModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1) throw DataError("unsupported model version");
    m.class_labels = j.at("classLabels").get<std::vector<std::string>>();
    const auto& cfg = j.at("config");
    m.features.channel = parse_channel(cfg.at("channel").get<std::string>());
    m.features.delta_t_ms = cfg.at("deltaTms").get<double>();
    m.features.uniform_length = cfg.at("l").get<int>();
    m.features.mask_size = cfg.at("s").get<int>();
    m.c = cfg.at("C").get<double>();
    m.gamma = cfg.at("gamma").get<double>();
    if (j.contains("pipeline")) m.pipeline_json = j["pipeline"].dump();
    m.stats.mean = j.at("stats").at("mean").get<std::vector<double>>();
    m.stats.stddev = j.at("stats").at("std").get<std::vector<double>>();
    for (const auto& jm : j.at("models")) {
      BinarySvmModel b;
      b.c = jm.value("C", m.c);
      b.gamma = jm.at("gamma").get<double>();
      b.bias = jm.at("bias").get<double>();
      b.platt = {jm.at("plattA").get<double>(), jm.at("plattB").get<double>()};
      b.alphas = jm.at("alphas").get<std::vector<double>>();
      b.support_vectors = jm.at("supportVectors").get<std::vector<FeatureVector>>();
      if (b.alphas.size() != b.support_vectors.size()) throw DataError("model: alpha/support vector count mismatch");
      m.per_class.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  if (m.per_class.size() != m.class_labels.size()) throw DataError("model: one binary model per class required");
  if (m.stats.mean.size() != m.stats.stddev.size()) throw DataError("model: stats dimension mismatch");
  return m;
}

void save_model(const MultiClassModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file " + path.string());
  out << model_to_json(model);
  if (!out) throw DataError("failed writing model file " + path.string());
}

MultiClassModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace vsr
